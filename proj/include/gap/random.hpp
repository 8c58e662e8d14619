#pragma once

#include <cstdint>
#include <string_view>

namespace gap {

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z);

/// Seed of problem `index` in category `category` under `base_seed`.
std::uint64_t substream_seed(std::uint64_t base_seed, std::uint64_t category,
                             std::uint64_t index);

/// Counter-based generator: draw i is mix64(key + (i + 1) * golden_gamma),
/// i.e. SplitMix64 addressed by counter. Normals come from Box-Muller on
/// pairs of uniforms, both variates used. The stream is part of the result
/// format, so any change here must bump kName.
class CounterRng {
 public:
  static constexpr std::string_view kName = "splitmix64-ctr/box-muller/v1";

  explicit CounterRng(std::uint64_t key) : key_(key) {}

  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1).
  double uniform();
  /// Standard normal.
  double normal();

  std::uint64_t draws() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace gap
