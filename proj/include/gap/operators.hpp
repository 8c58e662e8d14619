#pragma once

#include "gap/subspace.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace gap {

/// Which case of the standard averagedness assumption a parameter triple
/// satisfies: alpha in (0,1], alpha1, alpha2 in (0,2] and
///   A1: alpha1, alpha2 < 2
///   A2: alpha < 1 and not both relaxations equal to 2
///   A3: alpha < 1 and alpha1 = alpha2 = 2
enum class AssumptionCase { A1, A2, A3, None };

std::string_view to_string(AssumptionCase c);

/// Relaxation triple of S = (1 - alpha) I + alpha P_U^{alpha2} P_V^{alpha1}.
///
/// Any positive triple is accepted; classify() tells callers whether the
/// iteration is guaranteed to be averaged.
struct GapParameters {
  double alpha = 1.0;
  double alpha1 = 1.0;
  double alpha2 = 1.0;
  std::string label;

  AssumptionCase classify() const;
};

/// Validates positivity and builds the triple.
GapParameters make_parameters(double alpha, double alpha1, double alpha2,
                              std::string label = {});

enum class MethodKind {
  GapStar,   // (1, a*, a*)
  GapaInit,  // first step of the adaptive method: (1, a0, a0)
  MapOpt,    // (2 / (1 + sin^2 tF), 1, 1)
  AP,        // (1, 1, 1)
  DR,        // (1/2, 2, 2)
  Gap2A,     // (1, 2, 2 / (1 + sin 2tF))
  PRAP,      // (1, 2 / (sin^2 tP + sin^2 tF), 1)
  GapFixed,  // (1, c, c)
};

/// A method name plus the scalar some presets carry (c for GAP_FIXED(c), the
/// initial relaxation for GAPA_INIT).
struct Method {
  MethodKind kind = MethodKind::GapStar;
  double value = 0.0;

  /// Canonical name, e.g. "GAP_STAR", "MAP", "GAP_FIXED(1.8)".
  std::string name() const;

  /// Parses canonical names and a few aliases ("GAPA", "MAP_OPT", "GAP1.8").
  static Method parse(std::string_view text);

  bool operator==(const Method&) const = default;
};

inline Method gap_fixed(double c) { return {MethodKind::GapFixed, c}; }

/// (1 - alpha) x + alpha P_S x.
Vector relaxed_project(const Subspace& S, double alpha, const Vector& x);

/// One GAP step (1 - a) x + a P_U^{a2}(P_V^{a1} x).
Vector gap_step(const GapParameters& params, const Subspace& U,
                const Subspace& V, const Vector& x);

/// alpha = 1, alpha1 = alpha2 = 2 / (1 + sin theta_f); theta_f in (0, pi/2].
GapParameters optimal_parameters(double theta_f);

/// Parameter triple for a named method. Presets that depend on the
/// Friedrichs angle (and PRAP on the largest principal angle) throw
/// std::invalid_argument when it is missing.
GapParameters preset(const Method& method,
                     std::optional<double> theta_f = std::nullopt,
                     std::optional<double> theta_p = std::nullopt);

/// Dense n x n matrix of the GAP operator, for oracle checks.
Matrix build_dense_operator(const GapParameters& params, const Subspace& U,
                            const Subspace& V);

}  // namespace gap
