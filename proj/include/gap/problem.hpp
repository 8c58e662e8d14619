#pragma once

#include "gap/solvers.hpp"
#include "gap/subspace.hpp"

#include <cstdint>
#include <string>

namespace gap {

inline constexpr Index kBenchAmbientDim = 200;
inline constexpr Index kBenchRowsB = 100;

/// One benchmark problem: V = ker A with A in R^{m x 200}, U = ker B with
/// B in R^{100 x 200}, entries of A, B and x0 iid N(0, 1).
struct ProblemInstance {
  std::string id;
  std::uint64_t seed = 0;        // seed requested
  std::uint64_t draw_seed = 0;   // seed actually used after retries
  int n_rows_A = 0;
  FeasibilityProblem problem;
  Vector x0;
  PrincipalAngleSet angles;
  double theta_f = 0.0;
  double theta_p = 0.0;
  int retries = 0;
};

/// Deterministic in (n_rows_A, seed). Draw order: A row by row, then B row
/// by row, then x0. If the draw has no nonzero principal angle (U inside V)
/// it is redrawn from mix64(seed + attempt) and the retry is counted.
ProblemInstance generate_problem(int n_rows_A, std::uint64_t seed,
                                 std::string id = {});

/// "n099-0003"-style identifier.
std::string problem_id(int n_rows_A, std::uint64_t index);

}  // namespace gap
