#pragma once

#include "gap/operators.hpp"
#include "gap/subspace.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace gap {

/// Stop once the shadow residual drops below tolerance, or after
/// max_iterations steps.
struct StoppingRule {
  double tolerance = 1e-8;
  long max_iterations = 200000;

  void validate() const;
};

enum class Termination { Converged, MaxIterations };

std::string_view to_string(Termination t);

/// One logged iteration. For adaptive runs angle_estimate / alpha_used
/// describe the step that produced x^k, so they are absent at k = 0.
struct IterationRecord {
  long k = 0;
  double shadow_residual = 0.0;  // ||P_{U cap V} z^k - z^k||, z^k = P_U x^k
  std::optional<double> angle_estimate;
  std::optional<double> alpha_used;
};

struct SolverTrace {
  std::vector<IterationRecord> iterations;
  Termination termination = Termination::MaxIterations;
  Vector final_point;
  long iteration_count = 0;

  double final_residual() const;
  std::optional<double> final_angle_estimate() const;
  /// Smallest angle estimate over all recorded iterations.
  std::optional<double> min_angle_estimate() const;
};

/// The two subspaces plus their intersection, which the stopping rule
/// needs at every iteration. Build once per problem and reuse.
struct FeasibilityProblem {
  FeasibilityProblem(Subspace u, Subspace v, double zero_tol = kDefaultZeroTol);
  FeasibilityProblem(Subspace u, Subspace v, Subspace w);

  Subspace U;
  Subspace V;
  Subspace W;  // U cap V
};

/// Iterates x^{k+1} = S x^k with fixed parameters. Records every
/// record_every-th iteration and always the last one.
SolverTrace run_fixed(const GapParameters& params, const FeasibilityProblem& problem,
                      const Vector& x0, const StoppingRule& rule = {},
                      long record_every = 1);

SolverTrace run_fixed(const GapParameters& params, const Subspace& U,
                      const Subspace& V, const Vector& x0,
                      const StoppingRule& rule = {}, long record_every = 1);

/// Angle between x - y and z - y, folded into [0, pi/2]; pi/2 when either
/// difference is numerically zero.
double estimate_angle(const Vector& x, const Vector& y, const Vector& z);

/// Adaptive GAP: y^k = P_V^{a_k} x^k, x^{k+1} = P_U^{a_k} y^k, the angle
/// estimate from (x^k, y^k, x^{k+1}), then
/// a_{k+1} = min(2 / (1 + sin theta^k), 2 - epsilon_cap).
SolverTrace run_adaptive(const FeasibilityProblem& problem, const Vector& x0,
                         double alpha0 = 1.0, const StoppingRule& rule = {},
                         double epsilon_cap = 1e-6);

SolverTrace run_adaptive(const Subspace& U, const Subspace& V, const Vector& x0,
                         double alpha0 = 1.0, const StoppingRule& rule = {},
                         double epsilon_cap = 1e-6);

/// exp of the least-squares slope of ln(residual) against k, over records
/// with k >= burn_in. Needs at least 10 such records, all positive.
double fit_observed_rate(const SolverTrace& trace, long burn_in);

}  // namespace gap
