#include "gap/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace gap {

namespace {

void check_start(const FeasibilityProblem& problem, const Vector& x0) {
  if (x0.size() != problem.U.ambient_dim()) {
    throw DimensionError("start point length does not match ambient dimension");
  }
}

// Shadow residual ||z - P_W z||, reusing scratch buffers.
class ShadowMonitor {
 public:
  explicit ShadowMonitor(const Subspace& W) : W_(W), proj_(W.ambient_dim()) {}

  double residual(const Vector& z) {
    if (W_.dim() == 0) return z.norm();
    W_.project_into(z, proj_);
    return (z - proj_).norm();
  }

 private:
  const Subspace& W_;
  Vector proj_;
};

// The iteration fixes U cap V pointwise and maps its complement into itself,
// so x^k = w + r^k with w = P_W x0 for every k. Iterating on r alone keeps
// x - y and x^{k+1} - y free of cancellation against the (large, constant)
// intersection component once the iterates are close to the limit.
Vector split_intersection(const Subspace& W, Vector& x) {
  if (W.dim() == 0) return Vector::Zero(x.size());
  Vector w(x.size());
  W.project_into(x, w);
  x -= w;
  return w;
}

struct Recorder {
  long every;
  SolverTrace& trace;

  void maybe(const IterationRecord& rec) {
    if (rec.k % every == 0) trace.iterations.push_back(rec);
  }
  void final(const IterationRecord& rec) {
    if (trace.iterations.empty() || trace.iterations.back().k != rec.k) {
      trace.iterations.push_back(rec);
    }
  }
};

}  // namespace

void StoppingRule::validate() const {
  if (!(tolerance > 0.0)) throw std::invalid_argument("stopping tolerance must be positive");
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
}

std::string_view to_string(Termination t) {
  return t == Termination::Converged ? "converged" : "max_iters";
}

double SolverTrace::final_residual() const {
  return iterations.empty() ? std::numeric_limits<double>::quiet_NaN()
                            : iterations.back().shadow_residual;
}

std::optional<double> SolverTrace::final_angle_estimate() const {
  for (auto it = iterations.rbegin(); it != iterations.rend(); ++it) {
    if (it->angle_estimate) return it->angle_estimate;
  }
  return std::nullopt;
}

std::optional<double> SolverTrace::min_angle_estimate() const {
  std::optional<double> best;
  for (const auto& rec : iterations) {
    if (rec.angle_estimate && (!best || *rec.angle_estimate < *best)) {
      best = rec.angle_estimate;
    }
  }
  return best;
}

FeasibilityProblem::FeasibilityProblem(Subspace u, Subspace v, double zero_tol)
    : U(std::move(u)), V(std::move(v)), W(intersection_subspace(U, V, zero_tol)) {}

FeasibilityProblem::FeasibilityProblem(Subspace u, Subspace v, Subspace w)
    : U(std::move(u)), V(std::move(v)), W(std::move(w)) {
  if (U.ambient_dim() != V.ambient_dim() || U.ambient_dim() != W.ambient_dim()) {
    throw DimensionError("FeasibilityProblem: ambient dimensions differ");
  }
}

SolverTrace run_fixed(const GapParameters& params, const FeasibilityProblem& problem,
                      const Vector& x0, const StoppingRule& rule,
                      long record_every) {
  rule.validate();
  check_start(problem, x0);
  if (record_every < 1) throw std::invalid_argument("record_every must be >= 1");

  const double a = params.alpha;
  const double a1 = params.alpha1;
  const double a2 = params.alpha2;
  // P_U x^{k+1} = (1 - a) P_U x^k + a P_U y^k, so the shadow can be carried
  // along instead of re-projected. Only safe while |1 - a| < 1.
  const bool carry_shadow = a > 0.0 && a < 2.0;

  const Index n = x0.size();
  Vector x = x0;
  const Vector w = split_intersection(problem.W, x);
  Vector y(n), pv(n), pu(n), z(n);
  ShadowMonitor monitor(problem.W);

  SolverTrace trace;
  Recorder rec{record_every, trace};

  problem.U.project_into(x, z);
  double r = monitor.residual(z);
  long k = 0;
  for (;;) {
    rec.maybe({k, r, std::nullopt, std::nullopt});
    if (r < rule.tolerance) {
      trace.termination = Termination::Converged;
      break;
    }
    if (k >= rule.max_iterations) {
      trace.termination = Termination::MaxIterations;
      break;
    }
    problem.V.project_into(x, pv);
    y = (1.0 - a1) * x + a1 * pv;
    problem.U.project_into(y, pu);
    x = (1.0 - a) * x + a * ((1.0 - a2) * y + a2 * pu);
    if (carry_shadow) {
      z = (1.0 - a) * z + a * pu;
    } else {
      problem.U.project_into(x, z);
    }
    ++k;
    r = monitor.residual(z);
  }
  rec.final({k, r, std::nullopt, std::nullopt});
  trace.iteration_count = k;
  trace.final_point = x + w;
  return trace;
}

SolverTrace run_fixed(const GapParameters& params, const Subspace& U,
                      const Subspace& V, const Vector& x0,
                      const StoppingRule& rule, long record_every) {
  return run_fixed(params, FeasibilityProblem(U, V), x0, rule, record_every);
}

double estimate_angle(const Vector& x, const Vector& y, const Vector& z) {
  if (x.size() != y.size() || x.size() != z.size()) {
    throw DimensionError("estimate_angle: vector lengths differ");
  }
  constexpr double kDegenerate = 1e-14;
  const Vector v1 = x - y;
  const Vector v2 = z - y;
  const double n1 = v1.norm();
  const double n2 = v2.norm();
  if (n1 <= kDegenerate * (1.0 + x.norm()) || n2 <= kDegenerate * (1.0 + z.norm())) {
    return std::numbers::pi / 2;
  }
  const double c = std::clamp(std::abs(v1.dot(v2)) / (n1 * n2), 0.0, 1.0);
  return std::acos(c);
}

SolverTrace run_adaptive(const FeasibilityProblem& problem, const Vector& x0,
                         double alpha0, const StoppingRule& rule,
                         double epsilon_cap) {
  rule.validate();
  check_start(problem, x0);
  if (!(alpha0 > 0.0 && alpha0 < 2.0)) {
    throw std::invalid_argument("alpha0 must lie in (0, 2)");
  }
  if (!(epsilon_cap >= 0.0)) throw std::invalid_argument("epsilon_cap must be >= 0");

  const Index n = x0.size();
  Vector x = x0;
  const Vector w = split_intersection(problem.W, x);
  Vector y(n), pv(n), pu(n), z(n), x_next(n);
  ShadowMonitor monitor(problem.W);

  SolverTrace trace;
  Recorder rec{1, trace};

  double alpha = alpha0;
  std::optional<double> last_theta;
  std::optional<double> last_alpha;

  problem.U.project_into(x, z);
  double r = monitor.residual(z);
  long k = 0;
  for (;;) {
    rec.maybe({k, r, last_theta, last_alpha});
    if (r < rule.tolerance) {
      trace.termination = Termination::Converged;
      break;
    }
    if (k >= rule.max_iterations) {
      trace.termination = Termination::MaxIterations;
      break;
    }
    problem.V.project_into(x, pv);
    y = (1.0 - alpha) * x + alpha * pv;
    problem.U.project_into(y, pu);
    x_next = (1.0 - alpha) * y + alpha * pu;

    const double theta = estimate_angle(x, y, x_next);
    last_theta = theta;
    last_alpha = alpha;
    alpha = std::min(2.0 / (1.0 + std::sin(theta)), 2.0 - epsilon_cap);

    x.swap(x_next);
    z = pu;  // P_U x^{k+1} = P_U y^k
    ++k;
    r = monitor.residual(z);
  }
  rec.final({k, r, last_theta, last_alpha});
  trace.iteration_count = k;
  trace.final_point = x + w;
  return trace;
}

SolverTrace run_adaptive(const Subspace& U, const Subspace& V, const Vector& x0,
                         double alpha0, const StoppingRule& rule,
                         double epsilon_cap) {
  return run_adaptive(FeasibilityProblem(U, V), x0, alpha0, rule, epsilon_cap);
}

double fit_observed_rate(const SolverTrace& trace, long burn_in) {
  std::vector<double> ks;
  std::vector<double> logs;
  for (const auto& rec : trace.iterations) {
    if (rec.k < burn_in) continue;
    if (!(rec.shadow_residual > 0.0)) {
      throw std::invalid_argument("fit_observed_rate: non-positive residual in window");
    }
    ks.push_back(static_cast<double>(rec.k));
    logs.push_back(std::log(rec.shadow_residual));
  }
  if (ks.size() < 10) {
    throw std::invalid_argument("fit_observed_rate: fewer than 10 records after burn-in");
  }
  const double m = static_cast<double>(ks.size());
  double mk = 0.0, ml = 0.0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    mk += ks[i];
    ml += logs[i];
  }
  mk /= m;
  ml /= m;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    sxy += (ks[i] - mk) * (logs[i] - ml);
    sxx += (ks[i] - mk) * (ks[i] - mk);
  }
  return std::exp(sxy / sxx);
}

}  // namespace gap
