#include "gap/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace gap {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

// Roots of the 2x2 block belonging to one principal angle:
// f +- sqrt(f^2 - (1 - a1)(1 - a2)), f = (2 - a1 - a2 + a1 a2 cos^2)/2.
// A discriminant within a few ulps of zero is snapped to zero, otherwise the
// square root turns 1e-16 of rounding into a 1e-8 split of a double root.
std::pair<Complex, Complex> block_roots(double a1, double a2, double theta) {
  const double c = std::cos(theta);
  const double f = 0.5 * (2.0 - a1 - a2 + a1 * a2 * c * c);
  const double k = (1.0 - a1) * (1.0 - a2);
  double disc = f * f - k;
  const double scale = std::max({f * f, std::abs(k), 1.0});
  if (std::abs(disc) <= 16.0 * std::numeric_limits<double>::epsilon() * scale) {
    disc = 0.0;
  }
  const Complex root = std::sqrt(Complex(disc, 0.0));
  return {Complex(f, 0.0) + root, Complex(f, 0.0) - root};
}

Complex relax(double alpha, Complex lambda) {
  return 1.0 + alpha * (lambda - 1.0);
}

bool is_unit(Complex mu, double unit_tol) { return std::abs(mu - 1.0) <= unit_tol; }

void check_angle(double theta_f, bool allow_right_angle) {
  const bool ok = theta_f > 0.0 &&
                  (allow_right_angle ? theta_f <= kHalfPi : theta_f < kHalfPi);
  if (!ok) throw std::invalid_argument("theta_f out of range");
}

Index numerical_rank(const Matrix& A, double rel_tol) {
  if (A.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(A);
  const auto& sv = svd.singularValues();
  const double cutoff = rel_tol * std::max(1.0, sv(0));
  Index r = 0;
  while (r < sv.size() && sv(r) > cutoff) ++r;
  return r;
}

}  // namespace

EigenvaluePrediction predict_eigenvalues(const GapParameters& params,
                                         const PrincipalAngleSet& angles,
                                         ProblemDims dims, double unit_tol) {
  const Index p = std::min(dims.dim_u, dims.dim_v);
  const Index q = std::max(dims.dim_u, dims.dim_v);
  if (p < 1) throw DimensionError("predict_eigenvalues: subspace dimensions must be >= 1");
  if (dims.ambient < q) throw DimensionError("predict_eigenvalues: ambient < subspace dimension");
  if (static_cast<Index>(angles.angles.size()) != p) {
    throw DimensionError("predict_eigenvalues: expected " + std::to_string(p) +
                         " angles, got " + std::to_string(angles.angles.size()));
  }
  const Index excess = std::max<Index>(0, p + q - dims.ambient);
  if (angles.intersection_dim < excess) {
    throw DimensionError("predict_eigenvalues: dim U + dim V - n exceeds the intersection dimension");
  }

  const double a = params.alpha;
  const double a1 = params.alpha1;
  const double a2 = params.alpha2;
  const Complex corner((1.0 - a1) * (1.0 - a2), 0.0);

  EigenvaluePrediction out;
  out.eigenvalues.reserve(static_cast<std::size_t>(dims.ambient));

  Index dropped = 0;
  for (Index i = 0; i < p; ++i) {
    if (i < angles.intersection_dim) {
      // Zero angle: the block is diagonal, diag(1, (1 - a1)(1 - a2)).
      out.eigenvalues.push_back(relax(a, 1.0));
      if (dropped < excess) {
        ++dropped;
      } else {
        out.eigenvalues.push_back(relax(a, corner));
      }
      continue;
    }
    const auto [l1, l2] = block_roots(a1, a2, angles.angles[static_cast<std::size_t>(i)]);
    out.eigenvalues.push_back(relax(a, l1));
    out.eigenvalues.push_back(relax(a, l2));
  }

  const Complex mismatch(dims.dim_u < dims.dim_v ? 1.0 - a2 : 1.0 - a1, 0.0);
  for (Index i = 0; i < q - p; ++i) out.eigenvalues.push_back(relax(a, mismatch));
  for (Index i = 0; i < dims.ambient - p - q; ++i) {
    out.eigenvalues.push_back(relax(a, corner));
  }

  for (const Complex& mu : out.eigenvalues) {
    if (is_unit(mu, unit_tol)) {
      out.contains_unit = true;
    } else {
      out.gamma = std::max(out.gamma, std::abs(mu));
    }
  }
  // Unit eigenvalues only arise from diagonal blocks, hence are semisimple.
  out.convergent = out.gamma < 1.0;
  return out;
}

double gamma_star(double theta_f) {
  check_angle(theta_f, true);
  const double s = std::sin(theta_f);
  return (1.0 - s) / (1.0 + s);
}

double worst_case_gamma(const GapParameters& params, double theta_f,
                        double theta_p, int samples) {
  check_angle(theta_f, true);
  if (!(theta_p >= theta_f && theta_p <= kHalfPi)) {
    throw std::invalid_argument("theta_p must lie in [theta_f, pi/2]");
  }
  samples = std::max(samples, 2);
  const double a = params.alpha;
  const double a1 = params.alpha1;
  const double a2 = params.alpha2;
  double worst = 0.0;
  auto consider = [&](Complex lambda) {
    const Complex mu = relax(a, lambda);
    if (!is_unit(mu, kDefaultUnitTol)) worst = std::max(worst, std::abs(mu));
  };
  for (int i = 0; i < samples; ++i) {
    const double t = theta_f + (theta_p - theta_f) * i / (samples - 1);
    const auto [l1, l2] = block_roots(a1, a2, t);
    consider(l1);
    consider(l2);
  }
  consider(1.0 - a1);
  consider(1.0 - a2);
  consider((1.0 - a1) * (1.0 - a2));
  return worst;
}

double theoretical_rate(const Method& method, double theta_f,
                        std::optional<double> theta_p) {
  check_angle(theta_f, true);
  const double s = std::sin(theta_f);
  const double c = std::cos(theta_f);
  switch (method.kind) {
    case MethodKind::GapStar:
    case MethodKind::GapaInit:
      return gamma_star(theta_f);
    case MethodKind::AP:
      return c * c;
    case MethodKind::MapOpt:
      return (1.0 - s * s) / (1.0 + s * s);
    case MethodKind::DR:
      return c;
    case MethodKind::Gap2A:
      return std::abs(c - s) / (c + s);
    case MethodKind::PRAP: {
      if (!theta_p) throw std::invalid_argument("PRAP rate needs theta_p");
      const double sp = std::sin(*theta_p);
      return (sp * sp - s * s) / (sp * sp + s * s);
    }
    case MethodKind::GapFixed:
      return worst_case_gamma(preset(method), theta_f, theta_p.value_or(kHalfPi));
  }
  throw std::invalid_argument("unknown method");
}

std::vector<Complex> dense_eigenvalues(const Matrix& M) {
  if (M.rows() != M.cols()) throw DimensionError("dense_eigenvalues: matrix not square");
  if (M.rows() == 0) return {};
  Eigen::EigenSolver<Matrix> solver(M, false);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("dense eigensolver failed to converge");
  }
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

ConvergenceReport classify_convergence(const Matrix& M, double tol) {
  const auto ev = dense_eigenvalues(M);
  ConvergenceReport report;
  bool stray_unit_circle = false;
  for (const Complex& l : ev) {
    report.spectral_radius = std::max(report.spectral_radius, std::abs(l));
    if (is_unit(l, tol)) {
      ++report.unit_eigenvalues;
    } else if (std::abs(l) >= 1.0 - tol) {
      stray_unit_circle = true;
    }
  }

  if (report.spectral_radius < 1.0 - tol) {
    report.convergent = true;
    report.detail = "spectral radius below 1";
    return report;
  }
  if (stray_unit_circle) {
    report.detail = "eigenvalue other than 1 on or outside the unit circle";
    return report;
  }
  const Index n = M.rows();
  const Matrix shifted = M - Matrix::Identity(n, n);
  constexpr double kRankTol = 1e-10;
  report.unit_semisimple =
      numerical_rank(shifted, kRankTol) == numerical_rank(shifted * shifted, kRankTol);
  report.convergent = report.unit_semisimple;
  report.detail = report.unit_semisimple ? "eigenvalue 1 is semisimple"
                                         : "eigenvalue 1 is defective";
  return report;
}

double subdominant_magnitude(const Matrix& M, double unit_tol) {
  double gamma = 0.0;
  for (const Complex& l : dense_eigenvalues(M)) {
    if (!is_unit(l, unit_tol)) gamma = std::max(gamma, std::abs(l));
  }
  return gamma;
}

long expected_iterations(double gamma, double tol) {
  if (!(gamma >= 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("expected_iterations: gamma must lie in [0, 1)");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("expected_iterations: tol must be positive");
  if (gamma == 0.0 || tol >= 1.0) return 1;
  const double ratio = std::log(tol) / std::log(gamma);
  auto k = static_cast<long>(std::ceil(ratio));
  // gamma^k = tol exactly (0.1^8 = 1e-8) lands one over after rounding of
  // gamma itself, so accept powers within 1e-12 relative of tol.
  while (k > 1 && std::pow(gamma, static_cast<double>(k - 1)) <= tol * (1.0 + 1e-12)) --k;
  return std::max(k, 1L);
}

TraceDet lemma_m_closed_forms(double alpha1, double alpha2, double theta_f) {
  if (!(alpha1 > 0.0) || !(alpha2 > 0.0)) {
    throw std::invalid_argument("lemma_m_closed_forms: relaxations must be positive");
  }
  check_angle(theta_f, false);
  const double s = std::sin(theta_f);
  const double c = std::cos(theta_f);
  TraceDet out;
  out.trace = 2.0 / ((1.0 + s) * alpha1) *
              (-alpha1 - alpha2 + alpha2 * alpha1 * c * c + 2.0 * alpha1 * s);
  out.det = 4.0 * s * (1.0 - s) / (alpha1 * (1.0 + s) * (1.0 + s)) *
            (-alpha1 - alpha2 + alpha1 * alpha2 * (1.0 + s));
  return out;
}

}  // namespace gap
