#pragma once

#include "gap/operators.hpp"
#include "gap/subspace.hpp"

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace gap {

using Complex = std::complex<double>;

/// Ball radius around 1 + 0i inside which an eigenvalue counts as "the" unit
/// eigenvalue and is excluded from the subdominant magnitude.
inline constexpr double kDefaultUnitTol = 1e-9;

/// Analytic spectrum of the GAP operator.
struct EigenvaluePrediction {
  std::vector<Complex> eigenvalues;  // all n, with multiplicity
  double gamma = 0.0;                // subdominant magnitude
  bool contains_unit = false;
  bool convergent = false;
};

/// Dimensions of the two subspaces and the ambient space.
struct ProblemDims {
  Index dim_u = 0;
  Index dim_v = 0;
  Index ambient = 0;
};

/// Predicts every eigenvalue of S from the principal angles alone.
///
/// Each angle contributes the two roots of its 2x2 block; the |dim V - dim U|
/// leftover directions give 1 - alpha2 (dim U < dim V) or 1 - alpha1
/// (dim U > dim V); the directions orthogonal to U + V give
/// (1 - alpha1)(1 - alpha2). When dim U + dim V > n the excess is taken out
/// of the zero-angle blocks, so exactly n values are returned. Everything is
/// mapped through lambda -> 1 + alpha (lambda - 1).
EigenvaluePrediction predict_eigenvalues(const GapParameters& params,
                                         const PrincipalAngleSet& angles,
                                         ProblemDims dims,
                                         double unit_tol = kDefaultUnitTol);

/// (1 - sin theta_f) / (1 + sin theta_f).
double gamma_star(double theta_f);

/// Closed-form asymptotic rate of a method. GAPA is rated at the optimum it
/// tracks; GAP_FIXED(c) gets the worst case over angles in [theta_f, theta_p]
/// (theta_p defaults to pi/2), including the dimension-mismatch blocks.
double theoretical_rate(const Method& method, double theta_f,
                        std::optional<double> theta_p = std::nullopt);

/// Worst-case subdominant magnitude of an arbitrary triple over principal
/// angles filling [theta_f, theta_p] and over the three relative-dimension
/// regimes (dim U <, =, > dim V).
double worst_case_gamma(const GapParameters& params, double theta_f,
                        double theta_p, int samples = 2001);

/// Dense eigenvalues of a square matrix.
std::vector<Complex> dense_eigenvalues(const Matrix& M);

struct ConvergenceReport {
  bool convergent = false;
  double spectral_radius = 0.0;
  Index unit_eigenvalues = 0;  // eigenvalues within tol of 1
  bool unit_semisimple = true;
  std::string detail;
};

/// Whether lim M^k exists: rho(M) < 1, or rho(M) = 1 with 1 the only
/// eigenvalue on the unit circle and semisimple
/// (rank(M - I) == rank((M - I)^2)).
ConvergenceReport classify_convergence(const Matrix& M,
                                       double tol = kDefaultUnitTol);

/// Largest eigenvalue modulus once eigenvalues within unit_tol of 1 are
/// dropped; 0 when nothing remains.
double subdominant_magnitude(const Matrix& M, double unit_tol = kDefaultUnitTol);

/// Smallest k with gamma^k <= tol; 1 when gamma is 0. Throws for gamma >= 1.
long expected_iterations(double gamma, double tol);

struct TraceDet {
  double trace = 0.0;
  double det = 0.0;
};

/// Closed-form trace and determinant of
/// M = (2 - a*) I + (a* / alpha1)(T_F - I), where T_F is the 2x2 block of
/// the Friedrichs angle and a* = 2 / (1 + sin theta_f). theta_f in (0, pi/2).
TraceDet lemma_m_closed_forms(double alpha1, double alpha2, double theta_f);

}  // namespace gap
