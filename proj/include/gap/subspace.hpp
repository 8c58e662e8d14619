#pragma once

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gap {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Thrown when operands disagree in size or a precondition on shapes fails.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Cosine-side tolerance that classifies a principal angle as zero.
inline constexpr double kDefaultZeroTol = 1e-10;

/// Orthonormality tolerance enforced on every basis (entrywise on B^T B - I).
inline constexpr double kOrthonormalityTol = 1e-12;

/// A linear subspace of R^n held as an n x d matrix with orthonormal columns.
///
/// When the subspace is more than half the ambient dimension an orthonormal
/// basis of the orthogonal complement is kept as well, and projections go
/// through whichever of the two is thinner. d = 0 is a valid subspace.
class Subspace {
 public:
  /// Takes ownership of an orthonormal basis; throws if B^T B deviates from I.
  explicit Subspace(Matrix basis);

  /// Basis plus a basis of the orthogonal complement (columns must together
  /// form an orthogonal n x n matrix).
  static Subspace with_complement(Matrix basis, Matrix complement);

  /// The trivial subspace {0} of R^n.
  static Subspace zero(Index ambient_dim);

  /// Orthonormalizes the column span of an arbitrary matrix.
  static Subspace span_of(const Matrix& vectors, double rank_tol = 1e-12);

  Index ambient_dim() const { return basis_.rows(); }
  Index dim() const { return basis_.cols(); }
  const Matrix& basis() const { return basis_; }
  bool has_complement() const { return complement_.has_value(); }

  /// Orthogonal projection of x.
  Vector project(const Vector& x) const;

  /// Allocation-free variant for hot loops; out must not alias x.
  void project_into(const Vector& x, Vector& out) const;

 private:
  Subspace(Matrix basis, std::optional<Matrix> complement);

  Matrix basis_;
  std::optional<Matrix> complement_;
};

/// Sorted principal angles between two subspaces.
struct PrincipalAngleSet {
  std::vector<double> angles;  // ascending, in [0, pi/2]
  Index intersection_dim = 0;
  std::optional<double> friedrichs;

  double largest() const { return angles.empty() ? 0.0 : angles.back(); }
};

/// Orthonormal basis of ker(A). Singular values below rank_tol * sigma_max
/// count as zero.
Subspace nullspace_basis(const Matrix& A, double rank_tol = 1e-12);

/// P_S x = B (B^T x).
Vector project(const Subspace& S, const Vector& x);

/// Principal angles from the singular values of U^T V.
PrincipalAngleSet principal_angles(const Subspace& U, const Subspace& V,
                                   double zero_tol = kDefaultZeroTol);

/// Basis of U and V's intersection, built from the principal vectors of U
/// whose angle is classified as zero.
Subspace intersection_subspace(const Subspace& U, const Subspace& V,
                               double zero_tol = kDefaultZeroTol);

}  // namespace gap
