#include "gap/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gap {

namespace {

void check_orthonormal(const Matrix& B, const char* what) {
  if (B.cols() == 0) return;
  const Matrix gram = B.transpose() * B;
  const double dev =
      (gram - Matrix::Identity(B.cols(), B.cols())).cwiseAbs().maxCoeff();
  if (!(dev <= kOrthonormalityTol)) {
    throw std::invalid_argument(std::string(what) +
                                " columns are not orthonormal (max deviation " +
                                std::to_string(dev) + ")");
  }
}

// Full orthonormal complement of an orthonormal basis via Householder QR.
Matrix complement_of(const Matrix& B) {
  const Index n = B.rows();
  const Index d = B.cols();
  if (d == 0) return Matrix::Identity(n, n);
  Eigen::HouseholderQR<Matrix> qr(B);
  Matrix Q = qr.householderQ() * Matrix::Identity(n, n);
  return Q.rightCols(n - d);
}

}  // namespace

Subspace::Subspace(Matrix basis) : basis_(std::move(basis)) {
  if (basis_.rows() < 1) throw DimensionError("subspace needs ambient_dim >= 1");
  if (basis_.cols() > basis_.rows()) {
    throw DimensionError("subspace dimension exceeds ambient dimension");
  }
  check_orthonormal(basis_, "basis");
  if (2 * dim() > ambient_dim()) complement_ = complement_of(basis_);
}

Subspace::Subspace(Matrix basis, std::optional<Matrix> complement)
    : basis_(std::move(basis)), complement_(std::move(complement)) {}

Subspace Subspace::with_complement(Matrix basis, Matrix complement) {
  if (basis.rows() < 1 || basis.rows() != complement.rows() ||
      basis.cols() + complement.cols() != basis.rows()) {
    throw DimensionError("basis and complement do not partition R^n");
  }
  Matrix full(basis.rows(), basis.rows());
  full << basis, complement;
  check_orthonormal(full, "basis+complement");
  if (2 * basis.cols() > basis.rows()) {
    return Subspace(std::move(basis), std::move(complement));
  }
  return Subspace(std::move(basis), std::nullopt);
}

Subspace Subspace::zero(Index ambient_dim) {
  return Subspace(Matrix(ambient_dim, 0));
}

Subspace Subspace::span_of(const Matrix& vectors, double rank_tol) {
  if (vectors.cols() == 0) return zero(vectors.rows());
  Eigen::JacobiSVD<Matrix> svd(vectors, Eigen::ComputeFullU);
  const auto& sv = svd.singularValues();
  const double cutoff = rank_tol * (sv.size() > 0 ? sv(0) : 0.0);
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff && sv(rank) > 0.0) ++rank;
  return with_complement(svd.matrixU().leftCols(rank),
                         svd.matrixU().rightCols(vectors.rows() - rank));
}

void Subspace::project_into(const Vector& x, Vector& out) const {
  if (x.size() != ambient_dim()) {
    throw DimensionError("vector length " + std::to_string(x.size()) +
                         " does not match ambient dimension " +
                         std::to_string(ambient_dim()));
  }
  if (complement_) {
    const Matrix& C = *complement_;
    out.noalias() = x - C * (C.transpose() * x);
  } else if (dim() == 0) {
    out.setZero(x.size());
  } else {
    out.noalias() = basis_ * (basis_.transpose() * x);
  }
}

Vector Subspace::project(const Vector& x) const {
  Vector out(x.size());
  project_into(x, out);
  return out;
}

Vector project(const Subspace& S, const Vector& x) { return S.project(x); }

Subspace nullspace_basis(const Matrix& A, double rank_tol) {
  if (A.rows() < 1 || A.cols() < 1) {
    throw DimensionError("nullspace_basis needs a non-empty matrix");
  }
  const Index n = A.cols();
  Eigen::BDCSVD<Matrix> svd(A, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = rank_tol * sv(0);
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff && sv(rank) > 0.0) ++rank;
  const Matrix& V = svd.matrixV();
  return Subspace::with_complement(V.rightCols(n - rank), V.leftCols(rank));
}

PrincipalAngleSet principal_angles(const Subspace& U, const Subspace& V,
                                   double zero_tol) {
  if (U.ambient_dim() != V.ambient_dim()) {
    throw DimensionError("principal_angles: ambient dimensions differ");
  }
  if (U.dim() == 0 || V.dim() == 0) {
    throw DimensionError("principal_angles: zero-dimensional subspace");
  }
  const Matrix cross = U.basis().transpose() * V.basis();
  Eigen::JacobiSVD<Matrix> svd(cross);
  const auto& cosines = svd.singularValues();  // descending

  PrincipalAngleSet out;
  out.angles.reserve(static_cast<std::size_t>(cosines.size()));
  for (Index i = 0; i < cosines.size(); ++i) {
    const double c = std::clamp(cosines(i), 0.0, 1.0);
    out.angles.push_back(std::acos(c));
    if (c > 1.0 - zero_tol) {
      ++out.intersection_dim;
    } else if (!out.friedrichs) {
      out.friedrichs = out.angles.back();
    }
  }
  return out;
}

Subspace intersection_subspace(const Subspace& U, const Subspace& V,
                               double zero_tol) {
  if (U.ambient_dim() != V.ambient_dim()) {
    throw DimensionError("intersection_subspace: ambient dimensions differ");
  }
  const Index n = U.ambient_dim();
  if (U.dim() == 0 || V.dim() == 0) return Subspace::zero(n);

  const Matrix cross = U.basis().transpose() * V.basis();
  Eigen::JacobiSVD<Matrix> svd(cross, Eigen::ComputeThinU);
  const auto& cosines = svd.singularValues();
  Index s = 0;
  while (s < cosines.size() && cosines(s) > 1.0 - zero_tol) ++s;
  if (s == 0) return Subspace::zero(n);

  Matrix W = U.basis() * svd.matrixU().leftCols(s);
  // Re-orthonormalize to wash out roundoff from the product.
  Eigen::HouseholderQR<Matrix> qr(W);
  Matrix Q = qr.householderQ() * Matrix::Identity(n, s);
  return Subspace(std::move(Q));
}

}  // namespace gap
