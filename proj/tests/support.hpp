#pragma once

// Test-only helpers: problem construction with known principal angles and
// spectrum comparison. Nothing here goes through the library's angle or
// spectrum code, so it can serve as an independent oracle.

#include "gap/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

namespace gap::testing {

inline Matrix random_orthogonal(std::mt19937_64& rng, Index n) {
  std::normal_distribution<double> g;
  Matrix A(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) A(i, j) = g(rng);
  Eigen::HouseholderQR<Matrix> qr(A);
  return qr.householderQ() * Matrix::Identity(n, n);
}

inline Matrix random_gaussian(std::mt19937_64& rng, Index rows, Index cols) {
  std::normal_distribution<double> g;
  Matrix A(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) A(i, j) = g(rng);
  return A;
}

inline Vector random_vector(std::mt19937_64& rng, Index n) {
  return random_gaussian(rng, n, 1).col(0);
}

/// Orthonormal basis of a random d-dimensional subspace of R^n.
inline Subspace random_subspace(std::mt19937_64& rng, Index n, Index d) {
  return Subspace(random_orthogonal(rng, n).leftCols(d));
}

/// Pair of subspaces in R^n with prescribed principal angles (one per
/// dimension of the smaller subspace), rotated by a random orthogonal matrix.
/// U gets e_i for each angle, V gets cos t_i e_i + sin t_i f_i with a fresh
/// partner axis f_i for every nonzero angle; the surplus dimensions of each
/// subspace take further fresh axes.
struct KnownPair {
  Subspace U;
  Subspace V;
  std::vector<double> angles;  // ascending
};

inline KnownPair known_pair(std::mt19937_64& rng, std::vector<double> angles,
                            Index dim_u, Index dim_v, Index n) {
  std::sort(angles.begin(), angles.end());
  const Index p = static_cast<Index>(angles.size());
  if (p != std::min(dim_u, dim_v)) throw std::invalid_argument("known_pair: need min(dim) angles");
  Matrix BU = Matrix::Zero(n, dim_u);
  Matrix BV = Matrix::Zero(n, dim_v);
  Index next = p;
  auto fresh = [&] {
    if (next >= n) throw std::invalid_argument("known_pair: ambient dimension too small");
    return next++;
  };
  // The smaller subspace's angle vectors live in the first p columns of both.
  for (Index i = 0; i < p; ++i) {
    const double t = angles[static_cast<std::size_t>(i)];
    BU(i, i) = 1.0;
    BV(i, i) = std::cos(t);
    if (t != 0.0) BV(fresh(), i) = std::sin(t);
  }
  for (Index j = p; j < dim_u; ++j) BU(fresh(), j) = 1.0;
  for (Index j = p; j < dim_v; ++j) BV(fresh(), j) = 1.0;
  const Matrix Q = random_orthogonal(rng, n);
  return {Subspace(Q * BU), Subspace(Q * BV), angles};
}

/// Greedy nearest matching of two eigenvalue multisets; returns the largest
/// distance between matched pairs (infinity on size mismatch).
inline double spectrum_distance(std::vector<std::complex<double>> a,
                                std::vector<std::complex<double>> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  auto by_re_im = [](std::complex<double> x, std::complex<double> y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  };
  std::sort(a.begin(), a.end(), by_re_im);
  std::vector<bool> used(b.size(), false);
  double worst = 0.0;
  for (const auto& x : a) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_j = 0;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(x - b[j]);
      if (d < best) {
        best = d;
        best_j = j;
      }
    }
    used[best_j] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace gap::testing
