#include "gap/problem.hpp"

#include "gap/random.hpp"

#include <cstdio>
#include <stdexcept>

namespace gap {

namespace {

constexpr int kMaxRetries = 16;

Matrix gaussian_matrix(CounterRng& rng, Index rows, Index cols) {
  Matrix M(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) M(i, j) = rng.normal();
  }
  return M;
}

}  // namespace

std::string problem_id(int n_rows_A, std::uint64_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "n%03d-%04llu", n_rows_A,
                static_cast<unsigned long long>(index));
  return buf;
}

ProblemInstance generate_problem(int n_rows_A, std::uint64_t seed, std::string id) {
  if (n_rows_A < 1 || n_rows_A >= kBenchAmbientDim) {
    throw std::invalid_argument("n_rows_A must lie in [1, 199]");
  }
  if (id.empty()) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "n%03d-s%016llx", n_rows_A,
                  static_cast<unsigned long long>(seed));
    id = buf;
  }

  for (int attempt = 0; attempt <= kMaxRetries; ++attempt) {
    const std::uint64_t draw_seed =
        attempt == 0 ? seed : mix64(seed + static_cast<std::uint64_t>(attempt));
    CounterRng rng(draw_seed);
    const Matrix A = gaussian_matrix(rng, n_rows_A, kBenchAmbientDim);
    const Matrix B = gaussian_matrix(rng, kBenchRowsB, kBenchAmbientDim);
    Vector x0(kBenchAmbientDim);
    for (Index i = 0; i < x0.size(); ++i) x0(i) = rng.normal();

    Subspace V = nullspace_basis(A);
    Subspace U = nullspace_basis(B);
    PrincipalAngleSet angles = principal_angles(U, V);
    if (!angles.friedrichs) continue;

    const double theta_f = *angles.friedrichs;
    const double theta_p = angles.largest();
    FeasibilityProblem problem(std::move(U), std::move(V));
    return ProblemInstance{
        .id = std::move(id),
        .seed = seed,
        .draw_seed = draw_seed,
        .n_rows_A = n_rows_A,
        .problem = std::move(problem),
        .x0 = std::move(x0),
        .angles = std::move(angles),
        .theta_f = theta_f,
        .theta_p = theta_p,
        .retries = attempt,
    };
  }
  throw std::runtime_error("generate_problem: no draw with a nonzero principal angle");
}

}  // namespace gap
