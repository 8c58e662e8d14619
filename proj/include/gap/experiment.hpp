#pragma once

#include "gap/operators.hpp"
#include "gap/problem.hpp"
#include "gap/solvers.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace gap {

/// Row counts of A for the default corpus.
std::vector<int> default_categories();

/// GAP_STAR, GAPA, GAP2A, DR, MAP, GAP_FIXED(1.8).
std::vector<Method> default_methods();

struct ExperimentConfig {
  std::vector<int> categories = default_categories();
  int problems_per_category = 500;
  std::vector<Method> methods = default_methods();
  StoppingRule stopping;
  std::uint64_t base_seed = 1;
  std::filesystem::path output_dir = "results";
  double alpha0 = 1.0;        // first relaxation of GAPA
  double epsilon_cap = 1e-6;  // GAPA keeps alpha <= 2 - epsilon_cap
  int jobs = 1;

  void validate() const;
};

/// Flat `key = value` text; '#' starts a comment. Keys: categories,
/// problems_per_category, methods, tolerance, max_iterations, base_seed,
/// output_dir, alpha0, epsilon_cap, jobs. Lists are comma separated.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Where one problem of the corpus comes from.
struct ProblemSlot {
  std::string id;
  int n_rows_A = 0;
  std::uint64_t index = 0;
  std::uint64_t seed = 0;
};

std::vector<ProblemSlot> enumerate_problems(const ExperimentConfig& config);

struct ManifestEntry {
  std::string id;
  std::uint64_t seed = 0;
  int n_rows_A = 0;
  double theta_f = 0.0;
  double theta_p = 0.0;
  Index intersection_dim = 0;
  int retries = 0;
};

struct ResultRow {
  std::string problem_id;
  std::uint64_t seed = 0;
  int n_rows_A = 0;
  double theta_f = 0.0;
  double theta_p = 0.0;
  std::string method;
  long iterations = 0;
  Termination termination = Termination::MaxIterations;
  double final_residual = 0.0;
  std::optional<double> observed_rate;
  std::optional<double> final_angle_estimate;
  std::optional<double> min_angle_gap;  // min_k theta^k - theta_F (GAPA only)
};

inline constexpr const char* kResultsHeader =
    "problem_id,seed,n_rows_A,theta_f,theta_p,method,iterations,terminated,"
    "final_residual,observed_rate,final_angle_estimate";

/// Runs every configured method on one problem.
std::vector<ResultRow> solve_problem(const ProblemInstance& instance,
                                     const ExperimentConfig& config);

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

/// Generates and solves every problem, on config.jobs worker threads.
/// Rows come back in corpus order regardless of scheduling.
std::vector<ResultRow> run_problems(const ExperimentConfig& config,
                                    const ProgressFn& progress = {});

std::vector<ManifestEntry> build_manifest(const ExperimentConfig& config);

/// Shortest decimal that round-trips to the same double.
std::string format_real(double v);

void write_results_csv(std::ostream& os, const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_results_csv(std::istream& is);
void write_manifest_csv(std::ostream& os, const std::vector<ManifestEntry>& entries);

/// Per-method medians within theta_F deciles.
struct SummaryRow {
  int decile = 0;
  double theta_f_lo = 0.0;
  double theta_f_hi = 0.0;
  double theta_f_median = 0.0;
  std::string method;
  std::size_t runs = 0;
  std::size_t converged = 0;
  double median_iterations = 0.0;
  std::optional<long> expected_iterations;  // at the decile's median theta_F
};

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows,
                                  double tolerance, int bins = 10);
void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows);

struct ExperimentOutputs {
  std::filesystem::path results_csv;
  std::filesystem::path summary_csv;
  std::filesystem::path diagnostics_csv;
  std::filesystem::path metadata;
  std::vector<ResultRow> rows;
};

/// Runs the corpus and writes results.csv, summary.csv, diagnostics.csv
/// (GAPA conservativeness margins) and metadata.txt (the only file with
/// timestamps) into config.output_dir.
ExperimentOutputs run_experiment(const ExperimentConfig& config,
                                 const ProgressFn& progress = {});

/// One theta_F of the theoretical rates table.
struct RateEntry {
  double theta_f = 0.0;
  std::string method;
  double gamma = 0.0;
  std::optional<long> expected_iterations;  // absent when gamma >= 1
};

/// Closed-form rates (and iterations to reach tol) of GAP_STAR, MAP, DR,
/// AP, GAP2A and, when theta_p is given, PRAP.
std::vector<RateEntry> rates_table(const std::vector<double>& theta_f_grid,
                                   std::optional<double> theta_p = std::nullopt,
                                   double tol = 1e-8);
void write_rates_csv(std::ostream& os, const std::vector<RateEntry>& rows);

}  // namespace gap
