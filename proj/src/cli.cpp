#include "gap/cli.hpp"

#include "gap/experiment.hpp"
#include "gap/plot.hpp"
#include "gap/spectral.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>

namespace gap {

namespace {

struct Overrides {
  std::uint64_t seed = 0;
  std::string out;
  int jobs = 1;
  double tol = 1e-8;
  long max_iters = 200000;
  std::vector<int> categories;
  int per_category = 0;
  std::vector<std::string> methods;

  CLI::Option* seed_opt = nullptr;
  CLI::Option* out_opt = nullptr;
  CLI::Option* jobs_opt = nullptr;
  CLI::Option* tol_opt = nullptr;
  CLI::Option* iters_opt = nullptr;
  CLI::Option* cat_opt = nullptr;
  CLI::Option* per_opt = nullptr;
  CLI::Option* methods_opt = nullptr;

  void attach(CLI::App& app, bool solver_flags) {
    seed_opt = app.add_option("--seed", seed, "Base seed of the problem corpus");
    out_opt = app.add_option("--out", out, "Output directory");
    jobs_opt = app.add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
    cat_opt = app.add_option("--categories", categories, "Row counts of A, comma separated")
                  ->delimiter(',');
    per_opt = app.add_option("--per-category", per_category, "Problems per category")
                  ->check(CLI::PositiveNumber);
    if (solver_flags) {
      tol_opt = app.add_option("--tol", tol, "Shadow residual tolerance")->check(CLI::PositiveNumber);
      iters_opt = app.add_option("--max-iters", max_iters, "Iteration cap")->check(CLI::PositiveNumber);
      methods_opt = app.add_option("--methods", methods, "Methods, comma separated")->delimiter(',');
    }
  }

  void apply(ExperimentConfig& cfg) const {
    if (seed_opt && seed_opt->count()) cfg.base_seed = seed;
    if (out_opt && out_opt->count()) cfg.output_dir = out;
    if (jobs_opt && jobs_opt->count()) cfg.jobs = jobs;
    if (tol_opt && tol_opt->count()) cfg.stopping.tolerance = tol;
    if (iters_opt && iters_opt->count()) cfg.stopping.max_iterations = max_iters;
    if (cat_opt && cat_opt->count()) cfg.categories = categories;
    if (per_opt && per_opt->count()) cfg.problems_per_category = per_category;
    if (methods_opt && methods_opt->count()) {
      cfg.methods.clear();
      for (const auto& m : methods) {
        Method parsed = Method::parse(m);
        if (parsed.kind == MethodKind::GapaInit) parsed.value = cfg.alpha0;
        cfg.methods.push_back(parsed);
      }
    }
    cfg.validate();
  }
};

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  return f;
}

std::vector<double> default_grid() {
  std::vector<double> grid;
  const double lo = 5e-4, hi = std::numbers::pi / 2;
  const int count = 40;
  for (int i = 0; i < count; ++i) grid.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1)));
  grid.back() = hi;
  return grid;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generalized alternating projections: rates, spectra and benchmark corpus"};
  app.name("gapbench");
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate the problem corpus and write its manifest");
  std::string gen_config;
  gen->add_option("--config", gen_config, "Experiment config file")->check(CLI::ExistingFile);
  Overrides gen_over;
  gen_over.attach(*gen, false);

  // run
  auto* run = app.add_subcommand("run", "Run an experiment from a config file");
  std::string run_config;
  run->add_option("--config", run_config, "Experiment config file")
      ->required()
      ->check(CLI::ExistingFile);
  Overrides run_over;
  run_over.attach(*run, true);
  bool quiet = false;
  run->add_flag("--quiet", quiet, "No progress output");

  // rates
  auto* rates = app.add_subcommand("rates", "Closed-form rates and expected iteration counts");
  std::vector<double> rate_thetas;
  double rate_theta_p = 0.0;
  double rate_tol = 1e-8;
  std::string rate_out;
  rates->add_option("--theta-f", rate_thetas, "Friedrichs angles in radians, comma separated")
      ->delimiter(',');
  auto* theta_p_opt = rates->add_option("--theta-p", rate_theta_p, "Largest principal angle (enables PRAP)");
  rates->add_option("--tol", rate_tol, "Target accuracy for iteration counts")->check(CLI::PositiveNumber);
  rates->add_option("--out", rate_out, "Directory for rates.csv and rates.svg");

  // spectrum
  auto* spectrum = app.add_subcommand("spectrum", "Predicted vs dense eigenvalues for one problem");
  int spec_rows = 50;
  std::uint64_t spec_seed = 1;
  std::string spec_method = "GAP_STAR";
  bool spec_list = false;
  spectrum->add_option("--n-rows", spec_rows, "Rows of A")->check(CLI::Range(1, 199));
  spectrum->add_option("--seed", spec_seed, "Problem seed");
  spectrum->add_option("--method", spec_method, "Parameter preset");
  spectrum->add_flag("--eigenvalues", spec_list, "Print both spectra");

  // plot
  auto* plot = app.add_subcommand("plot", "Render results.csv as an SVG scatter plot");
  std::string plot_input;
  std::string plot_out;
  double plot_tol = 1e-8;
  plot->add_option("--input", plot_input, "results.csv")->required()->check(CLI::ExistingFile);
  plot->add_option("--out", plot_out, "Output SVG path (default: iterations.svg next to input)");
  plot->add_option("--tol", plot_tol, "Tolerance of the theory curves")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*gen) {
      ExperimentConfig cfg = gen_config.empty() ? ExperimentConfig{} : load_config(gen_config);
      gen_over.apply(cfg);
      const auto manifest = build_manifest(cfg);
      const auto path = cfg.output_dir / "manifest.csv";
      auto f = open_output(path);
      write_manifest_csv(f, manifest);
      out << "wrote " << manifest.size() << " problems to " << path.string() << '\n';
    } else if (*run) {
      ExperimentConfig cfg = load_config(run_config);
      run_over.apply(cfg);
      ProgressFn progress;
      if (!quiet) {
        progress = [&err](std::size_t done, std::size_t total) {
          if (done == total || done % 10 == 0) err << "\r" << done << "/" << total << " problems" << std::flush;
          if (done == total) err << '\n';
        };
      }
      const auto result = run_experiment(cfg, progress);
      std::size_t capped = 0;
      for (const auto& r : result.rows) capped += r.termination == Termination::MaxIterations;
      out << "wrote " << result.rows.size() << " rows to " << result.results_csv.string()
          << " (" << capped << " hit max_iters)\n";
    } else if (*rates) {
      const auto grid = rate_thetas.empty() ? default_grid() : rate_thetas;
      std::optional<double> tp;
      if (theta_p_opt->count()) tp = rate_theta_p;
      const auto table = rates_table(grid, tp, rate_tol);
      out << std::left << std::setw(14) << "theta_f" << std::setw(10) << "method" << std::setw(14)
          << "gamma" << "iterations\n";
      for (const auto& e : table) {
        out << std::setw(14) << format_real(e.theta_f) << std::setw(10) << e.method << std::setw(14)
            << std::setprecision(6) << e.gamma
            << (e.expected_iterations ? std::to_string(*e.expected_iterations) : std::string("inf"))
            << '\n';
      }
      if (!rate_out.empty()) {
        const std::filesystem::path dir(rate_out);
        {
          auto f = open_output(dir / "rates.csv");
          write_rates_csv(f, table);
        }
        auto f = open_output(dir / "rates.svg");
        plot_rates(f, table);
      }
    } else if (*spectrum) {
      const Method method = Method::parse(spec_method);
      const ProblemInstance inst = generate_problem(spec_rows, spec_seed);
      const GapParameters params = preset(method, inst.theta_f, inst.theta_p);
      const ProblemDims dims{inst.problem.U.dim(), inst.problem.V.dim(), inst.problem.U.ambient_dim()};
      const auto predicted = predict_eigenvalues(params, inst.angles, dims);
      const Matrix S = build_dense_operator(params, inst.problem.U, inst.problem.V);
      const double oracle = subdominant_magnitude(S);
      const auto report = classify_convergence(S);
      out << std::setprecision(17);
      out << "problem      " << inst.id << " (dim U " << dims.dim_u << ", dim V " << dims.dim_v
          << ", dim U∩V " << inst.problem.W.dim() << ")\n"
          << "theta_f      " << inst.theta_f << "\n"
          << "theta_p      " << inst.theta_p << "\n"
          << "method       " << method.name() << " (alpha " << params.alpha << ", alpha1 "
          << params.alpha1 << ", alpha2 " << params.alpha2 << ", "
          << to_string(params.classify()) << ")\n"
          << "gamma pred   " << predicted.gamma << "\n"
          << "gamma dense  " << oracle << "\n"
          << "difference   " << std::abs(predicted.gamma - oracle) << "\n"
          << "convergent   " << (report.convergent ? "yes" : "no") << " (" << report.detail << ")\n";
      if (spec_list) {
        auto dense = dense_eigenvalues(S);
        auto pred = predicted.eigenvalues;
        auto by_re_im = [](Complex a, Complex b) {
          return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
        };
        std::sort(dense.begin(), dense.end(), by_re_im);
        std::sort(pred.begin(), pred.end(), by_re_im);
        out << "predicted,dense\n";
        for (std::size_t i = 0; i < pred.size(); ++i) {
          out << pred[i] << ',' << (i < dense.size() ? dense[i] : Complex()) << '\n';
        }
      }
    } else if (*plot) {
      std::ifstream in(plot_input);
      const auto rows = read_results_csv(in);
      std::filesystem::path target = plot_out.empty()
                                         ? std::filesystem::path(plot_input).parent_path() / "iterations.svg"
                                         : std::filesystem::path(plot_out);
      auto f = open_output(target);
      plot_iterations(f, rows, plot_tol);
      out << "wrote " << target.string() << '\n';
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace gap
