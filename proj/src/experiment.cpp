#include "gap/experiment.hpp"

#include "gap/random.hpp"
#include "gap/spectral.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace gap {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <class T>
T parse_number(const std::string& text, const std::string& key) {
  T value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw std::invalid_argument("config: bad value '" + text + "' for " + key);
  }
  return value;
}

std::optional<double> parse_optional_real(const std::string& field) {
  if (field.empty()) return std::nullopt;
  return parse_number<double>(field, "csv field");
}

std::string format_optional(const std::optional<double>& v) {
  return v ? format_real(*v) : std::string();
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::optional<long> iterations_for(const std::string& method_name, double theta_f,
                                   std::optional<double> theta_p, double tol) {
  try {
    const double rate = theoretical_rate(Method::parse(method_name), theta_f, theta_p);
    if (!(rate < 1.0)) return std::nullopt;
    return expected_iterations(rate, tol);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

std::vector<int> default_categories() {
  return {1, 5, 10, 20, 30, 40, 50, 60, 70, 80, 90, 95, 99};
}

std::vector<Method> default_methods() {
  return {Method{MethodKind::GapStar, 0.0}, Method{MethodKind::GapaInit, 1.0},
          Method{MethodKind::Gap2A, 0.0},   Method{MethodKind::DR, 0.0},
          Method{MethodKind::MapOpt, 0.0},  gap_fixed(1.8)};
}

void ExperimentConfig::validate() const {
  if (categories.empty()) throw std::invalid_argument("config: no categories");
  for (int c : categories) {
    if (c < 1 || c > 99) throw std::invalid_argument("config: categories must lie in [1, 99]");
  }
  if (problems_per_category < 1) {
    throw std::invalid_argument("config: problems_per_category must be >= 1");
  }
  if (methods.empty()) throw std::invalid_argument("config: no methods");
  stopping.validate();
  if (!(alpha0 > 0.0 && alpha0 < 2.0)) throw std::invalid_argument("config: alpha0 must lie in (0, 2)");
  if (!(epsilon_cap >= 0.0)) throw std::invalid_argument("config: epsilon_cap must be >= 0");
  if (jobs < 1) throw std::invalid_argument("config: jobs must be >= 1");
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));

    if (key == "categories") {
      cfg.categories.clear();
      for (const auto& item : split(value, ',')) cfg.categories.push_back(parse_number<int>(item, key));
    } else if (key == "problems_per_category") {
      cfg.problems_per_category = parse_number<int>(value, key);
    } else if (key == "methods") {
      cfg.methods.clear();
      for (const auto& item : split(value, ',')) {
        Method m = Method::parse(item);
        cfg.methods.push_back(m);
      }
    } else if (key == "tolerance") {
      cfg.stopping.tolerance = parse_number<double>(value, key);
    } else if (key == "max_iterations") {
      cfg.stopping.max_iterations = parse_number<long>(value, key);
    } else if (key == "base_seed") {
      cfg.base_seed = parse_number<std::uint64_t>(value, key);
    } else if (key == "output_dir") {
      cfg.output_dir = value;
    } else if (key == "alpha0") {
      cfg.alpha0 = parse_number<double>(value, key);
    } else if (key == "epsilon_cap") {
      cfg.epsilon_cap = parse_number<double>(value, key);
    } else if (key == "jobs") {
      cfg.jobs = parse_number<int>(value, key);
    } else {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  for (auto& m : cfg.methods) {
    if (m.kind == MethodKind::GapaInit) m.value = cfg.alpha0;
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::vector<ProblemSlot> enumerate_problems(const ExperimentConfig& config) {
  std::vector<ProblemSlot> slots;
  slots.reserve(config.categories.size() *
                static_cast<std::size_t>(config.problems_per_category));
  for (int rows : config.categories) {
    for (int i = 0; i < config.problems_per_category; ++i) {
      const auto index = static_cast<std::uint64_t>(i);
      slots.push_back({problem_id(rows, index), rows, index,
                       substream_seed(config.base_seed, static_cast<std::uint64_t>(rows), index)});
    }
  }
  return slots;
}

std::vector<ResultRow> solve_problem(const ProblemInstance& instance,
                                     const ExperimentConfig& config) {
  std::vector<ResultRow> rows;
  for (const Method& method : config.methods) {
    SolverTrace trace;
    if (method.kind == MethodKind::GapaInit) {
      const double a0 = method.value > 0.0 ? method.value : config.alpha0;
      trace = run_adaptive(instance.problem, instance.x0, a0, config.stopping,
                           config.epsilon_cap);
    } else {
      const GapParameters params = preset(method, instance.theta_f, instance.theta_p);
      trace = run_fixed(params, instance.problem, instance.x0, config.stopping);
    }

    ResultRow row;
    row.problem_id = instance.id;
    row.seed = instance.seed;
    row.n_rows_A = instance.n_rows_A;
    row.theta_f = instance.theta_f;
    row.theta_p = instance.theta_p;
    row.method = method.name();
    row.iterations = trace.iteration_count;
    row.termination = trace.termination;
    row.final_residual = trace.final_residual();
    if (trace.iteration_count >= 20) {
      try {
        row.observed_rate = fit_observed_rate(trace, trace.iteration_count / 2);
      } catch (const std::invalid_argument&) {
      }
    }
    row.final_angle_estimate = trace.final_angle_estimate();
    if (const auto lowest = trace.min_angle_estimate()) {
      row.min_angle_gap = *lowest - instance.theta_f;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

template <class Fn>
void parallel_for(std::size_t count, int jobs, Fn&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), std::max<std::size_t>(count, 1));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto body = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
        return;
      }
    }
  };
  if (workers <= 1) {
    body();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

std::vector<ResultRow> run_problems(const ExperimentConfig& config,
                                    const ProgressFn& progress) {
  config.validate();
  const auto slots = enumerate_problems(config);
  std::vector<std::vector<ResultRow>> per_problem(slots.size());
  std::mutex progress_mutex;
  std::size_t done = 0;
  parallel_for(slots.size(), config.jobs, [&](std::size_t i) {
    const auto& slot = slots[i];
    const ProblemInstance instance = generate_problem(slot.n_rows_A, slot.seed, slot.id);
    per_problem[i] = solve_problem(instance, config);
    if (progress) {
      std::lock_guard lock(progress_mutex);
      progress(++done, slots.size());
    }
  });
  std::vector<ResultRow> rows;
  for (auto& chunk : per_problem) {
    for (auto& row : chunk) rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ManifestEntry> build_manifest(const ExperimentConfig& config) {
  config.validate();
  const auto slots = enumerate_problems(config);
  std::vector<ManifestEntry> entries(slots.size());
  parallel_for(slots.size(), config.jobs, [&](std::size_t i) {
    const auto& slot = slots[i];
    const ProblemInstance inst = generate_problem(slot.n_rows_A, slot.seed, slot.id);
    entries[i] = {inst.id, inst.seed, inst.n_rows_A, inst.theta_f, inst.theta_p,
                  inst.problem.W.dim(), inst.retries};
  });
  return entries;
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

void write_results_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
  os << kResultsHeader << '\n';
  for (const auto& r : rows) {
    os << r.problem_id << ',' << r.seed << ',' << r.n_rows_A << ','
       << format_real(r.theta_f) << ',' << format_real(r.theta_p) << ',' << r.method << ','
       << r.iterations << ',' << to_string(r.termination) << ','
       << format_real(r.final_residual) << ',' << format_optional(r.observed_rate) << ','
       << format_optional(r.final_angle_estimate) << '\n';
  }
}

std::vector<ResultRow> read_results_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || trim(line) != kResultsHeader) {
    throw std::invalid_argument("results csv: unexpected header");
  }
  std::vector<ResultRow> rows;
  while (std::getline(is, line)) {
    if (trim(line).empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 11) throw std::invalid_argument("results csv: expected 11 fields");
    ResultRow r;
    r.problem_id = f[0];
    r.seed = parse_number<std::uint64_t>(f[1], "seed");
    r.n_rows_A = parse_number<int>(f[2], "n_rows_A");
    r.theta_f = parse_number<double>(f[3], "theta_f");
    r.theta_p = parse_number<double>(f[4], "theta_p");
    r.method = f[5];
    r.iterations = parse_number<long>(f[6], "iterations");
    r.termination = f[7] == "converged" ? Termination::Converged : Termination::MaxIterations;
    r.final_residual = parse_number<double>(f[8], "final_residual");
    r.observed_rate = parse_optional_real(f[9]);
    r.final_angle_estimate = parse_optional_real(f[10]);
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_manifest_csv(std::ostream& os, const std::vector<ManifestEntry>& entries) {
  os << "id,seed,n_rows_A,theta_f,theta_p,intersection_dim,retries\n";
  for (const auto& e : entries) {
    os << e.id << ',' << e.seed << ',' << e.n_rows_A << ',' << format_real(e.theta_f) << ','
       << format_real(e.theta_p) << ',' << e.intersection_dim << ',' << e.retries << '\n';
  }
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows,
                                  double tolerance, int bins) {
  // Problems sorted by theta_F, then cut into equal-count bins.
  std::map<std::string, double> theta_by_problem;
  std::vector<std::string> method_order;
  for (const auto& r : rows) {
    theta_by_problem.emplace(r.problem_id, r.theta_f);
    if (std::find(method_order.begin(), method_order.end(), r.method) == method_order.end()) {
      method_order.push_back(r.method);
    }
  }
  std::vector<std::pair<double, std::string>> sorted;
  for (const auto& [id, theta] : theta_by_problem) sorted.emplace_back(theta, id);
  std::sort(sorted.begin(), sorted.end());

  const std::size_t total = sorted.size();
  bins = std::max(1, std::min<int>(bins, static_cast<int>(std::max<std::size_t>(total, 1))));
  std::map<std::string, int> bin_of;
  for (std::size_t i = 0; i < total; ++i) {
    bin_of[sorted[i].second] = static_cast<int>(i * static_cast<std::size_t>(bins) / total);
  }

  std::vector<SummaryRow> out;
  for (int b = 0; b < bins; ++b) {
    std::vector<double> thetas;
    for (std::size_t i = 0; i < total; ++i) {
      if (bin_of[sorted[i].second] == b) thetas.push_back(sorted[i].first);
    }
    if (thetas.empty()) continue;
    const double theta_med = median(thetas);
    for (const auto& method : method_order) {
      SummaryRow s;
      s.decile = b;
      s.theta_f_lo = *std::min_element(thetas.begin(), thetas.end());
      s.theta_f_hi = *std::max_element(thetas.begin(), thetas.end());
      s.theta_f_median = theta_med;
      s.method = method;
      std::vector<double> iters;
      for (const auto& r : rows) {
        if (r.method != method || bin_of[r.problem_id] != b) continue;
        iters.push_back(static_cast<double>(r.iterations));
        ++s.runs;
        if (r.termination == Termination::Converged) ++s.converged;
      }
      if (s.runs == 0) continue;
      s.median_iterations = median(iters);
      s.expected_iterations = iterations_for(method, theta_med, std::nullopt, tolerance);
      out.push_back(std::move(s));
    }
  }
  return out;
}

void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows) {
  os << "decile,theta_f_lo,theta_f_hi,theta_f_median,method,runs,converged,"
        "median_iterations,expected_iterations\n";
  for (const auto& s : rows) {
    os << s.decile << ',' << format_real(s.theta_f_lo) << ',' << format_real(s.theta_f_hi) << ','
       << format_real(s.theta_f_median) << ',' << s.method << ',' << s.runs << ','
       << s.converged << ',' << format_real(s.median_iterations) << ','
       << (s.expected_iterations ? std::to_string(*s.expected_iterations) : std::string())
       << '\n';
  }
}

ExperimentOutputs run_experiment(const ExperimentConfig& config,
                                 const ProgressFn& progress) {
  config.validate();
  std::error_code ec;
  std::filesystem::create_directories(config.output_dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory " +
                             config.output_dir.string() + ": " + ec.message());
  }
  ExperimentOutputs out;
  out.results_csv = config.output_dir / "results.csv";
  out.summary_csv = config.output_dir / "summary.csv";
  out.diagnostics_csv = config.output_dir / "diagnostics.csv";
  out.metadata = config.output_dir / "metadata.txt";

  auto open = [](const std::filesystem::path& p) {
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    return f;
  };
  // Fail on an unwritable directory before spending hours on the sweep.
  { auto probe = open(out.results_csv); }

  const auto started = std::chrono::system_clock::now();
  out.rows = run_problems(config, progress);
  const auto finished = std::chrono::system_clock::now();

  {
    auto f = open(out.results_csv);
    write_results_csv(f, out.rows);
  }
  {
    auto f = open(out.summary_csv);
    write_summary_csv(f, summarize(out.rows, config.stopping.tolerance));
  }
  {
    auto f = open(out.diagnostics_csv);
    f << "problem_id,method,min_angle_gap\n";
    for (const auto& r : out.rows) {
      if (r.min_angle_gap) f << r.problem_id << ',' << r.method << ',' << format_real(*r.min_angle_gap) << '\n';
    }
  }
  {
    auto f = open(out.metadata);
    auto stamp = [](std::chrono::system_clock::time_point t) {
      const std::time_t tt = std::chrono::system_clock::to_time_t(t);
      std::ostringstream s;
      s << std::put_time(std::gmtime(&tt), "%Y-%m-%dT%H:%M:%SZ");
      return s.str();
    };
    f << "started = " << stamp(started) << '\n'
      << "finished = " << stamp(finished) << '\n'
      << "rng = " << CounterRng::kName << '\n'
      << "base_seed = " << config.base_seed << '\n'
      << "problems = " << config.categories.size() * static_cast<std::size_t>(config.problems_per_category) << '\n'
      << "rows = " << out.rows.size() << '\n';
  }
  return out;
}

std::vector<RateEntry> rates_table(const std::vector<double>& theta_f_grid,
                                   std::optional<double> theta_p, double tol) {
  std::vector<Method> methods = {Method{MethodKind::GapStar, 0.0}, Method{MethodKind::MapOpt, 0.0},
                                 Method{MethodKind::DR, 0.0}, Method{MethodKind::AP, 0.0},
                                 Method{MethodKind::Gap2A, 0.0}};
  if (theta_p) methods.push_back(Method{MethodKind::PRAP, 0.0});
  std::vector<RateEntry> out;
  for (double theta : theta_f_grid) {
    for (const auto& m : methods) {
      RateEntry e;
      e.theta_f = theta;
      e.method = m.name();
      e.gamma = theoretical_rate(m, theta, theta_p);
      if (e.gamma >= 0.0 && e.gamma < 1.0) e.expected_iterations = expected_iterations(e.gamma, tol);
      out.push_back(std::move(e));
    }
  }
  return out;
}

void write_rates_csv(std::ostream& os, const std::vector<RateEntry>& rows) {
  os << "theta_f,method,gamma,expected_iterations\n";
  for (const auto& e : rows) {
    os << format_real(e.theta_f) << ',' << e.method << ',' << format_real(e.gamma) << ','
       << (e.expected_iterations ? std::to_string(*e.expected_iterations) : std::string())
       << '\n';
  }
}

}  // namespace gap
