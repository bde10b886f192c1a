#include "epcs/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "epcs/errors.hpp"
#include "epcs/reference.hpp"
#include "epcs/tableau.hpp"

namespace epcs::harness {

namespace {

std::string format_number(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

std::string short_number(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.3e", value);
  return buffer;
}

std::string_view trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r");
  return text.substr(first, last - first + 1);
}

template <class T>
T parse_number(std::string_view text, std::string_view what) {
  text = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw UsageError("invalid value '" + std::string(text) + "' for " + std::string(what));
  }
  return value;
}

}  // namespace

int default_quadrature(std::string_view problem) {
  if (problem == "euler") return 2;
  if (problem == "lv2") return 4;
  if (problem == "lv3") return 6;
  if (problem == "canonical-oscillator") return 2;
  throw UsageError("unknown problem '" + std::string(problem) + "'");
}

Method parse_method(std::string_view name) {
  if (name == "enhanced") return Method::enhanced;
  if (name == "cohen-hairer" || name == "baseline") return Method::cohen_hairer;
  throw UsageError("unknown method '" + std::string(name) + "'");
}

void validate(const ExperimentConfig& config) {
  default_quadrature(config.problem);
  parse_method(config.method);
  if (config.m < 1) throw UsageError("m must be positive");
  for (const auto& quad : {config.quad_sigma, config.quad_varsigma}) {
    if (quad && (*quad < 1 || *quad > kMaxGaussPoints)) {
      throw UsageError("quadrature sizes must lie in [1, " + std::to_string(kMaxGaussPoints) + "]");
    }
  }
  if (!(config.h > 0.0)) throw UsageError("h must be positive");
  if (config.steps < 1) throw UsageError("steps must be positive");
  if (!(config.tol > 0.0)) throw UsageError("tol must be positive");
  const int sigma = config.quad_sigma.value_or(default_quadrature(config.problem));
  if (parse_method(config.method) == Method::enhanced && sigma < config.m) {
    throw UsageError("quad-sigma must be at least m");
  }
}

void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value) {
  std::string k(trim(key));
  std::replace(k.begin(), k.end(), '-', '_');
  value = trim(value);
  if (k == "problem") {
    config.problem = value;
  } else if (k == "method") {
    config.method = value;
  } else if (k == "m") {
    config.m = parse_number<int>(value, k);
  } else if (k == "quad_sigma") {
    config.quad_sigma = parse_number<int>(value, k);
  } else if (k == "quad_varsigma") {
    config.quad_varsigma = parse_number<int>(value, k);
  } else if (k == "h") {
    config.h = parse_number<double>(value, k);
  } else if (k == "steps") {
    config.steps = parse_number<long>(value, k);
  } else if (k == "tol") {
    config.tol = parse_number<double>(value, k);
  } else if (k == "out") {
    config.output_path = value;
  } else {
    throw UsageError("unknown config key '" + k + "'");
  }
}

void load_config_file(ExperimentConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path.string());
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string_view text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw UsageError(path.string() + ":" + std::to_string(number) + ": expected key=value");
    }
    apply_setting(config, text.substr(0, eq), text.substr(eq + 1));
  }
}

MethodSpec method_spec(const ExperimentConfig& config) {
  const int fallback = default_quadrature(config.problem);
  MethodSpec spec;
  spec.m = config.m;
  spec.sigma_rule = gauss_rule(config.quad_sigma.value_or(fallback));
  spec.varsigma_rule = gauss_rule(config.quad_varsigma.value_or(fallback));
  spec.solver_tol = config.tol;
  return spec;
}

RunSummary summarize(const RunRecord& record) {
  RunSummary summary;
  for (double e : record.energy_error) {
    summary.max_energy_error = std::max(summary.max_energy_error, std::abs(e));
  }
  for (std::size_t c = 0; c < record.casimir_names.size(); ++c) {
    double worst = 0.0;
    for (double e : record.casimir_errors[c]) worst = std::max(worst, std::abs(e));
    summary.max_casimir_errors.emplace_back(record.casimir_names[c], worst);
  }
  if (record.global_error && !record.global_error->empty()) {
    summary.final_global_error = record.global_error->back();
  }
  if (record.iterations.size() > 1) {
    double total = 0.0;
    for (std::size_t n = 1; n < record.iterations.size(); ++n) total += record.iterations[n];
    summary.mean_iterations = total / static_cast<double>(record.iterations.size() - 1);
  }
  return summary;
}

void print_summary(std::ostream& out, const ExperimentConfig& config, const RunSummary& summary) {
  out << config.problem << " " << config.method << " m=" << config.m << " h=" << config.h
      << " steps=" << config.steps << "\n";
  auto row = [&out](const std::string& label, const std::string& value) {
    out << "  " << std::left << std::setw(32) << label << std::right << value << "\n";
  };
  row("max |energy error|", short_number(summary.max_energy_error));
  for (const auto& [name, value] : summary.max_casimir_errors) {
    row("max |casimir " + name + " error|", short_number(value));
  }
  if (summary.final_global_error) row("final global error", short_number(*summary.final_global_error));
  char iterations[32];
  std::snprintf(iterations, sizeof iterations, "%.2f", summary.mean_iterations);
  row("mean solver iterations", iterations);
}

std::string csv_header(const PoissonSystem& system) {
  std::string header = "t";
  for (int i = 1; i <= system.dim; ++i) header += ",y" + std::to_string(i);
  header += ",energy_err";
  for (const Casimir& c : system.casimirs) header += ",casimir_" + c.name + "_err";
  header += ",global_err,iters";
  return header;
}

void write_csv(std::ostream& out, const PoissonSystem& system, const RunRecord& record) {
  out << csv_header(system) << "\n";
  for (std::size_t n = 0; n < record.size(); ++n) {
    out << format_number(record.times[n]);
    for (Eigen::Index i = 0; i < record.states[n].size(); ++i) {
      out << ',' << format_number(record.states[n](i));
    }
    out << ',' << format_number(record.energy_error[n]);
    for (const auto& series : record.casimir_errors) out << ',' << format_number(series[n]);
    out << ',';
    if (record.global_error) out << format_number((*record.global_error)[n]);
    out << ',' << record.iterations[n] << "\n";
  }
}

RunOutcome run(const ExperimentConfig& config) {
  validate(config);
  const PoissonSystem system = system_by_name(config.problem);
  const std::optional<ReferenceSolution> reference = analytic_reference(config.problem);

  RunOutcome outcome;
  outcome.record = integrate(system, parse_method(config.method), method_spec(config),
                             system.initial_state, config.h, static_cast<std::size_t>(config.steps),
                             reference ? &*reference : nullptr);
  outcome.summary = summarize(outcome.record);

  if (!config.output_path.empty()) {
    std::ofstream out(config.output_path);
    if (!out) throw UsageError("cannot write " + config.output_path);
    write_csv(out, system, outcome.record);
  }
  return outcome;
}

std::vector<ConvergenceRow> convergence_study(const ConvergenceRequest& request) {
  ExperimentConfig base;
  base.problem = request.problem;
  base.method = request.method;
  base.m = request.m;
  base.quad_sigma = request.quad;
  base.quad_varsigma = request.quad;
  base.tol = request.tol;
  validate(base);
  if (request.h_list.empty()) throw UsageError("h list is empty");
  if (!(request.t_end > 0.0)) throw UsageError("t_end must be positive");

  const PoissonSystem system = system_by_name(request.problem);
  const Vector y0 = system.initial_state;
  const std::optional<ReferenceSolution> analytic = analytic_reference(request.problem);
  const Vector exact = analytic ? analytic->evaluate(request.t_end)
                                : rk4_reference(system, y0, request.t_end);

  std::vector<ConvergenceRow> rows;
  for (double h : request.h_list) {
    if (!(h > 0.0)) throw UsageError("step sizes must be positive");
    const double ratio = request.t_end / h;
    const long steps = std::lround(ratio);
    if (steps < 1 || std::abs(ratio - static_cast<double>(steps)) > 1e-9 * ratio) {
      throw UsageError("t_end is not an integer multiple of h = " + format_number(h));
    }
    ExperimentConfig config = base;
    config.h = h;
    config.steps = steps;
    const RunRecord record = integrate(system, parse_method(config.method), method_spec(config), y0,
                                       request.t_end / static_cast<double>(steps),
                                       static_cast<std::size_t>(steps));
    ConvergenceRow row;
    row.h = h;
    row.error = (record.states.back() - exact).cwiseAbs().maxCoeff();
    if (!rows.empty()) {
      const ConvergenceRow& prev = rows.back();
      row.order = std::log(prev.error / row.error) / std::log(prev.h / h);
    }
    rows.push_back(row);
  }
  return rows;
}

void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows) {
  out << "h,global_err,order\n";
  for (const ConvergenceRow& row : rows) {
    out << format_number(row.h) << ',' << format_number(row.error) << ',';
    if (row.order) out << format_number(*row.order);
    out << "\n";
  }
}

void print_convergence(std::ostream& out, const std::vector<ConvergenceRow>& rows) {
  out << "         h      global error   order\n";
  for (const ConvergenceRow& row : rows) {
    char line[96];
    if (row.order) {
      std::snprintf(line, sizeof line, "%10.4g  %14.6e  %6.3f\n", row.h, row.error, *row.order);
    } else {
      std::snprintf(line, sizeof line, "%10.4g  %14.6e       -\n", row.h, row.error);
    }
    out << line;
  }
}

bool ConditionReport::passed() const {
  return std::all_of(lines.begin(), lines.end(), [](const ConditionLine& l) { return l.ok; });
}

ConditionReport verify_conditions(const std::vector<int>& m_list) {
  constexpr double kGridTolerance = 1e-11;
  constexpr double kNodeTolerance = 1e-13;
  ConditionReport report;
  const SampleGrid grid = SampleGrid::uniform(11);
  for (int m : m_list) {
    if (m < 1) throw UsageError("m must be positive");

    const double energy = check_energy_condition(m, grid);
    report.lines.push_back({m, "energy condition residual", short_number(energy),
                            "<= 1e-11", energy <= kGridTolerance});

    const double symmetry = check_symmetry_condition(m, grid);
    report.lines.push_back({m, "symmetry condition residual", short_number(symmetry),
                            "<= 1e-11", symmetry <= kGridTolerance});

    const SimplifyingAssumptions orders = check_simplifying_assumptions(m);
    auto triple = [](int a, int b, int c) {
      return "(" + std::to_string(a) + ", " + std::to_string(b) + ", " + std::to_string(c) + ")";
    };
    report.lines.push_back({m, "simplifying assumptions (xi, eta, zeta)",
                            triple(orders.xi_B, orders.eta_C, orders.zeta_D),
                            triple(2 * m, m, m - 1),
                            orders.xi_B == 2 * m && orders.eta_C == m && orders.zeta_D == m - 1});

    for (int s : {m - 1, m}) {
      if (s < 1) continue;
      const double node = check_casimir_condition_nodes(m, gauss_rule(s));
      report.lines.push_back({m, "Casimir node identity, " + std::to_string(s) + "-point Gauss",
                              short_number(node), "<= 1e-13", node <= kNodeTolerance});
    }

    const double control = check_casimir_condition_nodes(m, interpolatory_weights({0.1, 0.3}));
    report.lines.push_back({m, "Casimir node identity, nodes {0.1, 0.3} (expected-negative)",
                            short_number(control), "> 1e-3", control > 1e-3});
  }
  return report;
}

void print_conditions(std::ostream& out, const ConditionReport& report) {
  for (const ConditionLine& line : report.lines) {
    out << (line.ok ? "ok    " : "FAIL  ") << "m=" << line.m << "  " << line.check << ": "
        << line.observed << " (expected " << line.expected << ")\n";
  }
}

std::vector<SuiteEntry> run_experiment_suite(const std::filesystem::path& out_dir, bool full,
                                    std::ostream& log) {
  std::filesystem::create_directories(out_dir);
  struct Experiment {
    const char* problem;
    double h;
    long steps;
  };
  const long lv_steps = full ? 100000 : 10000;
  const Experiment experiments[] = {{"euler", 0.1, 10000}, {"lv2", 0.01, lv_steps},
                                    {"lv3", 0.01, lv_steps}};

  std::vector<SuiteEntry> entries;
  for (const Experiment& e : experiments) {
    for (int m : {1, 2}) {
      ExperimentConfig config;
      config.problem = e.problem;
      config.m = m;
      config.h = e.h;
      config.steps = e.steps;
      config.output_path =
          (out_dir / (std::string(e.problem) + "_m" + std::to_string(m) + ".csv")).string();
      const RunOutcome outcome = run(config);
      print_summary(log, config, outcome.summary);
      entries.push_back({config, outcome.summary});
    }
  }

  for (const auto& [method, m] : {std::pair<const char*, int>{"enhanced", 1}, {"enhanced", 2},
                                  {"cohen-hairer", 1}}) {
    ConvergenceRequest request;
    request.method = method;
    request.m = m;
    const auto rows = convergence_study(request);
    const std::string name = std::string("converge_euler_") + method + "_m" + std::to_string(m);
    std::ofstream table(out_dir / (name + ".csv"));
    write_convergence_csv(table, rows);
    log << name << "\n";
    print_convergence(log, rows);
  }
  return entries;
}

namespace {

template <class T>
std::vector<T> parse_list(std::string_view text, std::string_view what) {
  std::vector<T> values;
  while (!text.empty()) {
    const auto comma = text.find(',');
    values.push_back(parse_number<T>(text.substr(0, comma), what));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (values.empty()) throw UsageError("empty list for " + std::string(what));
  return values;
}

}  // namespace

std::vector<double> parse_double_list(std::string_view text) {
  return parse_list<double>(text, "list");
}

std::vector<int> parse_int_list(std::string_view text) { return parse_list<int>(text, "list"); }

}  // namespace epcs::harness
