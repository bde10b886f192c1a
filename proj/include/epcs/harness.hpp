#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "epcs/integrator.hpp"
#include "epcs/systems.hpp"

namespace epcs::harness {

enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 1,
  kIntegrationFailure = 2,
  kConditionFailure = 3,
};

struct ExperimentConfig {
  std::string problem = "euler";
  std::string method = "enhanced";
  int m = 1;
  /// Unset means the problem's default Gauss rule size.
  std::optional<int> quad_sigma;
  std::optional<int> quad_varsigma;
  double h = 0.1;
  long steps = 10000;
  double tol = 1e-14;
  std::string output_path;
};

/// Gauss points used for both integrals when not configured:
/// euler 2, lv2 4, lv3 6, canonical-oscillator 2.
int default_quadrature(std::string_view problem);

/// "enhanced", "cohen-hairer" (alias "baseline"). Throws UsageError.
Method parse_method(std::string_view name);

/// Throws UsageError on unknown names or non-positive numeric fields.
void validate(const ExperimentConfig& config);

/// Sets one field from a key=value pair. Keys: problem, method, m,
/// quad_sigma, quad_varsigma, h, steps, tol, out (dashes accepted for
/// underscores). Throws UsageError.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

/// Reads a flat key=value file over `config`. Blank lines and lines starting
/// with '#' are ignored.
void load_config_file(ExperimentConfig& config, const std::filesystem::path& path);

MethodSpec method_spec(const ExperimentConfig& config);

struct RunSummary {
  double max_energy_error = 0.0;
  std::vector<std::pair<std::string, double>> max_casimir_errors;
  std::optional<double> final_global_error;
  double mean_iterations = 0.0;
};

RunSummary summarize(const RunRecord& record);
void print_summary(std::ostream& out, const ExperimentConfig& config, const RunSummary& summary);

/// "t,y1,...,yn,energy_err,casimir_<name>_err...,global_err,iters"
std::string csv_header(const PoissonSystem& system);
/// Header plus one row per recorded state; 17 significant digits.
void write_csv(std::ostream& out, const PoissonSystem& system, const RunRecord& record);

struct RunOutcome {
  RunRecord record;
  RunSummary summary;
};

/// Integrates the configured problem from its default initial state and, if
/// output_path is set, writes the CSV there. Global error is recorded when
/// the problem has an analytic reference.
RunOutcome run(const ExperimentConfig& config);

struct ConvergenceRow {
  double h = 0.0;
  double error = 0.0;
  /// log(e_prev / e) / log(h_prev / h); absent for the first row.
  std::optional<double> order;
};

struct ConvergenceRequest {
  std::string problem = "euler";
  std::string method = "enhanced";
  int m = 1;
  std::optional<int> quad;
  std::vector<double> h_list{0.2, 0.1, 0.05, 0.025};
  double t_end = 1.0;
  double tol = 1e-14;
};

/// Global max-norm error at t_end for each h, against the analytic solution
/// where one exists and an RK4 reference otherwise. t_end / h must be an
/// integer for every h.
std::vector<ConvergenceRow> convergence_study(const ConvergenceRequest& request);
void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows);
void print_convergence(std::ostream& out, const std::vector<ConvergenceRow>& rows);

struct ConditionLine {
  int m = 0;
  std::string check;
  std::string observed;
  std::string expected;
  bool ok = false;
};

struct ConditionReport {
  std::vector<ConditionLine> lines;
  bool passed() const;
};

/// Energy and symmetry residuals on an 11^3 grid (<= 1e-11), simplifying
/// assumptions (expected (2m, m, m-1)), the node Casimir identity on Gauss
/// rules with m and m-1 points (<= 1e-13), and the expected-negative node
/// set {0.1, 0.3}.
ConditionReport verify_conditions(const std::vector<int>& m_list);
void print_conditions(std::ostream& out, const ConditionReport& report);

struct SuiteEntry {
  ExperimentConfig config;
  RunSummary summary;
};

/// Euler (2-point Gauss, h = 0.1), LV2 (4-point, h = 0.01) and LV3 (6-point,
/// h = 0.01) with the enhanced method for m = 1 and 2, each 10^4 steps; with
/// `full` the LV runs take 10^5 steps. CSVs go to out_dir along with the
/// Euler convergence tables.
std::vector<SuiteEntry> run_experiment_suite(const std::filesystem::path& out_dir, bool full,
                                    std::ostream& log);

/// Parses "0.2,0.1" style lists. Throws UsageError.
std::vector<double> parse_double_list(std::string_view text);
std::vector<int> parse_int_list(std::string_view text);

}  // namespace epcs::harness
