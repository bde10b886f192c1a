// Command-line front end for the energy-preserving continuous-stage solvers.
//
//   epcs run --problem euler --method enhanced --m 2 --h 0.1 --steps 10000 --out run.csv
//   epcs converge --problem euler --m 2 --h-list 0.2,0.1,0.05,0.025 --t-end 1
//   epcs verify --m-list 1,2,3
//   epcs suite paper [--full] [--out-dir results]

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "epcs/errors.hpp"
#include "epcs/harness.hpp"

namespace h = epcs::harness;

int main(int argc, char** argv) {
  CLI::App app{"Energy-preserving continuous-stage integrators for Poisson systems"};
  app.require_subcommand(1);
  // "--h" is the step size, so help gets no short form.
  app.set_help_flag("--help", "Print this help message and exit");

  // run
  auto* run = app.add_subcommand("run", "Integrate one problem and write a CSV run record");
  std::string config_file;
  std::string problem, method, out;
  int m = 0, quad_sigma = 0, quad_varsigma = 0;
  double step = 0.0, tol = 0.0;
  long steps = 0;
  run->add_option("--config", config_file, "key=value config file (flags take precedence)");
  auto* o_problem = run->add_option("--problem", problem, "euler | lv2 | lv3 | canonical-oscillator");
  auto* o_method = run->add_option("--method", method, "enhanced | cohen-hairer");
  auto* o_m = run->add_option("--m", m, "order parameter (method order 2m)");
  auto* o_qs = run->add_option("--quad-sigma", quad_sigma, "Gauss points for the gradient integral");
  auto* o_qv = run->add_option("--quad-varsigma", quad_varsigma,
                               "Gauss points for the structure-matrix integral");
  auto* o_h = run->add_option("--h", step, "step size");
  auto* o_steps = run->add_option("--steps", steps, "number of steps");
  auto* o_tol = run->add_option("--tol", tol, "fixed-point tolerance");
  auto* o_out = run->add_option("--out", out, "CSV output path");

  // converge
  auto* converge = app.add_subcommand("converge", "Observed order from a step-size sweep");
  h::ConvergenceRequest request;
  std::string h_list = "0.2,0.1,0.05,0.025";
  std::string table_out;
  int quad = 0;
  converge->add_option("--problem", request.problem, "problem name");
  converge->add_option("--method", request.method, "enhanced | cohen-hairer");
  converge->add_option("--m", request.m, "order parameter");
  auto* o_quad = converge->add_option("--quad", quad, "Gauss points for both integrals");
  converge->add_option("--h-list", h_list, "comma-separated step sizes");
  converge->add_option("--t-end", request.t_end, "final time");
  converge->add_option("--tol", request.tol, "fixed-point tolerance");
  converge->add_option("--out", table_out, "CSV table output path");

  // verify
  auto* verify = app.add_subcommand("verify", "Check the algebraic conditions on the coefficients");
  std::string m_list = "1,2,3";
  verify->add_option("--m-list", m_list, "comma-separated m values");

  // suite
  auto* suite = app.add_subcommand("suite", "Run a predefined experiment suite");
  std::string suite_name;
  bool full = false;
  std::string out_dir = "results";
  suite->add_option("name", suite_name, "suite name: paper (the default experiment set)")->required();
  suite->add_flag("--full", full, "100000-step Lotka-Volterra runs");
  suite->add_option("--out-dir", out_dir, "directory for CSV output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? h::kSuccess : h::kUsageError;
  }

  try {
    if (*run) {
      h::ExperimentConfig config;
      if (!config_file.empty()) h::load_config_file(config, config_file);
      if (*o_problem) config.problem = problem;
      if (*o_method) config.method = method;
      if (*o_m) config.m = m;
      if (*o_qs) config.quad_sigma = quad_sigma;
      if (*o_qv) config.quad_varsigma = quad_varsigma;
      if (*o_h) config.h = step;
      if (*o_steps) config.steps = steps;
      if (*o_tol) config.tol = tol;
      if (*o_out) config.output_path = out;
      const h::RunOutcome outcome = h::run(config);
      h::print_summary(std::cout, config, outcome.summary);
    } else if (*converge) {
      request.h_list = h::parse_double_list(h_list);
      if (*o_quad) request.quad = quad;
      const auto rows = h::convergence_study(request);
      h::print_convergence(std::cout, rows);
      if (!table_out.empty()) {
        std::ofstream file(table_out);
        if (!file) throw epcs::UsageError("cannot write " + table_out);
        h::write_convergence_csv(file, rows);
      }
    } else if (*verify) {
      const h::ConditionReport report = h::verify_conditions(h::parse_int_list(m_list));
      h::print_conditions(std::cout, report);
      if (!report.passed()) return h::kConditionFailure;
    } else if (*suite) {
      if (suite_name != "paper") throw epcs::UsageError("unknown suite '" + suite_name + "'");
      h::run_experiment_suite(out_dir, full, std::cout);
    }
  } catch (const epcs::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return h::kUsageError;
  } catch (const epcs::IntegrationError& e) {
    std::cerr << "integration failed: " << e.what() << "\n";
    return h::kIntegrationFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return h::kIntegrationFailure;
  }
  return h::kSuccess;
}
