#include <doctest.h>

#include <cmath>
#include <numeric>

#include "epcs/errors.hpp"
#include "epcs/integrator.hpp"
#include "oracles/rk4_oracle.hpp"
#include "support/fit.hpp"

using epcs::gauss_rule;
using epcs::Matrix;
using epcs::MethodSpec;
using epcs::PoissonSystem;
using epcs::Vector;

namespace {

MethodSpec gauss_spec(int m, int sigma_points, int varsigma_points) {
  MethodSpec spec;
  spec.m = m;
  spec.sigma_rule = gauss_rule(sigma_points);
  spec.varsigma_rule = gauss_rule(varsigma_points);
  return spec;
}

double max_abs(const std::vector<double>& v) {
  double worst = 0.0;
  for (double x : v) worst = std::max(worst, std::abs(x));
  return worst;
}

Vector explicit_euler(const PoissonSystem& sys, const Vector& y, double h) {
  return y + h * sys.vector_field(y);
}

}  // namespace

TEST_CASE("MethodSpec validation") {
  CHECK_NOTHROW(gauss_spec(2, 2, 1).validate());
  CHECK_THROWS_AS(gauss_spec(2, 1, 2).validate(), std::invalid_argument);
  MethodSpec bad = gauss_spec(1, 2, 2);
  bad.m = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = gauss_spec(1, 2, 2);
  bad.solver_tol = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK_THROWS_AS(epcs::EnhancedStepper(gauss_spec(3, 2, 2)), std::invalid_argument);
}

TEST_CASE("enhanced step, m = 1: energy preserved on the Euler problem") {
  const auto sys = epcs::euler_rigid_body();
  const Vector y0 = sys.initial_state;
  const auto result = epcs::step_enhanced_cs(sys, gauss_spec(1, 2, 2), y0, 0.1);
  CHECK(result.stage.converged);
  CHECK(result.stage.iterations > 1);
  CHECK(std::abs(sys.hamiltonian(result.y1) - sys.hamiltonian(y0)) < 1e-13);
}

TEST_CASE("stage polynomial joins y0 and y1") {
  const auto sys = epcs::lotka_volterra_3d();
  const Vector y0 = sys.initial_state;
  for (int m = 1; m <= 3; ++m) {
    const auto result = epcs::step_enhanced_cs(sys, gauss_spec(m, 6, 6), y0, 0.05);
    REQUIRE(result.stage.w.size() == static_cast<std::size_t>(m));
    CHECK((epcs::stage_value(result.stage, y0, 0.05, 0.0) - y0).cwiseAbs().maxCoeff() == 0.0);
    CHECK((epcs::stage_value(result.stage, y0, 0.05, 1.0) - result.y1).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((result.y1 - (y0 + 0.05 * result.stage.w[0])).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("consistency: y1 = y0 + h f(y0) + O(h^2)") {
  const auto sys = epcs::lotka_volterra_3d();
  const Vector y0 = sys.initial_state;
  const Vector f0 = sys.vector_field(y0);
  for (int m : {1, 2}) {
    double previous = 0.0;
    for (double h : {0.04, 0.02, 0.01, 0.005}) {
      const Vector y1 = epcs::step_enhanced_cs(sys, gauss_spec(m, 6, 6), y0, h).y1;
      const double defect = (y1 - y0 - h * f0).cwiseAbs().maxCoeff();
      if (previous > 0.0) CHECK(previous / defect == doctest::Approx(4.0).epsilon(0.1));
      previous = defect;
    }
  }
}

TEST_CASE("order 4 for m = 2 against the RK4 oracle") {
  const auto sys = epcs::euler_rigid_body();
  const Vector y0 = sys.initial_state;
  const oracle::Field f = [&](const Vector& y) { return sys.vector_field(y); };
  const epcs::EnhancedStepper stepper(gauss_spec(2, 2, 2));

  // Fixed interval [0, 1]: global error ~ C h^4.
  auto global_error = [&](double h, int steps) {
    Vector y = y0;
    for (int n = 0; n < steps; ++n) y = stepper.step(sys, y, h).y1;
    return (y - oracle::rk4_oracle(f, y0, h * steps)).cwiseAbs().maxCoeff();
  };
  const double e1 = global_error(0.1, 10);
  const double e2 = global_error(0.05, 20);
  CHECK(e1 / e2 > 12.0);
  CHECK(e1 / e2 < 20.0);
  // 10 steps at h = 0.1 stay within C h^4 with C from the Richardson pair.
  const double c = e2 / std::pow(0.05, 4);
  CHECK(e1 <= 1.5 * c * std::pow(0.1, 4));

  // Single step: local error ~ C h^5.
  auto local_error = [&](double h) {
    return (stepper.step(sys, y0, h).y1 - oracle::rk4_oracle(f, y0, h)).cwiseAbs().maxCoeff();
  };
  const double ratio = local_error(0.1) / local_error(0.05);
  CHECK(ratio > 28.0);
  CHECK(ratio < 36.0);
}

TEST_CASE("Cohen-Hairer step matches enhanced m = 1 when S is constant") {
  const auto sys = epcs::canonical_oscillator();
  const auto spec = gauss_spec(1, 2, 2);
  Vector y = sys.initial_state;
  for (int n = 0; n < 20; ++n) {
    const Vector a = epcs::step_enhanced_cs(sys, spec, y, 0.1).y1;
    const Vector b = epcs::step_cohen_hairer(sys, spec.sigma_rule, y, 0.1).y1;
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-13);
    y = a;
  }
}

TEST_CASE("Cohen-Hairer step: energy and symmetry on the Euler problem") {
  const auto sys = epcs::euler_rigid_body();
  const Vector y0 = sys.initial_state;
  const auto rule = gauss_rule(2);
  const auto forward = epcs::step_cohen_hairer(sys, rule, y0, 0.1);
  CHECK(std::abs(sys.hamiltonian(forward.y1) - sys.hamiltonian(y0)) < 1e-13);
  const double roundtrip = epcs::adjoint_roundtrip(
      [&](const Vector& y, double h) { return epcs::step_cohen_hairer(sys, rule, y, h).y1; }, y0, 0.1);
  CHECK(roundtrip <= 10 * 1e-14);
}

TEST_CASE("adjoint_roundtrip") {
  const auto sys = epcs::euler_rigid_body();
  const Vector y0 = sys.initial_state;
  CHECK(epcs::adjoint_roundtrip(sys, gauss_spec(1, 2, 2), y0, 0.1) <= 1e-13);
  CHECK(epcs::adjoint_roundtrip(sys, gauss_spec(2, 2, 2), y0, 0.1) <= 1e-13);
  const double control = epcs::adjoint_roundtrip(
      [&](const Vector& y, double h) { return explicit_euler(sys, y, h); }, y0, 0.1);
  CHECK(control > 1e-4);
}

TEST_CASE("discrete energy exactness per step for quadratic H") {
  const auto sys = epcs::euler_rigid_body();
  for (int m : {1, 2}) {
    const epcs::EnhancedStepper stepper(gauss_spec(m, 2, 2));
    Vector y = sys.initial_state;
    for (int n = 0; n < 50; ++n) {
      const Vector next = stepper.step(sys, y, 0.1).y1;
      CHECK(std::abs(sys.hamiltonian(next) - sys.hamiltonian(y)) <= 1e-12);
      y = next;
    }
  }
}

TEST_CASE("the structure-side rule changes y1 but not the energy") {
  const auto sys = epcs::euler_rigid_body();
  Vector y0(3);
  y0 << 0.3, 0.8, 0.6;
  const Vector a = epcs::step_enhanced_cs(sys, gauss_spec(2, 2, 1), y0, 0.2).y1;
  const Vector b = epcs::step_enhanced_cs(sys, gauss_spec(2, 2, 6), y0, 0.2).y1;
  CHECK((a - b).cwiseAbs().maxCoeff() > 1e-8);
  CHECK(std::abs(sys.hamiltonian(a) - sys.hamiltonian(y0)) <= 1e-12);
  CHECK(std::abs(sys.hamiltonian(b) - sys.hamiltonian(y0)) <= 1e-12);
}

TEST_CASE("constant S: m = 1 is the implicit midpoint / AVF step, m = 2 the (2,2) Pade propagator") {
  const auto sys = epcs::canonical_oscillator();
  const Matrix s = sys.structure(sys.initial_state);
  const Matrix identity = Matrix::Identity(2, 2);
  const double h = 0.1;
  const Matrix z = h * s;
  const Matrix midpoint = (identity - 0.5 * z).inverse() * (identity + 0.5 * z);
  const Matrix pade = (identity - 0.5 * z + z * z / 12.0).inverse() * (identity + 0.5 * z + z * z / 12.0);

  Vector y = sys.initial_state;
  for (int n = 0; n < 100; ++n) {
    const Vector next = epcs::step_enhanced_cs(sys, gauss_spec(1, 2, 2), y, h).y1;
    CHECK((next - midpoint * y).cwiseAbs().maxCoeff() < 1e-13);
    y = next;
  }
  y = sys.initial_state;
  for (int n = 0; n < 100; ++n) {
    const Vector next = epcs::step_enhanced_cs(sys, gauss_spec(2, 2, 3), y, h).y1;
    CHECK((next - pade * y).cwiseAbs().maxCoeff() < 1e-13);
    y = next;
  }
}

TEST_CASE("convergence orders on the Euler problem") {
  const auto sys = epcs::euler_rigid_body();
  const auto ref = epcs::reference_solution_euler();
  for (int m : {1, 2}) {
    const epcs::EnhancedStepper stepper(gauss_spec(m, 2, 2));
    std::vector<double> errors;
    for (double h : {0.2, 0.1, 0.05, 0.025}) {
      Vector y = sys.initial_state;
      const int steps = static_cast<int>(std::lround(1.0 / h));
      for (int n = 0; n < steps; ++n) y = stepper.step(sys, y, h).y1;
      errors.push_back((y - ref.evaluate(1.0)).cwiseAbs().maxCoeff());
    }
    for (std::size_t i = 1; i < errors.size(); ++i) {
      const double order = std::log2(errors[i - 1] / errors[i]);
      CHECK(order >= 2.0 * m - 0.2);
      CHECK(order <= 2.0 * m + 0.2);
    }
  }
}

TEST_CASE("quadratic Casimir preserved with Gauss structure rules of m-1 and m points") {
  const auto sys = epcs::euler_rigid_body();
  const auto& casimir = sys.casimirs[0].value;
  for (int m : {1, 2, 3}) {
    for (int s : {m - 1, m}) {
      if (s < 1) continue;
      const epcs::EnhancedStepper stepper(gauss_spec(m, std::max(m, 2), s));
      Vector y = sys.initial_state;
      for (int n = 0; n < 50; ++n) {
        const Vector next = stepper.step(sys, y, 0.1).y1;
        CHECK(std::abs(casimir(next) - casimir(y)) <= 1e-12);
        y = next;
      }
    }
  }
  // Three structure nodes for m = 2 break the node identity and the Casimir drifts.
  const epcs::EnhancedStepper stepper(gauss_spec(2, 2, 3));
  Vector y = sys.initial_state;
  for (int n = 0; n < 50; ++n) y = stepper.step(sys, y, 0.1).y1;
  CHECK(std::abs(casimir(y) - casimir(sys.initial_state)) > 1e-10);
}

TEST_CASE("linear Casimirs are preserved without extra conditions") {
  // S(y) v = phi(y) d x v has d^T S(y) = 0, so d^T y is a Casimir.
  const Eigen::Vector3d d(1.0, -2.0, 0.5);
  PoissonSystem sys;
  sys.name = "linear-casimir";
  sys.dim = 3;
  sys.structure = [d](const Vector& y) {
    const double phi = 1.0 + 0.3 * y(0) * y(0);
    Matrix cross(3, 3);
    cross << 0, -d(2), d(1), d(2), 0, -d(0), -d(1), d(0), 0;
    return Matrix(phi * cross);
  };
  sys.hamiltonian = [](const Vector& y) {
    return 0.25 * std::pow(y(0), 4) + std::cos(y(1)) + y(2) * y(2);
  };
  sys.gradient = [](const Vector& y) {
    Vector g(3);
    g << std::pow(y(0), 3), -std::sin(y(1)), 2 * y(2);
    return g;
  };
  Vector y0(3);
  y0 << 0.4, 0.7, -0.3;
  const double c0 = d.dot(y0);
  const auto record = epcs::integrate(sys, epcs::Method::enhanced, gauss_spec(2, 4, 3), y0, 0.05, 200);
  for (const Vector& y : record.states) CHECK(std::abs(d.dot(y) - c0) < 1e-12);
  CHECK(max_abs(record.energy_error) < 1e-12);
}

TEST_CASE("integrate: record layout and warm starts") {
  const auto sys = epcs::euler_rigid_body();
  const auto ref = epcs::reference_solution_euler();
  const auto record = epcs::integrate(sys, epcs::Method::enhanced, gauss_spec(2, 2, 2),
                                      sys.initial_state, 0.1, 25, &ref);
  CHECK(record.size() == 26);
  CHECK(record.states.size() == 26);
  CHECK(record.energy_error.size() == 26);
  REQUIRE(record.casimir_errors.size() == 1);
  CHECK(record.casimir_names[0] == "quadratic");
  CHECK(record.casimir_errors[0].size() == 26);
  REQUIRE(record.global_error.has_value());
  CHECK(record.global_error->size() == 26);
  CHECK(record.global_error->front() == 0.0);
  CHECK(record.iterations.front() == 0);
  CHECK(std::abs(record.times.back() - 2.5) < 1e-15);

  // Warm-started steps need fewer iterations than the first.
  const double later = std::accumulate(record.iterations.begin() + 2, record.iterations.end(), 0.0) /
                       static_cast<double>(record.size() - 2);
  CHECK(later < record.iterations[1]);

  const auto baseline = epcs::integrate(sys, epcs::Method::cohen_hairer, gauss_spec(1, 2, 2),
                                        sys.initial_state, 0.1, 25);
  CHECK_FALSE(baseline.global_error.has_value());
  CHECK(max_abs(baseline.energy_error) < 1e-13);
}

TEST_CASE("long Euler runs keep both invariants") {
  const auto sys = epcs::euler_rigid_body();
  for (int m : {1, 2}) {
    const auto record = epcs::integrate(sys, epcs::Method::enhanced, gauss_spec(m, 2, 2),
                                        sys.initial_state, 0.1, 10000);
    CHECK(max_abs(record.energy_error) <= 1e-10);
    CHECK(max_abs(record.casimir_errors[0]) <= 1e-10);
  }
}

TEST_CASE("global error grows linearly on the Euler problem") {
  const auto sys = epcs::euler_rigid_body();
  const auto ref = epcs::reference_solution_euler();
  for (int m : {1, 2}) {
    const auto record = epcs::integrate(sys, epcs::Method::enhanced, gauss_spec(m, 2, 2),
                                        sys.initial_state, 0.1, 10000, &ref);
    const auto fit = support::fit_line(record.times, support::envelope(*record.global_error));
    CHECK(fit.slope > 0.0);
    CHECK(fit.r_squared >= 0.9);
  }
}

TEST_CASE("stage values outside the domain raise DomainError") {
  const auto sys = epcs::lotka_volterra_2d();
  Vector y0(2);
  y0 << 1.0, 0.01;
  CHECK_THROWS_AS(epcs::step_enhanced_cs(sys, gauss_spec(1, 4, 4), y0, 1.0), epcs::DomainError);
  Vector bad(2);
  bad << -1.0, 1.0;
  CHECK_THROWS_AS(epcs::step_enhanced_cs(sys, gauss_spec(1, 4, 4), bad, 0.01), epcs::DomainError);
  CHECK_THROWS_AS(epcs::step_cohen_hairer(sys, gauss_rule(4), y0, 1.0), epcs::DomainError);
}

TEST_CASE("non-convergence raises ConvergenceError with the last residual") {
  const auto sys = epcs::lotka_volterra_3d();
  auto spec = gauss_spec(2, 6, 6);
  spec.max_iters = 2;
  try {
    epcs::step_enhanced_cs(sys, spec, sys.initial_state, 0.1);
    FAIL("expected ConvergenceError");
  } catch (const epcs::ConvergenceError& e) {
    CHECK(e.iterations() == 2);
    CHECK(e.residual() > 0.0);
  }
  CHECK_THROWS_AS(epcs::step_enhanced_cs(sys, gauss_spec(1, 2, 2), sys.initial_state, 0.0),
                  std::invalid_argument);
}

TEST_CASE("a bounded but non-contracting iteration is abandoned as stalled") {
  // Bounded gradient, so a huge step keeps the iterates finite without converging.
  auto sys = epcs::canonical_oscillator();
  sys.hamiltonian = [](const Vector& y) { return std::cos(y(0)) + std::cos(y(1)); };
  sys.gradient = [](const Vector& y) {
    Vector g(2);
    g << -std::sin(y(0)), -std::sin(y(1));
    return g;
  };
  auto spec = gauss_spec(2, 4, 4);
  spec.max_iters = 10000;
  Vector y0(2);
  y0 << 0.3, 1.1;
  try {
    epcs::step_enhanced_cs(sys, spec, y0, 10.0);
    FAIL("expected ConvergenceError");
  } catch (const epcs::ConvergenceError& e) {
    CHECK(e.iterations() < 200);
    CHECK(std::string(e.what()).find("stalled") != std::string::npos);
  }
}

TEST_CASE("integrate reports the failing step index") {
  // Clockwise rotation from (1, 0): y_1 = cos t turns negative inside step 16 at h = 0.1.
  auto sys = epcs::canonical_oscillator();
  sys.domain_guard = [](const Vector& y) { return y(0) > 0.0; };
  try {
    epcs::integrate(sys, epcs::Method::enhanced, gauss_spec(1, 2, 2), sys.initial_state, 0.1, 100);
    FAIL("expected IntegrationError");
  } catch (const epcs::IntegrationError& e) {
    CHECK(e.step() == 16);
    CHECK(std::string(e.what()).find("step 16") != std::string::npos);
  }
}
