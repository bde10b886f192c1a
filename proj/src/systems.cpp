#include "epcs/systems.hpp"

#include <algorithm>
#include <cmath>

#include "epcs/elliptic.hpp"
#include "epcs/errors.hpp"

namespace epcs {

namespace {

bool all_positive(const Vector& y) { return (y.array() > 0.0).all(); }

void require_positive(const Vector& y, const char* system) {
  if (!all_positive(y)) {
    throw DomainError(std::string(system) + ": state has a non-positive component");
  }
}

constexpr double kEulerParameter = 0.51;

}  // namespace

PoissonSystem euler_rigid_body() {
  const double root = std::sqrt(1.51);
  const double alpha = 1.0 + 1.0 / root;
  const double beta = 1.0 - 0.51 / root;

  PoissonSystem sys;
  sys.name = "euler";
  sys.dim = 3;
  sys.structure = [alpha, beta](const Vector& y) {
    Matrix s(3, 3);
    s << 0.0, alpha * y(2), -beta * y(1),
        -alpha * y(2), 0.0, y(0),
        beta * y(1), -y(0), 0.0;
    return s;
  };
  sys.hamiltonian = [](const Vector& y) { return 0.5 * y.squaredNorm(); };
  sys.gradient = [](const Vector& y) -> Vector { return y; };
  sys.casimirs.push_back({"quadratic", [alpha, beta](const Vector& y) {
                            return 0.5 * (y(0) * y(0) + beta * y(1) * y(1) + alpha * y(2) * y(2));
                          }});
  sys.initial_state = Vector::Zero(3);
  sys.initial_state << 0.0, 1.0, 1.0;
  return sys;
}

PoissonSystem lotka_volterra_2d() {
  PoissonSystem sys;
  sys.name = "lv2";
  sys.dim = 2;
  sys.structure = [](const Vector& y) {
    const double uv = y(0) * y(1);
    Matrix s(2, 2);
    s << 0.0, -uv, uv, 0.0;
    return s;
  };
  sys.hamiltonian = [](const Vector& y) {
    require_positive(y, "lv2");
    return std::log(y(0)) - y(0) + 2.0 * std::log(y(1)) - y(1);
  };
  sys.gradient = [](const Vector& y) {
    require_positive(y, "lv2");
    Vector g(2);
    g << 1.0 / y(0) - 1.0, 2.0 / y(1) - 1.0;
    return g;
  };
  sys.domain_guard = all_positive;
  sys.initial_state = Vector::Ones(2);
  return sys;
}

PoissonSystem lotka_volterra_3d() {
  PoissonSystem sys;
  sys.name = "lv3";
  sys.dim = 3;
  sys.structure = [](const Vector& y) {
    const double a = 0.5 * y(0) * y(1);
    const double b = 0.5 * y(0) * y(2);
    const double c = y(1) * y(2);
    Matrix s(3, 3);
    s << 0.0, -a, b,
        a, 0.0, -c,
        -b, c, 0.0;
    return s;
  };
  sys.hamiltonian = [](const Vector& y) {
    require_positive(y, "lv3");
    return 2.0 * y(0) + y(1) + 2.0 * y(2) + std::log(y(1)) - 2.0 * std::log(y(2));
  };
  sys.gradient = [](const Vector& y) {
    require_positive(y, "lv3");
    Vector g(3);
    g << 2.0, 1.0 + 1.0 / y(1), 2.0 - 2.0 / y(2);
    return g;
  };
  sys.casimirs.push_back({"log", [](const Vector& y) {
                            require_positive(y, "lv3");
                            return 2.0 * std::log(y(0)) + std::log(y(1)) + std::log(y(2));
                          }});
  sys.domain_guard = all_positive;
  sys.initial_state = Vector::Zero(3);
  sys.initial_state << 1.0, 1.9, 0.5;
  return sys;
}

PoissonSystem canonical_oscillator() {
  PoissonSystem sys;
  sys.name = "canonical-oscillator";
  sys.dim = 2;
  sys.structure = [](const Vector&) {
    Matrix s(2, 2);
    s << 0.0, 1.0, -1.0, 0.0;
    return s;
  };
  sys.hamiltonian = [](const Vector& y) { return 0.5 * y.squaredNorm(); };
  sys.gradient = [](const Vector& y) -> Vector { return y; };
  sys.initial_state = Vector::Zero(2);
  sys.initial_state << 1.0, 0.0;
  return sys;
}

ReferenceSolution reference_solution_euler() {
  const double root = std::sqrt(1.51);
  return {[root](double t) {
            const JacobiElliptic e = jacobi_elliptic(t, kEulerParameter);
            Vector y(3);
            y << root * e.sn, e.cn, e.dn;
            return y;
          },
          1e-12};
}

ReferenceSolution reference_solution_oscillator(const Vector& y0) {
  return {[y0](double t) {
            const double c = std::cos(t);
            const double s = std::sin(t);
            Vector y(2);
            y << c * y0(0) + s * y0(1), -s * y0(0) + c * y0(1);
            return y;
          },
          1e-14};
}

std::vector<std::string> system_names() {
  return {"euler", "lv2", "lv3", "canonical-oscillator"};
}

PoissonSystem system_by_name(std::string_view name) {
  if (name == "euler") return euler_rigid_body();
  if (name == "lv2") return lotka_volterra_2d();
  if (name == "lv3") return lotka_volterra_3d();
  if (name == "canonical-oscillator") return canonical_oscillator();
  throw UsageError("unknown problem '" + std::string(name) + "'");
}

std::optional<ReferenceSolution> analytic_reference(std::string_view name) {
  if (name == "euler") return reference_solution_euler();
  if (name == "canonical-oscillator") {
    return reference_solution_oscillator(canonical_oscillator().initial_state);
  }
  return std::nullopt;
}

namespace {

Vector central_gradient(const std::function<double(const Vector&)>& f, const Vector& y,
                        double step) {
  Vector g(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    Vector plus = y;
    Vector minus = y;
    plus(i) += step;
    minus(i) -= step;
    g(i) = (f(plus) - f(minus)) / (2.0 * step);
  }
  return g;
}

// Fourth-order central stencil; the Casimir identity is checked at 1e-10,
// which the second-order stencil cannot resolve above round-off.
Vector five_point_gradient(const std::function<double(const Vector&)>& f, const Vector& y,
                           double step) {
  Vector g(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    auto at = [&](double offset) {
      Vector p = y;
      p(i) += offset;
      return f(p);
    };
    g(i) = (-at(2 * step) + 8 * at(step) - 8 * at(-step) + at(-2 * step)) / (12.0 * step);
  }
  return g;
}

}  // namespace

SystemDiagnostics check_system(const PoissonSystem& system, std::span<const Vector> samples) {
  SystemDiagnostics report;
  for (const Vector& y : samples) {
    const Matrix s = system.structure(y);
    report.skew_residual = std::max(report.skew_residual, (s + s.transpose()).cwiseAbs().maxCoeff());

    const Vector grad = system.gradient(y);
    const Vector fd = central_gradient(system.hamiltonian, y, 1e-6);
    const double scale = std::max(1.0, grad.cwiseAbs().maxCoeff());
    report.gradient_residual =
        std::max(report.gradient_residual, (fd - grad).cwiseAbs().maxCoeff() / scale);

    report.energy_rate = std::max(report.energy_rate, std::abs(grad.dot(s * grad)));

    for (const Casimir& c : system.casimirs) {
      const Vector dc = five_point_gradient(c.value, y, 1e-3);
      const Vector row = s.transpose() * dc;
      report.casimir_residual = std::max(report.casimir_residual, row.cwiseAbs().maxCoeff());
    }
  }
  return report;
}

}  // namespace epcs
