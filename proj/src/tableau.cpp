#include "epcs/tableau.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace epcs {

namespace {

constexpr std::size_t kMaxStackDegree = 64;

struct Values {
  std::array<double, kMaxStackDegree> v{};
};

}  // namespace

LegendreFamily::LegendreFamily(int m)
    : m_(m), basis_(std::max(m, PolynomialBasis::kDefaultMaxDegree)) {
  if (m < 1) throw std::invalid_argument("method parameter m must be >= 1");
  if (static_cast<std::size_t>(m) > kMaxStackDegree) {
    throw std::invalid_argument("method parameter m too large");
  }
}

double LegendreFamily::B(double s, double sigma) const {
  Values ps, pg;
  basis_.eval_all(s, std::span(ps.v.data(), m_));
  basis_.eval_all(sigma, std::span(pg.v.data(), m_));
  double sum = 0.0;
  for (int j = 0; j < m_; ++j) sum += ps.v[j] * pg.v[j];
  return sum;
}

double LegendreFamily::A_tilde(double tau, double s) const {
  Values ps, it;
  basis_.eval_all(s, std::span(ps.v.data(), m_));
  basis_.antiderivative_all(tau, std::span(it.v.data(), m_));
  double sum = 0.0;
  for (int i = 0; i < m_; ++i) sum += ps.v[i] * it.v[i];
  return sum;
}

double LegendreFamily::A(double tau, double s, double sigma) const {
  Values ps, it, pg;
  basis_.eval_all(s, std::span(ps.v.data(), m_));
  basis_.antiderivative_all(tau, std::span(it.v.data(), m_));
  basis_.eval_all(sigma, std::span(pg.v.data(), m_));
  double sum = 0.0;
  for (int i = 0; i < m_; ++i) {
    for (int j = 0; j < m_; ++j) sum += ps.v[i] * ps.v[j] * it.v[i] * pg.v[j];
  }
  return sum;
}

double LegendreFamily::dA_dtau(double tau, double s, double sigma) const {
  Values ps, pt, pg;
  basis_.eval_all(s, std::span(ps.v.data(), m_));
  basis_.eval_all(tau, std::span(pt.v.data(), m_));
  basis_.eval_all(sigma, std::span(pg.v.data(), m_));
  double sum = 0.0;
  for (int i = 0; i < m_; ++i) {
    for (int j = 0; j < m_; ++j) sum += ps.v[i] * ps.v[j] * pt.v[i] * pg.v[j];
  }
  return sum;
}

CoefficientFunctions as_functions(const LegendreFamily& family) {
  return {
      [family](double t, double s, double g) { return family.A(t, s, g); },
      [family](double t, double s, double g) { return family.dA_dtau(t, s, g); },
      [family](double s, double g) { return family.B(s, g); },
  };
}

SampleGrid SampleGrid::uniform(int per_axis) {
  if (per_axis < 2) throw std::invalid_argument("uniform grid needs at least 2 points per axis");
  std::vector<double> axis(per_axis);
  for (int i = 0; i < per_axis; ++i) axis[i] = static_cast<double>(i) / (per_axis - 1);
  return {axis, axis, axis};
}

double check_energy_condition(const CoefficientFunctions& coeffs, const SampleGrid& grid) {
  double derivative = 0.0;
  for (double t : grid.tau) {
    for (double s : grid.varsigma) {
      for (double g : grid.sigma) {
        derivative = std::max(derivative, std::abs(coeffs.dA_dtau(t, s, g) - coeffs.dA_dtau(g, s, t)));
      }
    }
  }
  double at_zero = 0.0;
  double at_one = 0.0;
  for (double s : grid.varsigma) {
    for (double g : grid.sigma) {
      at_zero = std::max(at_zero, std::abs(coeffs.A(0.0, s, g)));
      at_one = std::max(at_one, std::abs(coeffs.A(1.0, s, g) - coeffs.B(s, g)));
    }
  }
  return derivative + at_zero + at_one;
}

double check_energy_condition(int m, const SampleGrid& grid) {
  return check_energy_condition(as_functions(LegendreFamily(m)), grid);
}

double check_symmetry_condition(const CoefficientFunctions& coeffs, const SampleGrid& grid) {
  double residual = 0.0;
  for (double t : grid.tau) {
    for (double s : grid.varsigma) {
      for (double g : grid.sigma) {
        const double r = coeffs.A(t, s, g) + coeffs.A(1.0 - t, 1.0 - s, 1.0 - g) - coeffs.B(s, g);
        residual = std::max(residual, std::abs(r));
      }
    }
  }
  return residual;
}

double check_symmetry_condition(int m, const SampleGrid& grid) {
  return check_symmetry_condition(as_functions(LegendreFamily(m)), grid);
}

namespace {

// Largest q <= max_order such that holds(q') for every q' <= q.
template <class Holds>
int largest_order(int max_order, Holds&& holds) {
  int order = 0;
  for (int q = 1; q <= max_order; ++q) {
    if (!holds(q)) break;
    order = q;
  }
  return order;
}

}  // namespace

SimplifyingAssumptions check_simplifying_assumptions(const CoefficientFunctions& coeffs,
                                                     int gauss_points, int max_order) {
  const QuadratureRule rule = gauss_rule(gauss_points);
  const auto x = rule.nodes();
  const auto w = rule.weights();
  const std::size_t n = x.size();
  const std::vector<double> samples = SampleGrid::uniform(11).tau;

  // B(xi): int int B(rho,tau) tau^{k-1} rho^l drho dtau = 1/(k+l).
  auto b_holds = [&](int q) {
    for (int k = 1; k <= q; ++k) {
      const int l = q - k;
      double integral = 0.0;
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
          integral += w[a] * w[b] * coeffs.B(x[a], x[b]) * std::pow(x[b], k - 1) * std::pow(x[a], l);
        }
      }
      if (std::abs(integral - 1.0 / q) > kSimplifyingTolerance) return false;
    }
    return true;
  };

  // C(eta): int int A(tau,s,sigma) sigma^{k-1} s^l ds dsigma = tau^{k+l}/(k+l).
  auto c_holds = [&](int q) {
    for (double tau : samples) {
      for (int k = 1; k <= q; ++k) {
        const int l = q - k;
        double integral = 0.0;
        for (std::size_t a = 0; a < n; ++a) {
          for (std::size_t b = 0; b < n; ++b) {
            integral += w[a] * w[b] * coeffs.A(tau, x[a], x[b]) * std::pow(x[b], k - 1) *
                        std::pow(x[a], l);
          }
        }
        if (std::abs(integral - std::pow(tau, q) / q) > kSimplifyingTolerance) return false;
      }
    }
    return true;
  };

  // D(zeta): int int B(rho,tau) tau^{k+l-1} A(tau,s,sigma) drho dtau
  //          = B(s,sigma) (1 - s^{k+l}) / (k+l).
  // Only k+l enters, so one check per q.
  auto d_holds = [&](int q) {
    for (double s : samples) {
      for (double sigma : samples) {
        double integral = 0.0;
        for (std::size_t a = 0; a < n; ++a) {
          for (std::size_t b = 0; b < n; ++b) {
            integral += w[a] * w[b] * coeffs.B(x[a], x[b]) * std::pow(x[b], q - 1) *
                        coeffs.A(x[b], s, sigma);
          }
        }
        const double expected = coeffs.B(s, sigma) * (1.0 - std::pow(s, q)) / q;
        if (std::abs(integral - expected) > kSimplifyingTolerance) return false;
      }
    }
    return true;
  };

  return {largest_order(max_order, b_holds), largest_order(max_order, c_holds),
          largest_order(max_order, d_holds)};
}

SimplifyingAssumptions check_simplifying_assumptions(int m) {
  // All integrands are polynomials of degree <= 4m in each variable for
  // orders up to 2m+2, so 2m+6 Gauss points integrate them exactly.
  const int points = std::min(2 * m + 6, kMaxGaussPoints);
  return check_simplifying_assumptions(as_functions(LegendreFamily(m)), points, 2 * m + 2);
}

double check_casimir_condition_nodes(int m, const QuadratureRule& rule) {
  const LegendreFamily family(m);
  double residual = 0.0;
  for (double ci : rule.nodes()) {
    for (double cj : rule.nodes()) {
      residual = std::max(residual, std::abs(family.A_tilde(ci, cj) + family.A_tilde(cj, ci) - 1.0));
    }
  }
  return residual;
}

double casimir_condition_residual(const CoefficientFunctions& coeffs,
                                  std::span<const double> points) {
  double residual = 0.0;
  for (double r : points) {
    for (double t : points) {
      const double brt = coeffs.B(r, t);
      for (double s : points) {
        for (double g : points) {
          const double bsg = coeffs.B(s, g);
          const double lhs = brt * coeffs.A(r, s, g) + bsg * coeffs.A(s, r, t);
          residual = std::max(residual, std::abs(lhs - brt * bsg));
        }
      }
    }
  }
  return residual;
}

double stage_abscissa(const CoefficientFunctions& coeffs, double tau, int gauss_points) {
  const QuadratureRule rule = gauss_rule(gauss_points);
  const auto x = rule.nodes();
  const auto w = rule.weights();
  double integral = 0.0;
  for (std::size_t a = 0; a < x.size(); ++a) {
    for (std::size_t b = 0; b < x.size(); ++b) integral += w[a] * w[b] * coeffs.A(tau, x[a], x[b]);
  }
  return integral;
}

}  // namespace epcs
