#include "epcs/elliptic.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace epcs {

namespace {

constexpr int kMaxAgmSteps = 32;

struct Agm {
  std::array<double, kMaxAgmSteps + 1> a{};
  std::array<double, kMaxAgmSteps + 1> c{};
  int steps = 0;
};

Agm run_agm(double parameter) {
  Agm agm;
  agm.a[0] = 1.0;
  agm.c[0] = std::sqrt(parameter);
  double b = std::sqrt(1.0 - parameter);
  const double eps = std::numeric_limits<double>::epsilon();
  int n = 0;
  while (std::abs(agm.c[n]) > eps && n < kMaxAgmSteps) {
    agm.a[n + 1] = 0.5 * (agm.a[n] + b);
    agm.c[n + 1] = 0.5 * (agm.a[n] - b);
    b = std::sqrt(agm.a[n] * b);
    ++n;
  }
  agm.steps = n;
  return agm;
}

}  // namespace

double complete_elliptic_k(double parameter) {
  if (!(parameter >= 0.0 && parameter < 1.0)) {
    throw std::domain_error("K(m) requires 0 <= m < 1");
  }
  const Agm agm = run_agm(parameter);
  return std::numbers::pi / (2.0 * agm.a[agm.steps]);
}

JacobiElliptic jacobi_elliptic(double u, double parameter) {
  if (!(parameter >= 0.0 && parameter <= 1.0)) {
    throw std::domain_error("Jacobi elliptic parameter must lie in [0,1]");
  }
  if (parameter == 0.0) return {std::sin(u), std::cos(u), 1.0};
  if (parameter == 1.0) {
    const double sech = 1.0 / std::cosh(u);
    return {std::tanh(u), sech, sech};
  }

  const Agm agm = run_agm(parameter);
  const int n = agm.steps;

  // sn, cn, dn have period 4K in u; reduce first so the amplitude stays small.
  const double quarter = std::numbers::pi / (2.0 * agm.a[n]);
  const double reduced = std::remainder(u, 4.0 * quarter);

  double phi = std::ldexp(agm.a[n] * reduced, n);
  for (int k = n; k >= 1; --k) {
    phi = 0.5 * (phi + std::asin(agm.c[k] / agm.a[k] * std::sin(phi)));
  }
  const double sn = std::sin(phi);
  const double cn = std::cos(phi);
  // dn > 0 for m < 1; the Landen form cn / cos(phi_1 - phi_0) is 0/0 at sn = +-1.
  const double dn = std::sqrt(1.0 - parameter * sn * sn);
  return {sn, cn, dn};
}

}  // namespace epcs
