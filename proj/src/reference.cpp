#include "epcs/reference.hpp"

#include <cmath>
#include <stdexcept>

namespace epcs {

namespace {

Vector rk4(const PoissonSystem& system, Vector y, double t_end, long steps) {
  const double h = t_end / static_cast<double>(steps);
  for (long n = 0; n < steps; ++n) {
    const Vector k1 = system.vector_field(y);
    const Vector k2 = system.vector_field(y + 0.5 * h * k1);
    const Vector k3 = system.vector_field(y + 0.5 * h * k2);
    const Vector k4 = system.vector_field(y + h * k3);
    y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return y;
}

}  // namespace

Vector rk4_reference(const PoissonSystem& system, const Vector& y0, double t_end,
                     double agreement) {
  if (t_end == 0.0) return y0;
  long steps = std::max(1L, std::lround(std::abs(t_end) / 1e-4));
  Vector previous = rk4(system, y0, t_end, steps);
  for (int halving = 0; halving < 8; ++halving) {
    steps *= 2;
    Vector next = rk4(system, y0, t_end, steps);
    if ((next - previous).cwiseAbs().maxCoeff() <= agreement) return next;
    previous = std::move(next);
  }
  throw std::runtime_error("RK4 reference did not settle to the requested agreement");
}

}  // namespace epcs
