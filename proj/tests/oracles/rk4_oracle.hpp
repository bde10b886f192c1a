#pragma once

// Test-only brute-force trajectory oracle: classical explicit RK4 starting at
// h = 1e-4, halved until two successive answers agree to 1e-10.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace oracle {

using Field = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

inline Eigen::VectorXd rk4_fixed(const Field& f, Eigen::VectorXd y, double t, long steps) {
  const double h = t / static_cast<double>(steps);
  for (long n = 0; n < steps; ++n) {
    const Eigen::VectorXd k1 = f(y);
    const Eigen::VectorXd k2 = f(y + 0.5 * h * k1);
    const Eigen::VectorXd k3 = f(y + 0.5 * h * k2);
    const Eigen::VectorXd k4 = f(y + h * k3);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return y;
}

inline Eigen::VectorXd rk4_oracle(const Field& f, const Eigen::VectorXd& y0, double t) {
  long steps = std::max(1L, std::lround(std::abs(t) / 1e-4));
  Eigen::VectorXd previous = rk4_fixed(f, y0, t, steps);
  for (int k = 0; k < 6; ++k) {
    steps *= 2;
    Eigen::VectorXd next = rk4_fixed(f, y0, t, steps);
    if ((next - previous).cwiseAbs().maxCoeff() <= 1e-10) return next;
    previous = next;
  }
  throw std::runtime_error("rk4 oracle did not settle");
}

}  // namespace oracle
