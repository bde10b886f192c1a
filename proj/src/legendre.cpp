#include "epcs/legendre.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "epcs/errors.hpp"

namespace epcs {

double xi(int j) {
  if (j == 0) return -0.5;
  const double jj = static_cast<double>(j);
  return 1.0 / (2.0 * std::sqrt(4.0 * jj * jj - 1.0));
}

namespace {

// Classical Legendre L_0..L_{n-1} at t in [-1,1], written to out.
void legendre_table(double t, std::span<double> out) {
  if (out.empty()) return;
  out[0] = 1.0;
  if (out.size() == 1) return;
  out[1] = t;
  for (std::size_t k = 1; k + 1 < out.size(); ++k) {
    const double kk = static_cast<double>(k);
    out[k + 1] = ((2.0 * kk + 1.0) * t * out[k] - kk * out[k - 1]) / (kk + 1.0);
  }
}

}  // namespace

double shifted_legendre(int j, double x) {
  const double t = 2.0 * x - 1.0;
  double prev = 1.0;
  if (j == 0) return 1.0;
  double cur = t;
  for (int k = 1; k < j; ++k) {
    const double next = ((2.0 * k + 1.0) * t * cur - k * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return std::sqrt(2.0 * j + 1.0) * cur;
}

PolynomialBasis::PolynomialBasis(int max_degree) : max_degree_(max_degree) {
  if (max_degree < 0) throw DegreeOutOfRange("max_degree must be nonnegative");
}

void PolynomialBasis::check_degree(int j) const {
  if (j < 0 || j > max_degree_) {
    throw DegreeOutOfRange("Legendre degree " + std::to_string(j) +
                           " outside [0, " + std::to_string(max_degree_) + "]");
  }
}

double PolynomialBasis::eval(int j, double x) const {
  check_degree(j);
  return shifted_legendre(j, x);
}

double PolynomialBasis::antiderivative(int j, double tau) const {
  check_degree(j);
  const int lower = j == 0 ? 0 : j - 1;
  return xi(j + 1) * shifted_legendre(j + 1, tau) - xi(j) * shifted_legendre(lower, tau);
}

void PolynomialBasis::eval_all(double x, std::span<double> out) const {
  if (out.empty()) return;
  check_degree(static_cast<int>(out.size()) - 1);
  legendre_table(2.0 * x - 1.0, out);
  for (std::size_t j = 0; j < out.size(); ++j) out[j] *= std::sqrt(2.0 * j + 1.0);
}

void PolynomialBasis::antiderivative_all(double tau, std::span<double> out) const {
  if (out.empty()) return;
  check_degree(static_cast<int>(out.size()) - 1);
  std::vector<double> p(out.size() + 1);
  legendre_table(2.0 * tau - 1.0, p);
  for (std::size_t j = 0; j < p.size(); ++j) p[j] *= std::sqrt(2.0 * j + 1.0);
  for (std::size_t j = 0; j < out.size(); ++j) {
    const int jj = static_cast<int>(j);
    const double below = j == 0 ? p[0] : p[j - 1];
    out[j] = xi(jj + 1) * p[j + 1] - xi(jj) * below;
  }
}

}  // namespace epcs
