#pragma once

#include <span>

namespace epcs {

/// Coefficient of the integration identity for shifted Legendre polynomials:
///   int_0^tau P_j = xi(j+1) P_{j+1}(tau) - xi(j) P_{j-1}(tau)   (P_{-1} := P_0)
/// xi(0) = -1/2 and xi(j) = 1 / (2 sqrt(4 j^2 - 1)) otherwise.
double xi(int j);

/// Shifted, L2[0,1]-normalized Legendre polynomials
///   P_j(x) = sqrt(2j+1) L_j(2x - 1),
/// evaluated with the three-term recurrence of the classical L_j.
class PolynomialBasis {
 public:
  static constexpr int kDefaultMaxDegree = 16;

  explicit PolynomialBasis(int max_degree = kDefaultMaxDegree);

  int max_degree() const noexcept { return max_degree_; }

  /// P_j(x). Throws DegreeOutOfRange if j is negative or above max_degree().
  double eval(int j, double x) const;

  /// int_0^tau P_j(x) dx.
  double antiderivative(int j, double tau) const;

  /// Writes P_0(x), ..., P_{out.size()-1}(x). The span may not be longer
  /// than max_degree() + 1.
  void eval_all(double x, std::span<double> out) const;

  /// Writes int_0^tau P_j for j = 0 .. out.size()-1.
  void antiderivative_all(double tau, std::span<double> out) const;

 private:
  void check_degree(int j) const;

  int max_degree_;
};

/// Recurrence evaluation without a degree cap. Used by the basis and by
/// code that needs P_{max_degree+1} (the antiderivative).
double shifted_legendre(int j, double x);

}  // namespace epcs
