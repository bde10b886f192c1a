#pragma once

#include <functional>
#include <span>
#include <vector>

#include "epcs/legendre.hpp"
#include "epcs/quadrature.hpp"

namespace epcs {

/// Continuous Butcher coefficients of the order-2m energy-preserving family
///
///   A(tau, s, sigma) = sum_{i,j<m} P_i(s) P_j(s) I_i(tau) P_j(sigma)
///   B(s, sigma)      = sum_{j<m}   P_j(s) P_j(sigma)
///
/// where I_i(tau) = int_0^tau P_i. A factors as A_tilde(tau, s) B(s, sigma)
/// with A_tilde(tau, s) = sum_{i<m} P_i(s) I_i(tau).
class LegendreFamily {
 public:
  explicit LegendreFamily(int m);

  int m() const noexcept { return m_; }
  const PolynomialBasis& basis() const noexcept { return basis_; }

  double A(double tau, double s, double sigma) const;
  double B(double s, double sigma) const;
  double A_tilde(double tau, double s) const;
  /// d/dtau A(tau, s, sigma), in closed form (d/dtau I_i = P_i).
  double dA_dtau(double tau, double s, double sigma) const;

 private:
  int m_;
  PolynomialBasis basis_;
};

/// A coefficient triple (A, dA/dtau, B) given as plain functions, so the
/// condition checkers can be run against families other than LegendreFamily
/// (in particular deliberately broken controls).
struct CoefficientFunctions {
  std::function<double(double, double, double)> A;
  std::function<double(double, double, double)> dA_dtau;
  std::function<double(double, double)> B;
};

CoefficientFunctions as_functions(const LegendreFamily& family);

/// Cartesian sample grid for (tau, s, sigma).
struct SampleGrid {
  std::vector<double> tau;
  std::vector<double> varsigma;
  std::vector<double> sigma;

  /// n points per axis, uniform on [0,1] including both endpoints.
  static SampleGrid uniform(int per_axis = 11);
};

/// Energy condition residual: max |dA/dtau(tau,s,sigma) - dA/dtau(sigma,s,tau)|
/// + max |A(0,s,sigma)| + max |A(1,s,sigma) - B(s,sigma)| over the grid.
double check_energy_condition(const CoefficientFunctions& coeffs, const SampleGrid& grid);
double check_energy_condition(int m, const SampleGrid& grid = SampleGrid::uniform());

/// max |A(tau,s,sigma) + A(1-tau,1-s,1-sigma) - B(s,sigma)| over the grid.
double check_symmetry_condition(const CoefficientFunctions& coeffs, const SampleGrid& grid);
double check_symmetry_condition(int m, const SampleGrid& grid = SampleGrid::uniform());

/// Largest orders for which the simplifying assumptions B(xi), C(eta) and
/// D(zeta) of the partitioned reformulation (with C_tau = tau) hold.
struct SimplifyingAssumptions {
  int xi_B = 0;
  int eta_C = 0;
  int zeta_D = 0;
};

inline constexpr double kSimplifyingTolerance = 1e-11;

/// Integrals are taken with a product Gauss rule of `gauss_points` nodes per
/// axis; C is sampled at 11 values of tau and D on an 11x11 (s, sigma) grid.
/// Orders are searched up to `max_order`.
SimplifyingAssumptions check_simplifying_assumptions(const CoefficientFunctions& coeffs,
                                                     int gauss_points, int max_order);
/// For the Legendre family; expected (2m, m, m-1).
SimplifyingAssumptions check_simplifying_assumptions(int m);

/// max over node pairs of |A_tilde(c_i,c_j) + A_tilde(c_j,c_i) - 1|.
double check_casimir_condition_nodes(int m, const QuadratureRule& rule);

/// max over the 4-D grid points^4 of
///   |B(r,t) A(r,s,sg) + B(s,sg) A(s,r,t) - B(r,t) B(s,sg)|,
/// the quadratic-Casimir condition of the continuous method.
double casimir_condition_residual(const CoefficientFunctions& coeffs,
                                  std::span<const double> points);

/// int_0^1 int_0^1 A(tau, s, sigma) ds dsigma, evaluated by Gauss quadrature.
double stage_abscissa(const CoefficientFunctions& coeffs, double tau, int gauss_points);

}  // namespace epcs
