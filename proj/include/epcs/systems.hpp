#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "epcs/types.hpp"

namespace epcs {

struct Casimir {
  std::string name;
  std::function<double(const Vector&)> value;
};

/// y' = S(y) grad H(y) with S(y) skew-symmetric.
struct PoissonSystem {
  std::string name;
  int dim = 0;
  std::function<Matrix(const Vector&)> structure;
  std::function<double(const Vector&)> hamiltonian;
  std::function<Vector(const Vector&)> gradient;
  std::vector<Casimir> casimirs;
  /// Empty means every state is valid.
  std::function<bool(const Vector&)> domain_guard;
  Vector initial_state;

  bool is_valid(const Vector& y) const { return !domain_guard || domain_guard(y); }
  Vector vector_field(const Vector& y) const { return structure(y) * gradient(y); }
};

struct ReferenceSolution {
  std::function<Vector(double)> evaluate;
  /// Guaranteed max-norm error of evaluate().
  double accuracy = 0.0;
};

/// Free rigid body (Euler equations), H = |y|^2/2 and the quadratic Casimir
/// "quadratic" = (y1^2 + beta y2^2 + alpha y3^2)/2. y0 = (0, 1, 1).
PoissonSystem euler_rigid_body();

/// u' = u(v-2), v' = v(1-u); H = ln u - u + 2 ln v - v; y0 = (1, 1).
PoissonSystem lotka_volterra_2d();

/// Three-species Lotka-Volterra system with Casimir
/// "log" = 2 ln y1 + ln y2 + ln y3; y0 = (1.0, 1.9, 0.5).
PoissonSystem lotka_volterra_3d();

/// Harmonic oscillator with constant canonical structure S = [[0,1],[-1,0]],
/// H = (y1^2 + y2^2)/2, y0 = (1, 0).
PoissonSystem canonical_oscillator();

/// y(t) = (sqrt(1.51) sn(t|0.51), cn(t|0.51), dn(t|0.51)) for the Euler
/// system started at its default y0.
ReferenceSolution reference_solution_euler();

/// Exact rotation for the canonical oscillator from an arbitrary y0.
ReferenceSolution reference_solution_oscillator(const Vector& y0);

/// Registered names: "euler", "lv2", "lv3", "canonical-oscillator".
std::vector<std::string> system_names();
/// Throws UsageError for unknown names.
PoissonSystem system_by_name(std::string_view name);
/// Analytic reference for the system's default initial state, if one exists.
std::optional<ReferenceSolution> analytic_reference(std::string_view name);

struct SystemDiagnostics {
  /// max ||S + S^T||_max
  double skew_residual = 0.0;
  /// max ||fd grad H - grad H||_max / max(1, ||grad H||_max), step 1e-6.
  double gradient_residual = 0.0;
  /// max ||fd grad C^T S||_max over all Casimirs.
  double casimir_residual = 0.0;
  /// max |grad H^T S grad H|
  double energy_rate = 0.0;
};

SystemDiagnostics check_system(const PoissonSystem& system, std::span<const Vector> samples);

}  // namespace epcs
