#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "epcs/quadrature.hpp"
#include "epcs/systems.hpp"
#include "epcs/types.hpp"

namespace epcs {

struct SolverSettings {
  /// Iteration stops once the max-norm change of the unknowns is at most
  /// tol * (1 + ||y0||_max).
  double tol = 1e-14;
  int max_iters = 200;
};

/// Consecutive non-improving iterations after which the solve is abandoned.
inline constexpr int kStallWindow = 25;

/// Discretization of the enhanced continuous-stage method of order 2m: the
/// sigma-integral (gradient side) and the s-integral (structure side) are each
/// replaced by a quadrature rule.
struct MethodSpec {
  int m = 1;
  QuadratureRule sigma_rule = gauss_rule(2);
  QuadratureRule varsigma_rule = gauss_rule(2);
  double solver_tol = 1e-14;
  int max_iters = 200;

  SolverSettings solver() const { return {solver_tol, max_iters}; }
  /// Throws std::invalid_argument. The sigma rule needs at least m nodes.
  void validate() const;
};

/// Spectral stage coefficients: Y_tau = y0 + h sum_i I_i(tau) w_i, where
/// I_i(tau) = int_0^tau P_i. In particular y1 = Y_1 = y0 + h w_0.
struct StageSolution {
  std::vector<Vector> w;
  int iterations = 0;
  bool converged = false;
};

struct StepResult {
  Vector y1;
  StageSolution stage;
};

/// Y_tau from a solved stage.
Vector stage_value(const StageSolution& stage, const Vector& y0, double h, double tau);

/// One step of the enhanced method. Quadrature tables are built once at
/// construction; step() is const and may be called concurrently.
class EnhancedStepper {
 public:
  explicit EnhancedStepper(MethodSpec spec);

  const MethodSpec& spec() const noexcept { return spec_; }

  /// Solves for W = (w_0, ..., w_{m-1}) by fixed-point iteration
  ///   w_i <- sum_j M_ij G_j,
  ///   M_ij = sum_k b_k P_i(c_k) P_j(c_k) S(Y_{c_k}),
  ///   G_j  = sum_l b_l P_j(d_l) grad H(Y_{d_l}),
  /// starting from `warm_start` when given, else from w_0 = S(y0) grad H(y0).
  /// Throws DomainError when a stage value violates the system's domain guard
  /// and ConvergenceError when the iteration stalls or runs out of iterations.
  StepResult step(const PoissonSystem& system, const Vector& y0, double h,
                  const StageSolution* warm_start = nullptr) const;

 private:
  MethodSpec spec_;
  Matrix varsigma_antiderivatives_;  // (s_c x m): I_i(c_k)
  Matrix sigma_antiderivatives_;     // (s_d x m): I_i(d_l)
  Matrix sigma_projection_;          // (s_d x m): b_l P_j(d_l)
  std::vector<Matrix> structure_weights_;  // per c_k, (m x m): b_k P_i(c_k) P_j(c_k)
};

StepResult step_enhanced_cs(const PoissonSystem& system, const MethodSpec& spec, const Vector& y0,
                            double h);

/// y1 = y0 + h S((y0+y1)/2) sum_l b_l grad H(y0 + d_l (y1 - y0)), solved by
/// fixed-point iteration on v = (y1 - y0)/h. The returned stage holds w_0 = v.
StepResult step_cohen_hairer(const PoissonSystem& system, const QuadratureRule& sigma_rule,
                             const Vector& y0, double h, SolverSettings settings = {},
                             const Vector* warm_start = nullptr);

enum class Method { enhanced, cohen_hairer };

struct RunRecord {
  std::vector<double> times;
  std::vector<Vector> states;
  /// H(y_n) - H(y_0)
  std::vector<double> energy_error;
  std::vector<std::string> casimir_names;
  /// casimir_errors[c][n] = C_c(y_n) - C_c(y_0)
  std::vector<std::vector<double>> casimir_errors;
  /// ||y_n - y_ref(t_n)||_max when a reference was supplied.
  std::optional<std::vector<double>> global_error;
  /// Fixed-point iterations per step; 0 for the initial state.
  std::vector<int> iterations;

  std::size_t size() const noexcept { return times.size(); }
};

/// Fixed-step integration from t = 0. The enhanced method warm-starts each
/// solve from the previous step's stage coefficients. Step failures are
/// rethrown as IntegrationError carrying the 1-based step index.
RunRecord integrate(const PoissonSystem& system, Method method, const MethodSpec& spec,
                    const Vector& y0, double h, std::size_t n_steps,
                    const ReferenceSolution* reference = nullptr);

using StepFunction = std::function<Vector(const Vector&, double)>;

/// ||Phi_{-h}(Phi_h(y0)) - y0||_max.
double adjoint_roundtrip(const StepFunction& step, const Vector& y0, double h);
double adjoint_roundtrip(const PoissonSystem& system, const MethodSpec& spec, const Vector& y0,
                         double h);

}  // namespace epcs
