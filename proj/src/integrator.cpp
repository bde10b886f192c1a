#include "epcs/integrator.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "epcs/errors.hpp"
#include "epcs/legendre.hpp"

namespace epcs {

void MethodSpec::validate() const {
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  if (sigma_rule.size() < static_cast<std::size_t>(m)) {
    throw std::invalid_argument("sigma rule needs at least m = " + std::to_string(m) + " nodes");
  }
  if (!(solver_tol > 0.0)) throw std::invalid_argument("solver tolerance must be positive");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be positive");
}

Vector stage_value(const StageSolution& stage, const Vector& y0, double h, double tau) {
  const int m = static_cast<int>(stage.w.size());
  const PolynomialBasis basis(std::max(m, PolynomialBasis::kDefaultMaxDegree));
  Vector y = y0;
  for (int i = 0; i < m; ++i) y += h * basis.antiderivative(i, tau) * stage.w[i];
  return y;
}

namespace {

// Picard iteration x <- update(x). Returns the iteration count on success.
template <class Update>
int fixed_point(Matrix& x, Update&& update, double tolerance, int max_iters) {
  double best = std::numeric_limits<double>::infinity();
  int since_best = 0;
  double change = best;
  for (int iter = 1; iter <= max_iters; ++iter) {
    Matrix next = update(x);
    change = (next - x).cwiseAbs().maxCoeff();
    x = std::move(next);
    if (!std::isfinite(change)) {
      throw ConvergenceError("fixed-point iteration diverged", change, iter);
    }
    if (change <= tolerance) return iter;
    if (change < best) {
      best = change;
      since_best = 0;
    } else if (++since_best >= kStallWindow) {
      throw ConvergenceError("fixed-point iteration stalled at residual " + std::to_string(change),
                             change, iter);
    }
  }
  throw ConvergenceError("fixed-point iteration hit max_iters with residual " +
                             std::to_string(change),
                         change, max_iters);
}

void guard(const PoissonSystem& system, const Vector& y) {
  if (!system.is_valid(y)) {
    throw DomainError(system.name + ": stage value outside the domain; try a smaller step size");
  }
}

}  // namespace

EnhancedStepper::EnhancedStepper(MethodSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  const int m = spec_.m;
  const PolynomialBasis basis(std::max(m, PolynomialBasis::kDefaultMaxDegree));
  std::vector<double> p(m);

  const auto c = spec_.varsigma_rule.nodes();
  const auto bc = spec_.varsigma_rule.weights();
  varsigma_antiderivatives_.resize(static_cast<Eigen::Index>(c.size()), m);
  structure_weights_.reserve(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) {
    basis.eval_all(c[k], p);
    Matrix weights(m, m);
    for (int i = 0; i < m; ++i) {
      varsigma_antiderivatives_(static_cast<Eigen::Index>(k), i) = basis.antiderivative(i, c[k]);
      for (int j = 0; j < m; ++j) weights(i, j) = bc[k] * p[i] * p[j];
    }
    structure_weights_.push_back(std::move(weights));
  }

  const auto d = spec_.sigma_rule.nodes();
  const auto bd = spec_.sigma_rule.weights();
  sigma_antiderivatives_.resize(static_cast<Eigen::Index>(d.size()), m);
  sigma_projection_.resize(static_cast<Eigen::Index>(d.size()), m);
  for (std::size_t l = 0; l < d.size(); ++l) {
    basis.eval_all(d[l], p);
    for (int j = 0; j < m; ++j) {
      sigma_antiderivatives_(static_cast<Eigen::Index>(l), j) = basis.antiderivative(j, d[l]);
      sigma_projection_(static_cast<Eigen::Index>(l), j) = bd[l] * p[j];
    }
  }
}

StepResult EnhancedStepper::step(const PoissonSystem& system, const Vector& y0, double h,
                                 const StageSolution* warm_start) const {
  if (h == 0.0) throw std::invalid_argument("step size must be nonzero");
  guard(system, y0);
  const int m = spec_.m;
  const Eigen::Index n = y0.size();

  // Columns of W are the stage coefficients w_i.
  Matrix w = Matrix::Zero(n, m);
  if (warm_start != nullptr && warm_start->w.size() == static_cast<std::size_t>(m) &&
      warm_start->w[0].size() == n) {
    for (int i = 0; i < m; ++i) w.col(i) = warm_start->w[i];
  } else {
    w.col(0) = system.vector_field(y0);
  }

  const Eigen::Index nc = varsigma_antiderivatives_.rows();
  const Eigen::Index nd = sigma_antiderivatives_.rows();
  std::vector<Matrix> structures(static_cast<std::size_t>(nc));
  Matrix gradients(n, nd);

  auto update = [&](const Matrix& current) -> Matrix {
    for (Eigen::Index l = 0; l < nd; ++l) {
      const Vector y = y0 + h * (current * sigma_antiderivatives_.row(l).transpose());
      guard(system, y);
      gradients.col(l) = system.gradient(y);
    }
    const Matrix projected = gradients * sigma_projection_;  // columns G_j
    Matrix next = Matrix::Zero(n, m);
    for (Eigen::Index k = 0; k < nc; ++k) {
      const Vector y = y0 + h * (current * varsigma_antiderivatives_.row(k).transpose());
      guard(system, y);
      next.noalias() += system.structure(y) * (projected * structure_weights_[k]);
    }
    return next;
  };

  const double tolerance = spec_.solver_tol * (1.0 + y0.cwiseAbs().maxCoeff());
  const int iterations = fixed_point(w, update, tolerance, spec_.max_iters);

  StepResult result;
  result.y1 = y0 + h * w.col(0);
  result.stage.iterations = iterations;
  result.stage.converged = true;
  result.stage.w.reserve(m);
  for (int i = 0; i < m; ++i) result.stage.w.emplace_back(w.col(i));
  return result;
}

StepResult step_enhanced_cs(const PoissonSystem& system, const MethodSpec& spec, const Vector& y0,
                            double h) {
  return EnhancedStepper(spec).step(system, y0, h);
}

StepResult step_cohen_hairer(const PoissonSystem& system, const QuadratureRule& sigma_rule,
                             const Vector& y0, double h, SolverSettings settings,
                             const Vector* warm_start) {
  if (h == 0.0) throw std::invalid_argument("step size must be nonzero");
  guard(system, y0);
  const auto d = sigma_rule.nodes();
  const auto b = sigma_rule.weights();

  Matrix v = (warm_start != nullptr && warm_start->size() == y0.size())
                 ? Matrix(*warm_start)
                 : Matrix(system.vector_field(y0));

  auto update = [&](const Matrix& current) -> Matrix {
    const Vector increment = h * current.col(0);
    Vector average = Vector::Zero(y0.size());
    for (std::size_t l = 0; l < d.size(); ++l) {
      const Vector y = y0 + d[l] * increment;
      guard(system, y);
      average += b[l] * system.gradient(y);
    }
    const Vector midpoint = y0 + 0.5 * increment;
    guard(system, midpoint);
    return system.structure(midpoint) * average;
  };

  const double tolerance = settings.tol * (1.0 + y0.cwiseAbs().maxCoeff());
  const int iterations = fixed_point(v, update, tolerance, settings.max_iters);

  StepResult result;
  result.y1 = y0 + h * v.col(0);
  result.stage.w = {Vector(v.col(0))};
  result.stage.iterations = iterations;
  result.stage.converged = true;
  return result;
}

RunRecord integrate(const PoissonSystem& system, Method method, const MethodSpec& spec,
                    const Vector& y0, double h, std::size_t n_steps,
                    const ReferenceSolution* reference) {
  if (n_steps < 1) throw std::invalid_argument("n_steps must be >= 1");
  std::optional<EnhancedStepper> stepper;
  if (method == Method::enhanced) stepper.emplace(spec);

  RunRecord record;
  record.times.reserve(n_steps + 1);
  record.states.reserve(n_steps + 1);
  for (const Casimir& c : system.casimirs) record.casimir_names.push_back(c.name);
  record.casimir_errors.resize(system.casimirs.size());
  if (reference != nullptr) record.global_error.emplace();

  const double h0 = system.hamiltonian(y0);
  std::vector<double> c0;
  for (const Casimir& c : system.casimirs) c0.push_back(c.value(y0));

  auto record_state = [&](std::size_t n, const Vector& y, int iterations) {
    const double t = static_cast<double>(n) * h;
    record.times.push_back(t);
    record.states.push_back(y);
    record.energy_error.push_back(system.hamiltonian(y) - h0);
    for (std::size_t c = 0; c < system.casimirs.size(); ++c) {
      record.casimir_errors[c].push_back(system.casimirs[c].value(y) - c0[c]);
    }
    if (reference != nullptr) {
      record.global_error->push_back((y - reference->evaluate(t)).cwiseAbs().maxCoeff());
    }
    record.iterations.push_back(iterations);
  };

  record_state(0, y0, 0);
  Vector y = y0;
  StageSolution previous;
  for (std::size_t n = 1; n <= n_steps; ++n) {
    StepResult step;
    try {
      if (stepper) {
        step = stepper->step(system, y, h, previous.w.empty() ? nullptr : &previous);
      } else {
        const Vector* warm = previous.w.empty() ? nullptr : &previous.w[0];
        step = step_cohen_hairer(system, spec.sigma_rule, y, h, spec.solver(), warm);
      }
    } catch (const std::exception& e) {
      throw IntegrationError("step " + std::to_string(n) + ": " + e.what(), n);
    }
    y = step.y1;
    previous = std::move(step.stage);
    record_state(n, y, previous.iterations);
  }
  return record;
}

double adjoint_roundtrip(const StepFunction& step, const Vector& y0, double h) {
  const Vector forward = step(y0, h);
  const Vector back = step(forward, -h);
  return (back - y0).cwiseAbs().maxCoeff();
}

double adjoint_roundtrip(const PoissonSystem& system, const MethodSpec& spec, const Vector& y0,
                         double h) {
  const EnhancedStepper stepper(spec);
  return adjoint_roundtrip(
      [&](const Vector& y, double dt) { return stepper.step(system, y, dt).y1; }, y0, h);
}

}  // namespace epcs
