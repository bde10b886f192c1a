#pragma once

#include <span>
#include <type_traits>
#include <utility>
#include <vector>

namespace epcs {

/// Interpolatory quadrature on [0,1]: int_0^1 f ~ sum_i b_i f(c_i).
/// Nodes are strictly increasing and lie in [0,1].
class QuadratureRule {
 public:
  QuadratureRule(std::vector<double> nodes, std::vector<double> weights);

  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return nodes_.size(); }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

inline constexpr int kMaxGaussPoints = 32;
inline constexpr int kMaxInterpolatoryNodes = 12;

/// s-point Gauss-Legendre rule mapped to [0,1], 1 <= s <= 32.
QuadratureRule gauss_rule(int s);

/// Weights b_i = int_0^1 l_i(x) dx of the Lagrange cardinal polynomials on
/// the given nodes. Nodes are sorted; at most 12 distinct nodes in [0,1].
QuadratureRule interpolatory_weights(std::vector<double> nodes);

/// sum_i b_i f(c_i). f may return a scalar or an Eigen vector.
template <class F>
auto integrate(const QuadratureRule& rule, F&& f) {
  using Result = std::decay_t<decltype(f(0.0))>;
  const auto nodes = rule.nodes();
  const auto weights = rule.weights();
  if constexpr (std::is_arithmetic_v<Result>) {
    Result acc{};
    for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * f(nodes[i]);
    return acc;
  } else {
    auto acc = (weights[0] * f(nodes[0])).eval();
    for (std::size_t i = 1; i < nodes.size(); ++i) acc += weights[i] * f(nodes[i]);
    return acc;
  }
}

}  // namespace epcs
