#include "epcs/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "epcs/errors.hpp"

namespace epcs {

QuadratureRule::QuadratureRule(std::vector<double> nodes, std::vector<double> weights)
    : nodes_(std::move(nodes)), weights_(std::move(weights)) {
  if (nodes_.empty()) throw std::invalid_argument("quadrature rule needs at least one node");
  if (nodes_.size() != weights_.size()) {
    throw std::invalid_argument("quadrature nodes and weights differ in length");
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!(nodes_[i] >= 0.0 && nodes_[i] <= 1.0)) {
      throw std::invalid_argument("quadrature node outside [0,1]");
    }
    if (i > 0 && !(nodes_[i] > nodes_[i - 1])) {
      throw std::invalid_argument("quadrature nodes must be strictly increasing");
    }
  }
}

namespace {

// L_n(t) and L_n'(t) on [-1,1].
std::pair<double, double> legendre_and_derivative(int n, double t) {
  double prev = 1.0;
  double cur = t;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0) * t * cur - k * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  const double derivative = n * (t * cur - prev) / (t * t - 1.0);
  return {cur, derivative};
}

}  // namespace

QuadratureRule gauss_rule(int s) {
  if (s < 1 || s > kMaxGaussPoints) {
    throw std::invalid_argument("Gauss rule size " + std::to_string(s) + " outside [1, " +
                                std::to_string(kMaxGaussPoints) + "]");
  }
  std::vector<double> nodes(s);
  std::vector<double> weights(s);
  const int half = (s + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Roots of L_s in decreasing order; the Chebyshev-angle guess sits inside
    // the basin of each root for s <= 32.
    double t = std::cos(std::numbers::pi * (i + 0.75) / (s + 0.5));
    double derivative = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      auto [value, d] = legendre_and_derivative(s, t);
      const double dt = value / d;
      t -= dt;
      derivative = d;
      if (std::abs(dt) <= 1e-15) {
        derivative = legendre_and_derivative(s, t).second;
        break;
      }
    }
    const double w = 2.0 / ((1.0 - t * t) * derivative * derivative);
    // Map t -> (1 - t)/2 for the low node and (1 + t)/2 for its mirror so the
    // pair sums to exactly 1.
    const double low = 0.5 - 0.5 * t;
    nodes[i] = low;
    nodes[s - 1 - i] = 1.0 - low;
    weights[i] = 0.5 * w;
    weights[s - 1 - i] = 0.5 * w;
  }
  if (s % 2 == 1) nodes[s / 2] = 0.5;
  return QuadratureRule(std::move(nodes), std::move(weights));
}

QuadratureRule interpolatory_weights(std::vector<double> nodes) {
  if (nodes.empty()) throw std::invalid_argument("interpolatory rule needs at least one node");
  if (nodes.size() > static_cast<std::size_t>(kMaxInterpolatoryNodes)) {
    throw std::invalid_argument("interpolatory rule limited to " +
                                std::to_string(kMaxInterpolatoryNodes) + " nodes");
  }
  std::sort(nodes.begin(), nodes.end());
  if (std::adjacent_find(nodes.begin(), nodes.end()) != nodes.end()) {
    throw std::invalid_argument("interpolatory rule has duplicate nodes");
  }

  // Cardinal polynomials have degree s-1; a Gauss rule with s/2+1 points
  // integrates them exactly, evaluated in product form.
  const std::size_t s = nodes.size();
  const QuadratureRule exact = gauss_rule(static_cast<int>(s / 2 + 1));
  std::vector<double> weights(s, 0.0);
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t q = 0; q < exact.size(); ++q) {
      const double x = exact.nodes()[q];
      double cardinal = 1.0;
      for (std::size_t j = 0; j < s; ++j) {
        if (j != i) cardinal *= (x - nodes[j]) / (nodes[i] - nodes[j]);
      }
      weights[i] += exact.weights()[q] * cardinal;
    }
  }
  return QuadratureRule(std::move(nodes), std::move(weights));
}

}  // namespace epcs
