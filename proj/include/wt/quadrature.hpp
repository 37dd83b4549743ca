#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace wt {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule by Newton iteration on P_n.
GaussRule gauss_legendre(std::size_t n);

/// Integral of f over [a, b] split into `panels` equal panels.
template <class F>
auto composite_gauss(F&& f, double a, double b, std::size_t panels, const GaussRule& rule) {
  const double h = (b - a) / static_cast<double>(panels);
  auto acc = f(a + 0.5 * h * (rule.nodes[0] + 1.0));
  acc *= 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + h * static_cast<double>(p);
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      acc += (0.5 * h * rule.weights[k]) * f(lo + 0.5 * h * (rule.nodes[k] + 1.0));
    }
  }
  return acc;
}

template <class T>
struct QuadratureResult {
  T value;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
};

/// Recursive bisection: a panel is accepted when its one-panel and two-panel
/// Gauss values agree to `tol` scaled by the panel's share of [a, b]. The
/// error estimate is the sum of the accepted differences. `norm` measures
/// the size of a value.
template <class F, class Norm>
auto adaptive_gauss(F&& f, double a, double b, double tol, const GaussRule& rule, Norm&& norm,
                    int max_depth = 40) {
  using T = decltype(composite_gauss(f, a, b, 1, rule));
  QuadratureResult<T> res{composite_gauss(f, a, b, 1, rule), 0.0, rule.nodes.size()};
  res.value *= 0.0;
  const double width = b - a;
  struct Frame {
    double lo, hi;
    T whole;
    int depth;
  };
  std::vector<Frame> stack;
  stack.push_back({a, b, composite_gauss(f, a, b, 1, rule), 0});
  while (!stack.empty()) {
    Frame fr = std::move(stack.back());
    stack.pop_back();
    const double mid = 0.5 * (fr.lo + fr.hi);
    T left = composite_gauss(f, fr.lo, mid, 1, rule);
    T right = composite_gauss(f, mid, fr.hi, 1, rule);
    res.evaluations += 2 * rule.nodes.size();
    T halves = left + right;
    const double diff = norm(halves - fr.whole);
    if (diff <= tol * (fr.hi - fr.lo) / width || fr.depth >= max_depth) {
      res.value += halves;
      res.error_estimate += diff;
    } else {
      stack.push_back({fr.lo, mid, std::move(left), fr.depth + 1});
      stack.push_back({mid, fr.hi, std::move(right), fr.depth + 1});
    }
  }
  return res;
}

}  // namespace wt
