#include "wt/density.hpp"

#include <algorithm>
#include <cmath>

#include "wt/error.hpp"

namespace wt {

double poly_eval(const Polynomial& p, double x) noexcept {
  double v = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * x + *it;
  return v;
}

Polynomial poly_derivative(const Polynomial& p) {
  if (p.size() <= 1) return {0.0};
  Polynomial d(p.size() - 1);
  for (std::size_t k = 1; k < p.size(); ++k) d[k - 1] = static_cast<double>(k) * p[k];
  return d;
}

Polynomial poly_antiderivative(const Polynomial& p) {
  Polynomial a(p.size() + 1, 0.0);
  for (std::size_t k = 0; k < p.size(); ++k) a[k + 1] = p[k] / static_cast<double>(k + 1);
  return a;
}

Polynomial poly_mul(const Polynomial& p, const Polynomial& q) {
  if (p.empty() || q.empty()) return {0.0};
  Polynomial r(p.size() + q.size() - 1, 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
  }
  return r;
}

std::size_t poly_degree(const Polynomial& p) noexcept {
  std::size_t d = p.size();
  while (d > 1 && p[d - 1] == 0.0) --d;
  return d == 0 ? 0 : d - 1;
}

std::vector<double> critical_points(const Polynomial& p, double lo, double hi) {
  const std::size_t deg = poly_degree(p);
  if (deg > 3) throw Error(ErrorKind::degree_too_high, "exact critical points need degree <= 3");
  std::vector<double> roots;
  if (deg == 2) {
    roots.push_back(-p[1] / (2.0 * p[2]));
  } else if (deg == 3) {
    // p' = 3 c3 x^2 + 2 c2 x + c1
    const double qa = 3.0 * p[3], qb = 2.0 * p[2], qc = p[1];
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc >= 0.0) {
      const double s = std::sqrt(disc);
      // Cancellation-free pair.
      const double t = -0.5 * (qb + std::copysign(s, qb));
      if (t != 0.0) {
        roots.push_back(t / qa);
        roots.push_back(qc / t);
      } else {
        roots.push_back(0.0);
      }
    }
  }
  std::vector<double> out;
  for (double r : roots) {
    if (r > lo && r < hi) out.push_back(r);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

PiecewisePolynomial::PiecewisePolynomial(std::vector<PolynomialPiece> pieces) : pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw Error(ErrorKind::invalid_input, "piecewise polynomial needs a piece");
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const auto& pc = pieces_[i];
    if (!(std::isfinite(pc.lo) && std::isfinite(pc.hi) && pc.lo < pc.hi)) {
      throw Error(ErrorKind::invalid_input, "piece interval must satisfy lo < hi");
    }
    if (pc.coeffs.empty()) throw Error(ErrorKind::invalid_input, "piece has no coefficients");
    if (i > 0 && pc.lo < pieces_[i - 1].hi) throw Error(ErrorKind::invalid_input, "pieces overlap or are unsorted");
  }
}

std::size_t PiecewisePolynomial::degree() const noexcept {
  std::size_t d = 0;
  for (const auto& pc : pieces_) d = std::max(d, poly_degree(pc.coeffs));
  return d;
}

double PiecewisePolynomial::operator()(double x) const noexcept {
  if (pieces_.empty()) return 0.0;
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                             [](double v, const PolynomialPiece& pc) { return v < pc.lo; });
  if (it == pieces_.begin()) return 0.0;
  --it;
  const bool last = std::next(it) == pieces_.end();
  if (x < it->hi || (last && x == it->hi)) return poly_eval(it->coeffs, x);
  return 0.0;
}

double PiecewisePolynomial::integral() const {
  double total = 0.0;
  for (const auto& pc : pieces_) {
    const Polynomial a = poly_antiderivative(pc.coeffs);
    total += poly_eval(a, pc.hi) - poly_eval(a, pc.lo);
  }
  return total;
}

namespace {

// Jumps at piece boundaries, with zero in gaps and (optionally) outside.
double boundary_jumps(const PiecewisePolynomial& f, bool include_edges) {
  const auto& pcs = f.pieces();
  double total = 0.0;
  if (include_edges) {
    total += std::abs(f.piece_value(0, pcs.front().lo));
    total += std::abs(f.piece_value(pcs.size() - 1, pcs.back().hi));
  }
  for (std::size_t i = 0; i + 1 < pcs.size(); ++i) {
    const double left = f.piece_value(i, pcs[i].hi);
    const double right = f.piece_value(i + 1, pcs[i + 1].lo);
    if (pcs[i].hi == pcs[i + 1].lo) {
      total += std::abs(right - left);
    } else {
      total += std::abs(left) + std::abs(right);
    }
  }
  return total;
}

}  // namespace

double variation(const PiecewisePolynomial& f, bool include_edges) {
  double total = boundary_jumps(f, include_edges);
  for (const auto& pc : f.pieces()) {
    std::vector<double> knots{pc.lo};
    for (double c : critical_points(pc.coeffs, pc.lo, pc.hi)) knots.push_back(c);
    knots.push_back(pc.hi);
    for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
      total += std::abs(poly_eval(pc.coeffs, knots[k + 1]) - poly_eval(pc.coeffs, knots[k]));
    }
  }
  return total;
}

VariationScan variation_scan(const PiecewisePolynomial& f, bool include_edges, std::size_t points) {
  if (points < 2) throw Error(ErrorKind::invalid_input, "scan needs at least two points");
  VariationScan out;
  out.value = boundary_jumps(f, include_edges);
  for (const auto& pc : f.pieces()) {
    const double h = (pc.hi - pc.lo) / static_cast<double>(points - 1);
    out.resolution = std::max(out.resolution, h);
    double prev = poly_eval(pc.coeffs, pc.lo);
    for (std::size_t k = 1; k < points; ++k) {
      const double x = k + 1 == points ? pc.hi : pc.lo + h * static_cast<double>(k);
      const double v = poly_eval(pc.coeffs, x);
      out.value += std::abs(v - prev);
      prev = v;
    }
  }
  return out;
}

namespace {

// Minimum and maximum of p on [lo, hi].
std::pair<double, double> piece_range(const Polynomial& p, double lo, double hi) {
  std::vector<double> xs{lo, hi};
  if (poly_degree(p) <= 3) {
    for (double c : critical_points(p, lo, hi)) xs.push_back(c);
  } else {
    constexpr int kScan = 10000;
    for (int k = 1; k < kScan; ++k) xs.push_back(lo + (hi - lo) * k / kScan);
  }
  double mn = poly_eval(p, lo), mx = mn;
  for (double x : xs) {
    const double v = poly_eval(p, x);
    mn = std::min(mn, v);
    mx = std::max(mx, v);
  }
  return {mn, mx};
}

}  // namespace

double sup_abs(const PiecewisePolynomial& f) {
  double best = 0.0;
  for (const auto& pc : f.pieces()) {
    const auto [mn, mx] = piece_range(pc.coeffs, pc.lo, pc.hi);
    best = std::max({best, std::abs(mn), std::abs(mx)});
  }
  return best;
}

DensitySpec::DensitySpec(PiecewisePolynomial f) : f_(std::move(f)) {
  if (f_.pieces().empty()) throw Error(ErrorKind::invalid_density, "density has no pieces");
  if (f_.lower() != 0.0) throw Error(ErrorKind::invalid_density, "min supp f must be 0");
  for (const auto& pc : f_.pieces()) {
    if (piece_range(pc.coeffs, pc.lo, pc.hi).first < -1e-12) {
      throw Error(ErrorKind::invalid_density, "density is negative somewhere");
    }
  }
  double mass = 0.0;
  for (const auto& pc : f_.pieces()) {
    cumulative_.push_back(mass);
    const Polynomial a = poly_antiderivative(pc.coeffs);
    mass += poly_eval(a, pc.hi) - poly_eval(a, pc.lo);
  }
  if (std::abs(mass - 1.0) > 1e-9) throw Error(ErrorKind::invalid_density, "density does not integrate to 1");
  cumulative_.push_back(mass);
}

DensitySpec DensitySpec::uniform(double width) {
  if (!(width > 0.0)) throw Error(ErrorKind::invalid_density, "uniform width must be positive");
  return DensitySpec(PiecewisePolynomial({{0.0, width, {1.0 / width}}}));
}

double DensitySpec::cdf(double x) const {
  const auto& pcs = f_.pieces();
  if (x <= pcs.front().lo) return 0.0;
  for (std::size_t i = 0; i < pcs.size(); ++i) {
    if (x < pcs[i].lo) return cumulative_[i];
    if (x <= pcs[i].hi) {
      const Polynomial a = poly_antiderivative(pcs[i].coeffs);
      return cumulative_[i] + poly_eval(a, x) - poly_eval(a, pcs[i].lo);
    }
  }
  return 1.0;
}

double DensitySpec::quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw Error(ErrorKind::invalid_input, "quantile level must lie in [0, 1]");
  const auto& pcs = f_.pieces();
  if (u <= 0.0) return pcs.front().lo;
  std::size_t i = 0;
  while (i + 1 < pcs.size() && !(u <= cumulative_[i + 1])) ++i;
  const Polynomial a = poly_antiderivative(pcs[i].coeffs);
  const double base = cumulative_[i] - poly_eval(a, pcs[i].lo);
  double lo = pcs[i].lo, hi = pcs[i].hi;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (base + poly_eval(a, mid) < u) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace wt
