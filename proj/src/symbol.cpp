#include "wt/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <numbers>
#include <set>

#include "wt/error.hpp"

namespace wt {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kWindingCap = std::size_t{1} << 14;

/// Golden-section minimization of f on [lo, hi].
double golden_section(const std::function<double(double)>& f, double lo, double hi, double& best) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - r * (hi - lo);
  double x2 = lo + r * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < 80 && hi - lo > 1e-14; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - r * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + r * (hi - lo);
      f2 = f(x2);
    }
  }
  if (f1 < f2) {
    best = f1;
    return x1;
  }
  best = f2;
  return x2;
}

/// Visits every point of the grid^d torus lattice in mixed-radix order.
template <typename Visit>
void for_each_grid_point(std::size_t dim, std::size_t grid, Visit&& visit) {
  std::vector<std::size_t> idx(dim, 0);
  TorusPoint theta(dim, grid_angle(0, grid));
  for (;;) {
    visit(idx, theta);
    std::size_t axis = 0;
    while (axis < dim) {
      if (++idx[axis] < grid) {
        theta[axis] = grid_angle(idx[axis], grid);
        break;
      }
      idx[axis] = 0;
      theta[axis] = grid_angle(0, grid);
      ++axis;
    }
    if (axis == dim) return;
  }
}

/// Coordinate-wise golden-section refinement around `point`.
double refine_minimum(const std::function<double(const TorusPoint&)>& f, TorusPoint& point,
                      double half_width, int passes) {
  double value = f(point);
  for (int pass = 0; pass < passes; ++pass) {
    for (std::size_t axis = 0; axis < point.size(); ++axis) {
      TorusPoint probe = point;
      auto along = [&](double t) {
        probe[axis] = t;
        return f(probe);
      };
      double best = 0.0;
      const double t = golden_section(along, point[axis] - half_width, point[axis] + half_width, best);
      if (best < value) {
        value = best;
        point[axis] = t;
      }
    }
    half_width *= 0.25;
  }
  for (double& t : point) t = wrap_angle(t);
  return value;
}

/// Phase increment of s_a along one circle, in units of full turns.
double turns_on_circle(const ConvolutionVector& a, std::size_t axis0, std::size_t grid,
                       const TorusPoint& base) {
  const double vanish = vanishing_tolerance(a);
  for (std::size_t g = std::max<std::size_t>(grid, 8);; g *= 2) {
    if (g > kWindingCap) {
      throw Error(ErrorKind::symbol_vanishes,
                  "phase could not be resolved within 2^14 samples per circle");
    }
    TorusPoint theta = base;
    theta[axis0] = grid_angle(g - 1, g);  // theta = pi, closes the loop
    std::complex<double> prev = evaluate_symbol(a, theta);
    if (std::abs(prev) < vanish) {
      throw Error(ErrorKind::symbol_vanishes, "symbol vanishes on the sampled circle");
    }
    double total = 0.0;
    bool resolved = true;
    for (std::size_t i = 0; i < g; ++i) {
      theta[axis0] = grid_angle(i, g);
      const std::complex<double> cur = evaluate_symbol(a, theta);
      if (std::abs(cur) < vanish) {
        throw Error(ErrorKind::symbol_vanishes, "symbol vanishes on the sampled circle");
      }
      const double jump = std::arg(cur * std::conj(prev));
      if (std::abs(jump) >= kPi / 2) resolved = false;
      total += jump;
      prev = cur;
    }
    if (resolved) return total / (2.0 * kPi);
  }
}

}  // namespace

ConvolutionVector::ConvolutionVector(std::size_t dim, const std::map<LatticePoint, double>& entries)
    : dim_(dim) {
  if (dim == 0) throw Error(ErrorKind::invalid_input, "convolution vector dimension must be positive");
  for (const auto& [k, v] : entries) {
    if (k.dim() != dim) {
      throw Error(ErrorKind::dimension_mismatch, "lattice point " + k.str() + " has wrong dimension");
    }
    if (!std::isfinite(v)) throw Error(ErrorKind::invalid_input, "non-finite coefficient");
    if (v != 0.0) entries_.emplace(k, v);
  }
  if (entries_.empty()) throw Error(ErrorKind::invalid_input, "convolution vector has no nonzero coefficient");
}

double ConvolutionVector::coefficient(const LatticePoint& k) const {
  const auto it = entries_.find(k);
  return it == entries_.end() ? 0.0 : it->second;
}

std::vector<LatticePoint> ConvolutionVector::support() const {
  std::vector<LatticePoint> s;
  s.reserve(entries_.size());
  for (const auto& e : entries_) s.push_back(e.first);
  return s;
}

double ConvolutionVector::l1_norm() const noexcept {
  double s = 0.0;
  for (const auto& e : entries_) s += std::abs(e.second);
  return s;
}

double ConvolutionVector::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& e : entries_) m = std::max(m, std::abs(e.second));
  return m;
}

int ConvolutionVector::support_diameter() const noexcept {
  int diameter = 0;
  for (std::size_t axis = 0; axis < dim_; ++axis) {
    int lo = std::numeric_limits<int>::max();
    int hi = std::numeric_limits<int>::min();
    for (const auto& e : entries_) {
      lo = std::min(lo, e.first[axis]);
      hi = std::max(hi, e.first[axis]);
    }
    diameter = std::max(diameter, hi - lo);
  }
  return diameter;
}

ConvolutionVector convolve(const ConvolutionVector& a, const ConvolutionVector& b) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::dimension_mismatch, "convolve");
  std::map<LatticePoint, double> out;
  for (const auto& [ka, va] : a.entries()) {
    for (const auto& [kb, vb] : b.entries()) out[ka + kb] += va * vb;
  }
  return ConvolutionVector(a.dim(), out);
}

ConvolutionVector translate_vector(const ConvolutionVector& a, const LatticePoint& j0) {
  if (j0.dim() != a.dim()) throw Error(ErrorKind::dimension_mismatch, "translate_vector");
  std::map<LatticePoint, double> out;
  for (const auto& [k, v] : a.entries()) out.emplace(k + j0, v);
  return ConvolutionVector(a.dim(), out);
}

double wrap_angle(double theta) noexcept {
  double t = std::remainder(theta, 2.0 * kPi);  // in [-pi, pi]
  if (t <= -kPi) t += 2.0 * kPi;
  return t;
}

double grid_angle(std::size_t i, std::size_t grid) noexcept {
  return -kPi + 2.0 * kPi * static_cast<double>(i + 1) / static_cast<double>(grid);
}

std::complex<double> evaluate_symbol(const ConvolutionVector& a, const TorusPoint& theta) {
  if (theta.size() != a.dim()) throw Error(ErrorKind::dimension_mismatch, "evaluate_symbol");
  std::complex<double> s = 0.0;
  for (const auto& [k, v] : a.entries()) {
    double phase = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) phase += k[i] * theta[i];
    s += v * std::polar(1.0, phase);
  }
  return s;
}

std::size_t default_grid(std::size_t dim) noexcept { return dim == 1 ? 256 : 128; }

double vanishing_tolerance(const ConvolutionVector& a) noexcept { return 1e-9 * a.l1_norm(); }

int winding_number(const ConvolutionVector& a, std::size_t axis, std::size_t grid,
                   const TorusPoint& fixed_coords) {
  const std::size_t d = a.dim();
  if (axis < 1 || axis > d) throw Error(ErrorKind::invalid_input, "axis out of range");
  if (fixed_coords.size() + 1 != d) {
    throw Error(ErrorKind::dimension_mismatch, "fixed_coords must have dim-1 entries");
  }
  const std::size_t ax = axis - 1;
  auto base_from = [&](const TorusPoint& fixed) {
    TorusPoint base(d, 0.0);
    for (std::size_t i = 0, j = 0; i < d; ++i) {
      if (i != ax) base[i] = wrap_angle(fixed[j++]);
    }
    return base;
  };
  const double turns = turns_on_circle(a, ax, grid, base_from(fixed_coords));
  const int wn = static_cast<int>(std::lround(turns));
  if (d >= 2) {
    TorusPoint other = fixed_coords;
    for (double& t : other) t += 1.0;
    const int wn2 = static_cast<int>(std::lround(turns_on_circle(a, ax, grid, base_from(other))));
    if (wn2 != wn) {
      throw Error(ErrorKind::inconsistent_winding,
                  "winding along axis " + std::to_string(axis) + " depends on the fixed coordinates");
    }
  }
  return wn;
}

std::vector<int> winding_vector(const ConvolutionVector& a, std::size_t grid) {
  std::vector<int> w;
  for (std::size_t axis = 1; axis <= a.dim(); ++axis) {
    w.push_back(winding_number(a, axis, grid, TorusPoint(a.dim() - 1, 0.0)));
  }
  return w;
}

TorusMinimum min_abs_on_torus(const ConvolutionVector& a, std::size_t grid) {
  if (grid < 8) throw Error(ErrorKind::invalid_input, "grid must be at least 8");
  TorusMinimum best{std::numeric_limits<double>::infinity(), {}};
  for_each_grid_point(a.dim(), grid, [&](const auto&, const TorusPoint& theta) {
    const double v = std::abs(evaluate_symbol(a, theta));
    if (v < best.value) best = {v, theta};
  });
  auto f = [&](const TorusPoint& t) { return std::abs(evaluate_symbol(a, t)); };
  TorusPoint p = best.point;
  const double refined = refine_minimum(f, p, 2.0 * kPi / static_cast<double>(grid), 1);
  if (refined < best.value) best = {refined, p};
  return best;
}

std::optional<double> sectorial_phase(const ConvolutionVector& a, std::size_t grid) {
  if (grid < 8) throw Error(ErrorKind::invalid_input, "grid must be at least 8");
  const double tol = vanishing_tolerance(a);
  std::vector<std::complex<double>> values;
  std::vector<double> angles;
  for_each_grid_point(a.dim(), grid, [&](const auto&, const TorusPoint& theta) {
    const std::complex<double> s = evaluate_symbol(a, theta);
    values.push_back(s);
    if (std::abs(s) > tol) angles.push_back(std::arg(s));
  });
  if (angles.empty()) return 0.0;
  std::sort(angles.begin(), angles.end());

  std::vector<double> candidates;
  const std::size_t n = angles.size();
  for (std::size_t i = 0; i < n; ++i) {
    const bool last = i + 1 == n;
    const double gap = last ? angles[0] + 2.0 * kPi - angles[i] : angles[i + 1] - angles[i];
    if (gap < kPi - 1e-12) continue;
    // Values occupy the arc complementary to this empty gap.
    const double centre = last ? 0.5 * (angles[0] + angles[i])
                               : 0.5 * (angles[i + 1] + angles[i] + 2.0 * kPi);
    const double phi = wrap_angle(-centre);
    candidates.push_back(std::abs(phi) < 1e-14 ? 0.0 : phi);
  }

  std::optional<double> chosen;
  for (double phi : candidates) {
    const std::complex<double> rot = std::polar(1.0, phi);
    const bool ok = std::all_of(values.begin(), values.end(),
                                [&](const auto& s) { return (rot * s).real() >= -tol; });
    if (!ok) continue;
    if (!chosen || std::abs(phi) < std::abs(*chosen) - 1e-12 ||
        (std::abs(std::abs(phi) - std::abs(*chosen)) <= 1e-12 && phi > *chosen)) {
      chosen = phi;
    }
  }
  return chosen;
}

double default_zero_threshold(const ConvolutionVector& a) noexcept { return 1e-2 * a.l1_norm(); }

std::vector<RealPartZero> real_part_zeros(const ConvolutionVector& a, std::size_t grid, double tol,
                                          double phase) {
  if (grid < 8) throw Error(ErrorKind::invalid_input, "grid must be at least 8");
  const std::size_t d = a.dim();
  const std::complex<double> rot = std::polar(1.0, phase);
  auto re = [&](const TorusPoint& t) { return (rot * evaluate_symbol(a, t)).real(); };
  const double negative_tol = vanishing_tolerance(a);

  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) total *= grid;
  std::vector<double> values(total);
  std::vector<char> marked(total, 0);
  {
    std::size_t flat = 0;
    for_each_grid_point(d, grid, [&](const auto&, const TorusPoint& theta) {
      const double v = re(theta);
      if (v < -negative_tol) {
        throw Error(ErrorKind::invalid_input,
                    "real part is negative on the grid; rotate by the sectorial phase first");
      }
      values[flat] = v;
      marked[flat] = v < tol;
      ++flat;
    });
  }

  auto unflatten = [&](std::size_t flat) {
    std::vector<std::size_t> idx(d);
    for (std::size_t i = 0; i < d; ++i) {
      idx[i] = flat % grid;
      flat /= grid;
    }
    return idx;
  };
  auto flatten = [&](const std::vector<std::size_t>& idx) {
    std::size_t flat = 0;
    for (std::size_t i = d; i-- > 0;) flat = flat * grid + idx[i];
    return flat;
  };

  // Offsets of the full 3^d - 1 neighbourhood.
  std::vector<std::vector<int>> offsets;
  {
    std::vector<int> off(d, -1);
    for (;;) {
      if (std::any_of(off.begin(), off.end(), [](int o) { return o != 0; })) offsets.push_back(off);
      std::size_t i = 0;
      while (i < d && ++off[i] > 1) off[i++] = -1;
      if (i == d) break;
    }
  }

  std::vector<RealPartZero> zeros;
  std::vector<char> seen(total, 0);
  const double accept = vanishing_tolerance(a);
  for (std::size_t start = 0; start < total; ++start) {
    if (!marked[start] || seen[start]) continue;
    std::deque<std::size_t> queue{start};
    seen[start] = 1;
    std::vector<std::set<std::size_t>> axis_extent(d);
    std::size_t argmin = start;
    while (!queue.empty()) {
      const std::size_t cur = queue.front();
      queue.pop_front();
      if (values[cur] < values[argmin]) argmin = cur;
      const auto idx = unflatten(cur);
      for (std::size_t i = 0; i < d; ++i) axis_extent[i].insert(idx[i]);
      for (const auto& off : offsets) {
        auto nb = idx;
        for (std::size_t i = 0; i < d; ++i) {
          nb[i] = (nb[i] + grid + static_cast<std::size_t>(off[i] + 1) - 1) % grid;
        }
        const std::size_t f = flatten(nb);
        if (marked[f] && !seen[f]) {
          seen[f] = 1;
          queue.push_back(f);
        }
      }
    }
    for (std::size_t i = 0; i < d; ++i) {
      if (axis_extent[i].size() * 4 > grid) {
        throw Error(ErrorKind::non_isolated_zeros,
                    "near-zero set of Re s_a spans more than a quarter of axis " + std::to_string(i + 1));
      }
    }

    const auto idx = unflatten(argmin);
    TorusPoint z(d);
    for (std::size_t i = 0; i < d; ++i) z[i] = grid_angle(idx[i], grid);
    const double value = refine_minimum(re, z, 2.0 * kPi / static_cast<double>(grid), 4);
    if (value > accept) continue;  // a positive local minimum, not a zero

    double slope_max = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      for (double sign : {1.0, -1.0}) {
        std::vector<double> xs;
        std::vector<double> ys;
        for (int p = 3; p <= 8; ++p) {
          const double t = std::ldexp(1.0, -p);
          TorusPoint probe = z;
          probe[i] += sign * t;
          const double v = re(probe);
          if (v <= 0.0) continue;
          xs.push_back(std::log(t));
          ys.push_back(std::log(v));
        }
        if (xs.size() < 2) continue;
        const double n = static_cast<double>(xs.size());
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t k = 0; k < xs.size(); ++k) {
          sx += xs[k];
          sy += ys[k];
          sxx += xs[k] * xs[k];
          sxy += xs[k] * ys[k];
        }
        slope_max = std::max(slope_max, (n * sxy - sx * sy) / (n * sxx - sx * sx));
      }
    }
    const int order = std::max(2, 2 * static_cast<int>(std::lround(slope_max / 2.0)));
    zeros.push_back({z, order});
  }
  return zeros;
}

double torus_distance(const TorusPoint& x, const TorusPoint& y) {
  if (x.size() != y.size()) throw Error(ErrorKind::dimension_mismatch, "torus_distance");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double diff = wrap_angle(x[i] - y[i]);
    s += diff * diff;
  }
  return std::sqrt(s);
}

double separation_radius(const std::vector<RealPartZero>& zeros) {
  if (zeros.empty()) return 0.0;
  double sep = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < zeros.size(); ++i) {
    for (std::size_t j = i + 1; j < zeros.size(); ++j) {
      sep = std::min(sep, torus_distance(zeros[i].location, zeros[j].location));
    }
  }
  return std::min(1.0, 0.5 * sep);
}

double d_tilde_bound(const ConvolutionVector& a, double n, const std::vector<RealPartZero>& zeros,
                     double phase) {
  if (!(n >= 2.0)) throw Error(ErrorKind::invalid_input, "n must be at least 2");
  if (zeros.empty()) return 1.0;
  const std::size_t d = a.dim();
  const double delta = separation_radius(zeros);
  const double inner = 1.0 / n;
  if (inner > delta) throw Error(ErrorKind::invalid_input, "annulus 1/n <= r <= delta is empty");

  const std::complex<double> rot = std::polar(1.0, phase);
  auto re = [&](const TorusPoint& t) { return (rot * evaluate_symbol(a, t)).real(); };

  // Radii: the inner circle, a fixed geometric ladder, and the outer circle.
  std::vector<double> radii{inner, delta};
  constexpr int kLadder = 2048;
  for (int i = 0; i <= kLadder; ++i) {
    const double r = std::pow(10.0, -12.0 + 12.0 * i / kLadder);
    if (r > inner && r < delta) radii.push_back(r);
  }

  std::vector<TorusPoint> directions;
  if (d == 1) {
    directions = {{1.0}, {-1.0}};
  } else if (d == 2) {
    constexpr int kAngles = 256;
    for (int i = 0; i < kAngles; ++i) {
      const double phi = 2.0 * std::numbers::pi * i / kAngles;
      directions.push_back({std::cos(phi), std::sin(phi)});
    }
  } else {
    std::vector<int> off(d, -1);
    for (;;) {
      double norm = 0.0;
      for (int o : off) norm += o * o;
      if (norm > 0) {
        TorusPoint dir(d);
        for (std::size_t i = 0; i < d; ++i) dir[i] = off[i] / std::sqrt(norm);
        directions.push_back(dir);
      }
      std::size_t i = 0;
      while (i < d && ++off[i] > 1) off[i++] = -1;
      if (i == d) break;
    }
  }

  const double negative_tol = vanishing_tolerance(a);
  double d_max = 0.0;
  for (const auto& zero : zeros) {
    double inf_re = std::numeric_limits<double>::infinity();
    for (double r : radii) {
      for (const auto& dir : directions) {
        TorusPoint t = zero.location;
        for (std::size_t i = 0; i < d; ++i) t[i] += r * dir[i];
        const double v = re(t);
        if (v < -negative_tol) throw Error(ErrorKind::invalid_input, "real part of the symbol is negative");
        inf_re = std::min(inf_re, v);
      }
    }
    const double dm = inf_re > 0.0 ? 1.0 / inf_re : std::numeric_limits<double>::infinity();
    d_max = std::max(d_max, dm);
  }
  return d_max;
}

double d_a_bound(const ConvolutionVector& a, double l, const std::vector<RealPartZero>& zeros,
                 double phase) {
  const double d = static_cast<double>(a.dim());
  const double m = static_cast<double>(zeros.size());
  const double n = 2.0 * std::pow(13.0, d * m) * l;
  return std::pow(l, d / 2.0) * d_tilde_bound(a, n, zeros, phase);
}

bool invertibility_criterion_1d(const ConvolutionVector& a) {
  if (a.dim() != 1) throw Error(ErrorKind::wrong_dimension, "criterion applies to d = 1 only");
  const std::size_t grid = default_grid(1);
  if (min_abs_on_torus(a, grid).value <= vanishing_tolerance(a)) return false;
  try {
    return winding_number(a, 1, grid, {}) == 0;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::symbol_vanishes) return false;
    throw;
  }
}

SymbolReport analyze_symbol(const ConvolutionVector& a, std::size_t grid) {
  SymbolReport r;
  r.dim = a.dim();
  r.grid = grid;
  const TorusMinimum m = min_abs_on_torus(a, grid);
  r.min_abs = m.value;
  r.argmin = m.point;
  const bool nonvanishing = m.value > vanishing_tolerance(a);
  for (std::size_t axis = 1; axis <= a.dim(); ++axis) {
    std::optional<int> w;
    if (nonvanishing) {
      try {
        w = winding_number(a, axis, grid, TorusPoint(a.dim() - 1, 0.0));
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::symbol_vanishes && e.kind() != ErrorKind::inconsistent_winding) throw;
      }
    }
    r.winding.push_back(w);
  }
  r.sectorial_phase = sectorial_phase(a, grid);
  if (r.sectorial_phase) {
    try {
      r.real_zeros = real_part_zeros(a, grid, default_zero_threshold(a), *r.sectorial_phase);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::non_isolated_zeros) throw;
      r.zeros_non_isolated = true;
    }
  }
  r.separation_radius = separation_radius(r.real_zeros);
  return r;
}

}  // namespace wt
