#include "wt/toeplitz.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <numeric>
#include <sstream>

#include "wt/error.hpp"
#include "wt/format.hpp"

namespace wt {

std::string_view to_string(IndexSetKind kind) noexcept {
  switch (kind) {
    case IndexSetKind::cube: return "cube";
    case IndexSetKind::quarter_cone: return "quarter-cone";
    case IndexSetKind::polygon: return "polygon";
    case IndexSetKind::custom: return "custom";
  }
  return "custom";
}

IndexSet::IndexSet(std::size_t dim, std::vector<LatticePoint> points, IndexSetKind provenance)
    : dim_(dim), points_(std::move(points)), provenance_(provenance) {
  if (dim_ == 0) throw Error(ErrorKind::invalid_input, "index set dimension must be positive");
  if (points_.empty()) throw Error(ErrorKind::invalid_input, "index set is empty");
  for (const auto& p : points_) {
    if (p.dim() != dim_) throw Error(ErrorKind::dimension_mismatch, "index point " + p.str());
  }
  sorted_.resize(points_.size());
  std::iota(sorted_.begin(), sorted_.end(), std::size_t{0});
  std::sort(sorted_.begin(), sorted_.end(),
            [&](std::size_t x, std::size_t y) { return points_[x] < points_[y]; });
  for (std::size_t i = 1; i < sorted_.size(); ++i) {
    if (points_[sorted_[i]] == points_[sorted_[i - 1]]) {
      throw Error(ErrorKind::invalid_input, "duplicate index point " + points_[sorted_[i]].str());
    }
  }
}

IndexSet IndexSet::cube(std::size_t dim, int n) {
  if (n < 1) throw Error(ErrorKind::invalid_input, "cube side must be positive");
  std::vector<LatticePoint> pts;
  LatticePoint p(dim);
  for (;;) {
    pts.push_back(p);
    std::size_t axis = dim;
    // Last coordinate varies fastest: lexicographic order.
    while (axis-- > 0) {
      if (++p[axis] < n) break;
      p[axis] = 0;
      if (axis == 0) return IndexSet(dim, std::move(pts), IndexSetKind::cube);
    }
  }
}

IndexSet IndexSet::quarter_square(int n) {
  if (n < 0) throw Error(ErrorKind::invalid_input, "quarter square size must be nonnegative");
  std::vector<LatticePoint> pts;
  for (int x = 0; x <= n; ++x) {
    for (int y = 0; y <= n; ++y) pts.push_back({x, y});
  }
  return IndexSet(2, std::move(pts), IndexSetKind::quarter_cone);
}

std::optional<std::size_t> IndexSet::find(const LatticePoint& p) const {
  const auto it = std::lower_bound(sorted_.begin(), sorted_.end(), p,
                                   [&](std::size_t i, const LatticePoint& q) { return points_[i] < q; });
  if (it != sorted_.end() && points_[*it] == p) return *it;
  return std::nullopt;
}

IndexSet IndexSet::translated(const LatticePoint& shift) const {
  std::vector<LatticePoint> pts;
  pts.reserve(points_.size());
  for (const auto& p : points_) pts.push_back(p + shift);
  return IndexSet(dim_, std::move(pts), provenance_);
}

FiniteSection::FiniteSection(IndexSet set, double scale, double l1)
    : set_(std::move(set)),
      coefficient_scale_(scale),
      coefficient_l1_(l1),
      factors_(std::make_shared<detail::SectionFactors>()) {}

FiniteSection build_section(const ConvolutionVector& a, const IndexSet& s) {
  if (a.dim() != s.dim()) throw Error(ErrorKind::dimension_mismatch, "build_section");
  FiniteSection section(s, a.max_abs(), a.l1_norm());
  const std::size_t n = s.size();

  // Union-find over positions linked by a support difference.
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto root = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  // neighbours[p]: (q, a_{j_p - j_q}) for every q in the set.
  std::vector<std::vector<std::pair<std::size_t, double>>> neighbours(n);
  for (std::size_t p = 0; p < n; ++p) {
    for (const auto& [k, v] : a.entries()) {
      if (const auto q = s.find(s[p] - k)) {
        neighbours[p].emplace_back(*q, v);
        const std::size_t rp = root(p);
        const std::size_t rq = root(*q);
        if (rp != rq) parent[std::max(rp, rq)] = std::min(rp, rq);
      }
    }
  }

  std::vector<std::size_t> block_of_root(n, std::numeric_limits<std::size_t>::max());
  section.position_.resize(n);
  for (std::size_t p = 0; p < n; ++p) {
    const std::size_t r = root(p);
    if (block_of_root[r] == std::numeric_limits<std::size_t>::max()) {
      block_of_root[r] = section.blocks_.size();
      section.blocks_.emplace_back();
    }
    auto& block = section.blocks_[block_of_root[r]];
    section.position_[p] = {block_of_root[r], block.members.size()};
    block.members.push_back(p);
  }
  for (auto& block : section.blocks_) {
    const auto m = static_cast<Eigen::Index>(block.members.size());
    block.matrix = Eigen::MatrixXd::Zero(m, m);
  }
  for (std::size_t p = 0; p < n; ++p) {
    const auto [b, row] = section.position_[p];
    for (const auto& [q, v] : neighbours[p]) {
      const std::size_t col = section.position_[q].second;
      section.blocks_[b].matrix(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = v;
    }
  }
  return section;
}

double FiniteSection::entry(std::size_t p, std::size_t q) const {
  const auto [bp, rp] = position_.at(p);
  const auto [bq, rq] = position_.at(q);
  if (bp != bq) return 0.0;
  return blocks_[bp].matrix(static_cast<Eigen::Index>(rp), static_cast<Eigen::Index>(rq));
}

Eigen::MatrixXd FiniteSection::dense() const {
  const auto n = static_cast<Eigen::Index>(order());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (const auto& block : blocks_) {
    for (std::size_t r = 0; r < block.members.size(); ++r) {
      for (std::size_t c = 0; c < block.members.size(); ++c) {
        m(static_cast<Eigen::Index>(block.members[r]), static_cast<Eigen::Index>(block.members[c])) =
            block.matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      }
    }
  }
  return m;
}

Eigen::VectorXd FiniteSection::apply(const Eigen::VectorXd& x) const {
  if (static_cast<std::size_t>(x.size()) != order()) throw Error(ErrorKind::size_mismatch, "section apply");
  Eigen::VectorXd y = Eigen::VectorXd::Zero(x.size());
  for (const auto& block : blocks_) {
    const auto m = static_cast<Eigen::Index>(block.members.size());
    Eigen::VectorXd local(m);
    for (Eigen::Index i = 0; i < m; ++i) local(i) = x(static_cast<Eigen::Index>(block.members[i]));
    const Eigen::VectorXd out = block.matrix * local;
    for (Eigen::Index i = 0; i < m; ++i) y(static_cast<Eigen::Index>(block.members[i])) = out(i);
  }
  return y;
}

double FiniteSection::norm_l1() const {
  double best = 0.0;
  for (const auto& block : blocks_) {
    if (block.matrix.size() > 0) best = std::max(best, block.matrix.cwiseAbs().colwise().sum().maxCoeff());
  }
  return best;
}

const detail::SectionFactors& FiniteSection::factors() const {
  auto& f = *factors_;
  std::call_once(f.once, [&] {
    f.lu.reserve(blocks_.size());
    const double threshold = singular_threshold();
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      f.lu.emplace_back(blocks_[b].matrix);
      const Eigen::VectorXd pivots = f.lu.back().matrixLU().diagonal().cwiseAbs();
      Eigen::Index where = 0;
      const double smallest = pivots.minCoeff(&where);
      if (!f.singular && !(smallest >= threshold)) {
        f.singular = true;
        f.reason = "pivot " + format_double(smallest) + " below threshold " + format_double(threshold) +
                   " at index point " + set_[blocks_[b].members.front()].str() + " block";
      }
    }
  });
  if (f.singular) throw Error(ErrorKind::singular_section, f.reason);
  return f;
}

bool FiniteSection::is_singular() const {
  try {
    factors();
    return false;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::singular_section) return true;
    throw;
  }
}

Eigen::VectorXd solve_delta_system(const FiniteSection& t, const LatticePoint& j) {
  const auto pos = t.index_set().find(j);
  if (!pos) throw Error(ErrorKind::invalid_input, "point " + j.str() + " is not in the index set");
  const auto& f = t.factors();
  const auto [b, row] = t.locate(*pos);
  const auto& block = t.blocks()[b];
  const auto m = static_cast<Eigen::Index>(block.members.size());
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
  rhs(static_cast<Eigen::Index>(row)) = 1.0;
  const Eigen::VectorXd local = f.lu[b].solve(rhs);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(t.order()));
  for (Eigen::Index i = 0; i < m; ++i) out(static_cast<Eigen::Index>(block.members[i])) = local(i);
  return out;
}

double inverse_norm_l1(const FiniteSection& t) {
  const auto& f = t.factors();
  double best = 0.0;
  for (std::size_t b = 0; b < t.blocks().size(); ++b) {
    const auto m = t.blocks()[b].matrix.rows();
    const Eigen::MatrixXd inv = f.lu[b].solve(Eigen::MatrixXd::Identity(m, m));
    best = std::max(best, inv.cwiseAbs().colwise().sum().maxCoeff());
  }
  return best;
}

double inverse_norm_l2(const FiniteSection& t) {
  const auto& f = t.factors();
  constexpr int kMaxIterations = 500;
  constexpr double kTolerance = 1e-8;
  constexpr Eigen::Index kSubspace = 4;
  double best = 0.0;
  for (std::size_t b = 0; b < t.blocks().size(); ++b) {
    const auto& lu = f.lu[b];
    const auto m = t.blocks()[b].matrix.rows();
    const Eigen::Index p = std::min(m, kSubspace);
    // Block inverse iteration on (T^T T)^{-1}: all-ones start plus the lowest
    // cosine modes, Rayleigh-Ritz every step. The block keeps clustered
    // small singular values from stalling the iteration.
    Eigen::MatrixXd x(m, p);
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index k = 0; k < p; ++k) {
        x(i, k) = std::cos(std::numbers::pi * static_cast<double>(k) * (static_cast<double>(i) + 0.5) / static_cast<double>(m));
      }
    }
    Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(x).householderQ() * Eigen::MatrixXd::Identity(m, p);
    if (q.col(0).sum() < 0) q.col(0) *= -1.0;
    double mu = 0.0;
    bool converged = false;
    for (int it = 0; it < kMaxIterations; ++it) {
      const Eigen::MatrixXd z = lu.transpose().solve(q);  // T^{-T} Q
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz(z.transpose() * z);
      const double next = ritz.eigenvalues()(p - 1);  // largest Ritz value of (T^T T)^{-1}
      if (it > 0 && std::abs(next - mu) <= kTolerance * next) {
        mu = next;
        converged = true;
        break;
      }
      mu = next;
      const Eigen::MatrixXd y = lu.solve(z * ritz.eigenvectors());
      q = Eigen::HouseholderQR<Eigen::MatrixXd>(y).householderQ() * Eigen::MatrixXd::Identity(m, p);
    }
    if (!converged) {
      throw Error(ErrorKind::no_convergence, "inverse iteration did not converge in 500 steps");
    }
    best = std::max(best, std::sqrt(mu));
  }
  return best;
}

std::vector<StabilityRow> stability_scan(const ConvolutionVector& a, const std::vector<IndexSet>& family,
                                         const std::vector<std::string>& labels) {
  if (!labels.empty() && labels.size() != family.size()) {
    throw Error(ErrorKind::size_mismatch, "one label per index set required");
  }
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<StabilityRow> rows;
  rows.reserve(family.size());
  for (std::size_t i = 0; i < family.size(); ++i) {
    StabilityRow row;
    row.n = family[i].size();
    row.label = labels.empty() ? std::to_string(i) : labels[i];
    const FiniteSection section = build_section(a, family[i]);
    row.max_column_l1 = section.norm_l1();
    try {
      row.inv_norm_l1 = inverse_norm_l1(section);
      try {
        row.inv_norm_l2 = inverse_norm_l2(section);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::no_convergence) throw;
        row.inv_norm_l2 = std::numeric_limits<double>::quiet_NaN();
        row.status = std::string(to_string(e.kind()));
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::singular_section) throw;
      row.inv_norm_l1 = kInf;
      row.inv_norm_l2 = kInf;
      row.status = std::string(to_string(e.kind()));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string stability_csv(const std::vector<StabilityRow>& rows) {
  std::ostringstream out;
  out << "N,n_label,inv_norm_l1,inv_norm_l2,status\n";
  for (const auto& r : rows) {
    out << r.n << ',' << r.label << ',' << format_double(r.inv_norm_l1) << ',' << format_double(r.inv_norm_l2)
        << ',' << r.status << '\n';
  }
  return out.str();
}

Hypothesis4Report verify_hypothesis4(const ConvolutionVector& a, const IndexSet& inner, const IndexSet& sigma) {
  if (inner.dim() != sigma.dim()) throw Error(ErrorKind::dimension_mismatch, "verify_hypothesis4");
  for (const auto& p : inner.points()) {
    if (!sigma.contains(p)) throw Error(ErrorKind::invalid_input, "inner set is not contained in Sigma");
  }
  const FiniteSection section = build_section(a, sigma);
  Hypothesis4Report report;
  report.pass = true;
  for (const auto& j : inner.points()) {
    const Eigen::VectorXd t = solve_delta_system(section, j);
    Eigen::VectorXd residual = section.apply(t);
    residual(static_cast<Eigen::Index>(*sigma.find(j))) -= 1.0;
    const double res = residual.cwiseAbs().maxCoeff();
    report.max_l1 = std::max(report.max_l1, t.cwiseAbs().sum());
    report.residual = std::max(report.residual, res);
    if (!(res <= 1e-8)) report.pass = false;
  }
  return report;
}

}  // namespace wt
