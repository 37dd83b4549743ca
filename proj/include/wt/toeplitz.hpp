#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "wt/lattice.hpp"
#include "wt/symbol.hpp"

namespace wt {

enum class IndexSetKind { cube, quarter_cone, polygon, custom };

std::string_view to_string(IndexSetKind kind) noexcept;

/// Ordered finite set of distinct lattice points of one dimension.
class IndexSet {
 public:
  IndexSet(std::size_t dim, std::vector<LatticePoint> points, IndexSetKind provenance = IndexSetKind::custom);

  /// {0, ..., n-1}^d.
  static IndexSet cube(std::size_t dim, int n);
  /// {0, ..., n}^2, the corner of the quarter plane.
  static IndexSet quarter_square(int n);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return points_.size(); }
  const std::vector<LatticePoint>& points() const noexcept { return points_; }
  const LatticePoint& operator[](std::size_t i) const { return points_[i]; }
  IndexSetKind provenance() const noexcept { return provenance_; }

  std::optional<std::size_t> find(const LatticePoint& p) const;
  bool contains(const LatticePoint& p) const { return find(p).has_value(); }
  IndexSet translated(const LatticePoint& shift) const;

 private:
  std::size_t dim_;
  std::vector<LatticePoint> points_;
  IndexSetKind provenance_;
  std::vector<std::size_t> sorted_;  // permutation sorting points_, for lookup
};

namespace detail {
struct SectionFactors {
  std::once_flag once;
  std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> lu;
  bool singular = false;
  std::string reason;
};
}  // namespace detail

/// Compression of the Laurent matrix {a_{j-k}} to an index set: entry (p, q)
/// is a_{j_p - j_q}.
///
/// The matrix is stored as dense blocks, one per connected component of the
/// graph linking index points whose difference lies in the support of a (or
/// its negative). Up to a permutation the section is block diagonal over these
/// components, so solves and inverse norms are computed blockwise. One LU
/// factorization per block is built on first use and shared read-only by
/// copies of the section.
class FiniteSection {
 public:
  struct Block {
    std::vector<std::size_t> members;  // positions in the index set, increasing
    Eigen::MatrixXd matrix;
  };

  const IndexSet& index_set() const noexcept { return set_; }
  std::size_t order() const noexcept { return set_.size(); }
  const std::vector<Block>& blocks() const noexcept { return blocks_; }
  /// Block containing position p, and p's row inside that block.
  std::pair<std::size_t, std::size_t> locate(std::size_t p) const { return position_[p]; }

  double entry(std::size_t p, std::size_t q) const;
  /// Full N x N matrix.
  Eigen::MatrixXd dense() const;
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  /// Max column sum of |entries|.
  double norm_l1() const;

  /// Pivot magnitude below which the section is declared singular.
  double singular_threshold() const noexcept { return 1e-12 * coefficient_scale_; }
  /// sum |a_k| of the generating vector.
  double coefficient_l1() const noexcept { return coefficient_l1_; }

  /// Throws singular_section if some block has a pivot below threshold.
  const detail::SectionFactors& factors() const;
  bool is_singular() const;

 private:
  friend FiniteSection build_section(const ConvolutionVector& a, const IndexSet& s);
  FiniteSection(IndexSet set, double scale, double l1);

  IndexSet set_;
  double coefficient_scale_;
  double coefficient_l1_;
  std::vector<Block> blocks_;
  std::vector<std::pair<std::size_t, std::size_t>> position_;
  std::shared_ptr<detail::SectionFactors> factors_;
};

FiniteSection build_section(const ConvolutionVector& a, const IndexSet& s);

/// Solution t of T t = delta_j, as a vector over the whole index set.
Eigen::VectorXd solve_delta_system(const FiniteSection& t, const LatticePoint& j);

/// ||T^{-1}||_{1->1}: the largest l1 norm among the delta-column solutions.
double inverse_norm_l1(const FiniteSection& t);

/// ||T^{-1}||_{2->2} = 1/sigma_min by inverse iteration on T^T T, run on a
/// four-vector block with Rayleigh-Ritz (all-ones start vector plus low cosine
/// modes, relative tolerance 1e-8, at most 500 iterations).
double inverse_norm_l2(const FiniteSection& t);

struct StabilityRow {
  std::size_t n = 0;
  std::string label;
  double inv_norm_l1 = 0.0;
  double inv_norm_l2 = 0.0;
  /// ||T||_{1->1} of the section itself.
  double max_column_l1 = 0.0;
  std::string status = "ok";
};

/// One row per index set; singular sections are recorded as `inf` with status
/// singular-section instead of aborting.
std::vector<StabilityRow> stability_scan(const ConvolutionVector& a, const std::vector<IndexSet>& family,
                                         const std::vector<std::string>& labels = {});

/// CSV with header `N,n_label,inv_norm_l1,inv_norm_l2,status`.
std::string stability_csv(const std::vector<StabilityRow>& rows);

struct Hypothesis4Report {
  double max_l1 = 0.0;
  double residual = 0.0;
  bool pass = false;
};

/// Solves T_Sigma t(j) = delta_j for each j in `inner` and reports the largest
/// l1 norm and residual. `inner` must be a subset of `sigma`.
Hypothesis4Report verify_hypothesis4(const ConvolutionVector& a, const IndexSet& inner, const IndexSet& sigma);

}  // namespace wt
