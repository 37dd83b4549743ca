#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "wt/lattice.hpp"

namespace wt {

/// Point of the torus (-pi, pi]^d.
using TorusPoint = std::vector<double>;

/// Finitely supported real coefficients a_k on Z^d. Zero coefficients are
/// never stored, and at least one coefficient is nonzero.
class ConvolutionVector {
 public:
  ConvolutionVector(std::size_t dim, const std::map<LatticePoint, double>& entries);

  std::size_t dim() const noexcept { return dim_; }
  const std::map<LatticePoint, double>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }

  /// a_k, zero outside the support.
  double coefficient(const LatticePoint& k) const;
  std::vector<LatticePoint> support() const;

  /// Sum of |a_k|; the scale used by all relative tolerances.
  double l1_norm() const noexcept;
  double max_abs() const noexcept;
  /// Largest extent of the support along any single axis.
  int support_diameter() const noexcept;

 private:
  std::size_t dim_;
  std::map<LatticePoint, double> entries_;
};

/// Coefficient convolution; its symbol is the pointwise product of the symbols.
ConvolutionVector convolve(const ConvolutionVector& a, const ConvolutionVector& b);

/// a'_k = a_{k - j0}. The symbol picks up the factor e^{+i<j0,theta>}.
ConvolutionVector translate_vector(const ConvolutionVector& a, const LatticePoint& j0);

/// Reduces an angle into (-pi, pi].
double wrap_angle(double theta) noexcept;

/// i-th sample of the uniform grid on (-pi, pi]: -pi + 2 pi (i+1)/grid.
double grid_angle(std::size_t i, std::size_t grid) noexcept;

std::complex<double> evaluate_symbol(const ConvolutionVector& a, const TorusPoint& theta);

/// Default sampling grid per axis: 256 in one dimension, 128 otherwise.
std::size_t default_grid(std::size_t dim) noexcept;

/// Threshold below which |s_a| counts as vanishing: 1e-9 * sum |a_k|.
double vanishing_tolerance(const ConvolutionVector& a) noexcept;

/// Winding number of theta_axis -> s_a(theta) with the remaining coordinates
/// fixed. `axis` is 1-based; `fixed_coords` has dim-1 entries. The sampling
/// grid doubles until every consecutive phase jump is below pi/2 (cap 2^14
/// samples per circle). In d >= 2 the count is repeated at a second fixed
/// point and must agree.
int winding_number(const ConvolutionVector& a, std::size_t axis, std::size_t grid,
                   const TorusPoint& fixed_coords);

/// Per-axis winding numbers with the other coordinates fixed at 0.
std::vector<int> winding_vector(const ConvolutionVector& a, std::size_t grid);

struct TorusMinimum {
  double value = 0.0;
  TorusPoint point;
};

/// Minimum of |s_a| over the grid^d lattice, followed by one golden-section
/// pass per axis around the grid argmin.
TorusMinimum min_abs_on_torus(const ConvolutionVector& a, std::size_t grid);

/// An angle phi with Re(e^{i phi} s_a) >= -tol on every grid sample, if the
/// sampled values fit in a closed half-plane through the origin. Among valid
/// choices the one of smallest |phi| is returned, ties going to positive phi.
std::optional<double> sectorial_phase(const ConvolutionVector& a, std::size_t grid);

struct RealPartZero {
  TorusPoint location;
  int order = 2;
};

/// Default clustering threshold for real_part_zeros: 1e-2 * sum |a_k|.
double default_zero_threshold(const ConvolutionVector& a) noexcept;

/// Isolated zeros of Re(e^{i phase} s_a). Grid samples below `tol` are
/// clustered into connected components (periodic neighbourhoods); each
/// component's minimizer is refined and kept if the refined value vanishes.
/// Throws non_isolated_zeros when a component spans more than a quarter of an
/// axis.
std::vector<RealPartZero> real_part_zeros(const ConvolutionVector& a, std::size_t grid, double tol,
                                          double phase = 0.0);

/// Euclidean distance on the torus.
double torus_distance(const TorusPoint& x, const TorusPoint& y);

/// delta: half the smallest pairwise zero separation, capped at 1; exactly 1
/// for a single zero and 0 when there are none.
double separation_radius(const std::vector<RealPartZero>& zeros);

/// max_m D_m(n), where D_m(n)^{-1} is the infimum of Re(e^{i phase} s_a) over
/// the annulus 1/n <= |theta - z_m| <= delta. Equal to 1 without zeros.
double d_tilde_bound(const ConvolutionVector& a, double n, const std::vector<RealPartZero>& zeros,
                     double phase = 0.0);

/// D_a(l) = l^{d/2} * d_tilde_bound(2 * 13^{dM} * l).
double d_a_bound(const ConvolutionVector& a, double l, const std::vector<RealPartZero>& zeros,
                 double phase = 0.0);

/// d = 1: the half-line Toeplitz operator is invertible on l^1 iff the symbol
/// does not vanish and has winding number zero.
bool invertibility_criterion_1d(const ConvolutionVector& a);

struct SymbolReport {
  std::size_t dim = 1;
  std::size_t grid = 0;
  double min_abs = 0.0;
  TorusPoint argmin;
  /// One entry per axis; empty where the winding number is undefined.
  std::vector<std::optional<int>> winding;
  std::optional<double> sectorial_phase;
  std::vector<RealPartZero> real_zeros;
  bool zeros_non_isolated = false;
  double separation_radius = 0.0;
};

SymbolReport analyze_symbol(const ConvolutionVector& a, std::size_t grid);

}  // namespace wt
