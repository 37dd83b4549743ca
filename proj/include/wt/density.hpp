#pragma once

#include <cstddef>
#include <vector>

namespace wt {

/// Coefficients c_0 + c_1 x + ... in the absolute variable x.
using Polynomial = std::vector<double>;

double poly_eval(const Polynomial& p, double x) noexcept;
Polynomial poly_derivative(const Polynomial& p);
/// Antiderivative vanishing at x = 0.
Polynomial poly_antiderivative(const Polynomial& p);
Polynomial poly_mul(const Polynomial& p, const Polynomial& q);
/// Degree ignoring trailing zero coefficients; 0 for the zero polynomial.
std::size_t poly_degree(const Polynomial& p) noexcept;

/// Sorted interior points of (lo, hi) where p' changes sign or vanishes.
/// Exact (closed-form roots of p') for degree <= 3; throws degree_too_high
/// above that.
std::vector<double> critical_points(const Polynomial& p, double lo, double hi);

struct PolynomialPiece {
  double lo = 0.0;
  double hi = 1.0;
  Polynomial coeffs;
};

/// Function that is polynomial on finitely many disjoint intervals and zero
/// elsewhere. Pieces are sorted with lo < hi <= next lo.
class PiecewisePolynomial {
 public:
  PiecewisePolynomial() = default;
  explicit PiecewisePolynomial(std::vector<PolynomialPiece> pieces);

  const std::vector<PolynomialPiece>& pieces() const noexcept { return pieces_; }
  double lower() const { return pieces_.front().lo; }
  double upper() const { return pieces_.back().hi; }
  std::size_t degree() const noexcept;

  /// Pieces are half open [lo, hi) except the last, which is closed.
  double operator()(double x) const noexcept;
  double integral() const;
  /// Restriction of the function to one piece, evaluated at a point of
  /// [lo, hi] (one-sided limits at the ends).
  double piece_value(std::size_t i, double x) const noexcept { return poly_eval(pieces_[i].coeffs, x); }

 private:
  std::vector<PolynomialPiece> pieces_;
};

/// Total variation over [lower, upper]: monotone pieces between critical
/// points plus jumps at shared or gapped piece boundaries. With
/// `include_edges` the function is regarded on all of R, so the jumps from
/// and to zero at the two outer ends count as well. Exact for degree <= 3.
double variation(const PiecewisePolynomial& f, bool include_edges);

struct VariationScan {
  double value = 0.0;
  /// Spacing of the scan grid on each piece.
  double resolution = 0.0;
};

/// Fallback for any degree: sum of |f(x_{i+1}) - f(x_i)| over `points`
/// equispaced samples per piece plus the same boundary jumps.
VariationScan variation_scan(const PiecewisePolynomial& f, bool include_edges, std::size_t points = 10000);

/// sup |f| over the pieces (critical points for degree <= 3, else a scan).
double sup_abs(const PiecewisePolynomial& f);

/// Probability density given piecewise, with min supp f = 0.
class DensitySpec {
 public:
  /// Throws invalid_density unless f >= 0 on each piece, the integral is 1
  /// within 1e-9 and the lowest piece starts at 0.
  explicit DensitySpec(PiecewisePolynomial f);

  /// Constant density on [0, width].
  static DensitySpec uniform(double width);

  const PiecewisePolynomial& function() const noexcept { return f_; }
  double support_min() const { return f_.lower(); }
  double support_max() const { return f_.upper(); }

  double pdf(double x) const noexcept { return f_(x); }
  double cdf(double x) const;
  /// Inverse CDF by bisection inside the piece holding u, to 1e-12 in x.
  double quantile(double u) const;

 private:
  PiecewisePolynomial f_;
  std::vector<double> cumulative_;  // mass below each piece's lo
};

}  // namespace wt
