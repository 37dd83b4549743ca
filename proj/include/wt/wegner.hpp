#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wt/anderson.hpp"
#include "wt/density.hpp"
#include "wt/symbol.hpp"

namespace wt {

/// Var(f) of a density regarded on all of R, so the jumps at both support
/// edges count. Exact for pieces of degree <= 3; throws degree_too_high
/// otherwise (use variation_scan).
double total_variation(const DensitySpec& f);

struct WegnerParams {
  int l = 16;
  std::size_t dim = 1;
  double e = 0.0;
  double eps = 0.1;
  std::size_t samples = 2000;
  std::uint64_t seed = 0;
};

struct WegnerReport {
  WegnerParams params;
  double variation = 0.0;
  double mean_count = 0.0;
  double stderr_count = 0.0;
  /// mean_count / (Var(f) eps l^d); NaN when eps = 0.
  double normalized_constant = 0.0;
  /// Samples aborted by an eigensolver error.
  std::size_t failed_samples = 0;
};

WegnerReport wegner_experiment(const ConvolutionVector& a, const DensitySpec& f, const WegnerParams& p);

/// Reports for every (l, eps) pair, l-major. Each field omega is
/// diagonalized once and counted against every eps. `base` supplies dim, E,
/// samples and seed.
std::vector<WegnerReport> wegner_sweep(const ConvolutionVector& a, const DensitySpec& f, const std::vector<int>& ls,
                                       const std::vector<double>& eps_list, const WegnerParams& base);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double intercept_stderr = 0.0;
  double r2 = 0.0;
};

/// Ordinary least squares y = slope x + intercept with the usual residual
/// standard errors. Needs at least three points.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct LinearityFit {
  std::optional<LineFit> eps;     // mean_count against eps at fixed l
  std::optional<LineFit> volume;  // log mean_count against log l at fixed eps
  double slope_vs_eps() const { return eps->slope; }
  double r2_eps() const { return eps->r2; }
  double exponent_vs_l() const { return volume->slope; }
  double r2_l() const { return volume->r2; }
};

/// Fits whatever the reports allow: the eps fit uses the l with the most
/// distinct eps values, the volume fit the eps with the most distinct l.
/// Throws insufficient_points when neither direction has three points.
LinearityFit linearity_fit(const std::vector<WegnerReport>& reports);

std::string wegner_csv(const std::vector<WegnerReport>& reports);

struct IdsPoint {
  double e = 0.0;
  double n = 0.0;
};

/// (N(E + h) - N(E - h)) / 2h with N linearly interpolated in the table.
/// Throws out_of_grid when E +- h leaves the tabulated range.
double dos_estimate(const std::vector<IdsPoint>& table, double e, double h);
double dos_estimate(const std::vector<IdsRow>& table, double e, double h);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi > lo ? hi - lo : 0.0; }
};

struct AveragingCheckReport {
  double lhs_norm = 0.0;
  double rhs_bound = 0.0;
  double quadrature_error_estimate = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct QuadratureOptions {
  /// Gauss nodes per panel.
  std::size_t points = 16;
  /// Target for the adaptive error estimate.
  double tolerance = 1e-10;
};

/// Spectral projection onto the closed interval J via full eigendecomposition.
Eigen::MatrixXd spectral_projection(const Eigen::MatrixXd& h, const Interval& j);

/// lhs = || int g(s) B E_{H0 + sV}(J) B ds || over the support of g;
/// rhs = ||g||_inf |J| / kappa. The s-range is cut at every s where an
/// eigenvalue of H0 + sV meets an end of J (generalized eigenvalues), so
/// each panel integrates a smooth function. Throws hypothesis_violated
/// unless V - kappa B^2 >= -1e-10.
AveragingCheckReport spectral_average_check(const Eigen::MatrixXd& h0, const Eigen::MatrixXd& v,
                                            const Eigen::MatrixXd& b, double kappa, const PiecewisePolynomial& g,
                                            const Interval& j, const QuadratureOptions& quad = {});

/// lhs = || int F(s) B E_{H(s)}(J) B ds || over (supp f)^n with H(s) =
/// H0 + sum s_i V_i and F = prod f(s_i); rhs = ||t||_1 Var(f) |J| / kappa.
/// Tensor Gauss rule in the outer coordinates, breakpoint-split innermost
/// coordinate. Throws hypothesis_violated unless sum t_i V_i >= kappa B^2.
AveragingCheckReport multiparameter_average_check(const Eigen::MatrixXd& h0, const std::vector<Eigen::MatrixXd>& vs,
                                                  const std::vector<double>& t, const DensitySpec& f, double kappa,
                                                  const Eigen::MatrixXd& b, const Interval& j,
                                                  const QuadratureOptions& quad = {});

struct LogResult {
  Eigen::MatrixXcd value;
  double error_estimate = 0.0;
};

/// log T = -i int_0^inf ((T + i lambda)^-1 - (I + i lambda)^-1) d lambda with
/// lambda = tan(pi u / 2), adaptive Gauss on u in (0, 1) to 1e-8.
/// Throws not_invertible or not_dissipative (Im T >= -1e-10 as a form).
LogResult dissipative_log(const Eigen::MatrixXcd& t, double tol = 1e-8);

struct BirmanSolomyakReport {
  Eigen::MatrixXcd lhs;
  Eigen::MatrixXcd rhs;
  double deviation = 0.0;
  double quadrature_error_estimate = 0.0;
  /// Smallest and largest Im<phi, lhs phi> / (pi ||phi||^2) over the probes.
  double im_ratio_min = 0.0;
  double im_ratio_max = 0.0;
  bool im_bound_pass = true;
};

/// Compares int_{t1}^{t2} V^1/2 (H0 + sV - z)^-1 V^1/2 ds against
/// log(I + (t2 - t1) V^1/2 (H(t1) - z)^-1 V^1/2) and probes
/// 0 <= Im<phi, lhs phi> <= pi ||phi||^2 on `probes` random phi.
BirmanSolomyakReport birman_solomyak_check(const Eigen::MatrixXd& h0, const Eigen::MatrixXd& v, double t1, double t2,
                                           std::complex<double> z, std::size_t probes = 0, std::uint64_t seed = 0);

struct NormComparison {
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

/// ||A1 C A1|| <= ||A2 C A2|| + 1e-9 for PSD A1, A2 with A2^2 >= A1^2.
NormComparison sandwich_norm_check(const Eigen::MatrixXd& a1, const Eigen::MatrixXd& a2, const Eigen::MatrixXd& c);

/// |int phi dg| <= 2 Var(phi) ||g||_inf on [m, M], the common range of phi
/// and g. Requires phi(m) = 0 and g continuous (precondition_violated).
NormComparison stieltjes_bound_check(const PiecewisePolynomial& phi, const PiecewisePolynomial& g);

/// PSD square root via eigendecomposition (negative eigenvalues clipped).
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m);
double operator_norm(const Eigen::MatrixXd& m);
double operator_norm(const Eigen::MatrixXcd& m);

}  // namespace wt

namespace wt {

struct SuiteRow {
  std::string check;
  std::size_t trial = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double error_estimate = 0.0;
  bool pass = false;
};

/// The averaging and operator-identity sweeps on seeded random 3 x 3 data:
/// scalar equality case, `trials` single- and two-parameter averaging
/// checks, sandwich and Stieltjes trials, and min(trials, 20) Birman-Solomyak
/// comparisons with 100 probes each (lhs = deviation, rhs = 1e-6).
std::vector<SuiteRow> averaging_suite(std::uint64_t seed, std::size_t trials);

std::string suite_csv(const std::vector<SuiteRow>& rows);

}  // namespace wt
