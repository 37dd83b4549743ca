#include "wt/wegner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>

#include "wt/error.hpp"
#include "wt/format.hpp"
#include "wt/philox.hpp"
#include "wt/quadrature.hpp"

namespace wt {

double total_variation(const DensitySpec& f) { return variation(f.function(), true); }

std::vector<WegnerReport> wegner_sweep(const ConvolutionVector& a, const DensitySpec& f, const std::vector<int>& ls,
                                       const std::vector<double>& eps_list, const WegnerParams& base) {
  if (base.samples < 1) throw Error(ErrorKind::invalid_input, "samples must be at least 1");
  for (double eps : eps_list) {
    if (!(eps >= 0.0)) throw Error(ErrorKind::invalid_input, "eps must be nonnegative");
  }
  const double var = total_variation(f);
  std::vector<WegnerReport> out;
  for (int l : ls) {
    const PeriodicHamiltonian h0 = build_free_hamiltonian(l, base.dim);
    std::vector<std::vector<double>> counts(eps_list.size());
    std::size_t failed = 0;
    for (std::size_t s = 0; s < base.samples; ++s) {
      std::vector<double> eigs;
      try {
        const CouplingField omega = sample_couplings(f, l, base.dim, base.seed, s);
        eigs = eigenvalues(assemble_hamiltonian(h0, build_potential(a, omega).values));
      } catch (const Error& err) {
        if (err.kind() != ErrorKind::no_convergence) throw;
        ++failed;
        continue;
      }
      for (std::size_t k = 0; k < eps_list.size(); ++k) {
        counts[k].push_back(static_cast<double>(count_in_interval(eigs, base.e, eps_list[k])));
      }
    }
    const double volume = static_cast<double>(torus_volume(l, base.dim));
    for (std::size_t k = 0; k < eps_list.size(); ++k) {
      WegnerReport r;
      r.params = base;
      r.params.l = l;
      r.params.eps = eps_list[k];
      r.variation = var;
      const SampleStats st = sample_stats(counts[k]);
      r.mean_count = st.mean;
      r.stderr_count = st.stderr_mean;
      r.normalized_constant = eps_list[k] > 0.0 ? st.mean / (var * eps_list[k] * volume)
                                                : std::numeric_limits<double>::quiet_NaN();
      r.failed_samples = failed;
      out.push_back(r);
    }
  }
  return out;
}

WegnerReport wegner_experiment(const ConvolutionVector& a, const DensitySpec& f, const WegnerParams& p) {
  return wegner_sweep(a, f, {p.l}, {p.eps}, p).front();
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw Error(ErrorKind::size_mismatch, "x and y differ in length");
  const std::size_t n = x.size();
  if (n < 3) throw Error(ErrorKind::insufficient_points, "a line fit needs at least three points");
  const double xm = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  const double ym = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - xm) * (x[i] - xm);
    sxy += (x[i] - xm) * (y[i] - ym);
    syy += (y[i] - ym) * (y[i] - ym);
  }
  if (!(sxx > 0.0)) throw Error(ErrorKind::insufficient_points, "fit needs at least two distinct x values");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = ym - fit.slope * xm;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - fit.intercept - fit.slope * x[i];
    rss += r * r;
  }
  const double s2 = rss / static_cast<double>(n - 2);
  fit.slope_stderr = std::sqrt(s2 / sxx);
  fit.intercept_stderr = std::sqrt(s2 * (1.0 / static_cast<double>(n) + xm * xm / sxx));
  fit.r2 = syy > 0.0 ? 1.0 - rss / syy : 1.0;
  return fit;
}

LinearityFit linearity_fit(const std::vector<WegnerReport>& reports) {
  std::map<int, std::map<double, double>> by_l;
  std::map<double, std::map<int, double>> by_eps;
  for (const auto& r : reports) {
    by_l[r.params.l][r.params.eps] = r.mean_count;
    by_eps[r.params.eps][r.params.l] = r.mean_count;
  }
  LinearityFit fit;
  const std::map<double, double>* best_eps = nullptr;
  for (const auto& [l, m] : by_l) {
    if (!best_eps || m.size() > best_eps->size()) best_eps = &m;
  }
  if (best_eps && best_eps->size() >= 3) {
    std::vector<double> x, y;
    for (const auto& [eps, c] : *best_eps) {
      x.push_back(eps);
      y.push_back(c);
    }
    fit.eps = fit_line(x, y);
  }
  const std::map<int, double>* best_l = nullptr;
  for (const auto& [eps, m] : by_eps) {
    if (!best_l || m.size() > best_l->size()) best_l = &m;
  }
  if (best_l && best_l->size() >= 3) {
    std::vector<double> x, y;
    for (const auto& [l, c] : *best_l) {
      if (!(c > 0.0)) throw Error(ErrorKind::invalid_input, "volume fit needs positive mean counts");
      x.push_back(std::log(static_cast<double>(l)));
      y.push_back(std::log(c));
    }
    fit.volume = fit_line(x, y);
  }
  if (!fit.eps && !fit.volume) {
    throw Error(ErrorKind::insufficient_points, "need three eps values at one l or three l values at one eps");
  }
  return fit;
}

std::string wegner_csv(const std::vector<WegnerReport>& reports) {
  std::ostringstream out;
  out << "l,dim,E,eps,samples,seed,var_f,mean_count,stderr,normalized_constant,failed_samples\n";
  for (const auto& r : reports) {
    out << r.params.l << ',' << r.params.dim << ',' << format_double(r.params.e) << ','
        << format_double(r.params.eps) << ',' << r.params.samples << ',' << r.params.seed << ','
        << format_double(r.variation) << ',' << format_double(r.mean_count) << ',' << format_double(r.stderr_count)
        << ',' << format_double(r.normalized_constant) << ',' << r.failed_samples << '\n';
  }
  return out.str();
}

double dos_estimate(const std::vector<IdsPoint>& table, double e, double h) {
  if (!(h > 0.0)) throw Error(ErrorKind::invalid_input, "bandwidth must be positive");
  if (table.size() < 2) throw Error(ErrorKind::out_of_grid, "table needs at least two points");
  if (e - h < table.front().e || e + h > table.back().e) {
    throw Error(ErrorKind::out_of_grid, "E +- h leaves the tabulated range");
  }
  auto interp = [&](double x) {
    auto it = std::lower_bound(table.begin(), table.end(), x, [](const IdsPoint& p, double v) { return p.e < v; });
    if (it == table.begin()) return it->n;
    const auto& hi = *it;
    const auto& lo = *std::prev(it);
    if (hi.e == x) return hi.n;
    return lo.n + (hi.n - lo.n) * (x - lo.e) / (hi.e - lo.e);
  };
  return (interp(e + h) - interp(e - h)) / (2.0 * h);
}

double dos_estimate(const std::vector<IdsRow>& table, double e, double h) {
  std::vector<IdsPoint> pts;
  pts.reserve(table.size());
  for (const auto& r : table) pts.push_back({r.e, r.n});
  return dos_estimate(pts, e, h);
}

Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  const Eigen::VectorXd d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

double operator_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues()(0);
}

double operator_norm(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues()(0);
}

Eigen::MatrixXd spectral_projection(const Eigen::MatrixXd& h, const Interval& j) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::no_convergence, "symmetric eigensolver did not converge");
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(h.rows(), h.cols());
  for (Eigen::Index k = 0; k < h.rows(); ++k) {
    const double lam = es.eigenvalues()(k);
    if (lam >= j.lo && lam <= j.hi) p += es.eigenvectors().col(k) * es.eigenvectors().col(k).transpose();
  }
  return p;
}

namespace {

double min_eigenvalue(const Eigen::MatrixXd& m) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly)
      .eigenvalues()(0);
}

// Parameters s in (lo, hi) where H + sV has an eigenvalue at E:
// (E - H) x = s V x.
std::vector<double> crossing_parameters(const Eigen::MatrixXd& h, const Eigen::MatrixXd& v, double e, double lo,
                                        double hi) {
  const Eigen::Index n = h.rows();
  const Eigen::MatrixXd a = e * Eigen::MatrixXd::Identity(n, n) - h;
  Eigen::GeneralizedEigenSolver<Eigen::MatrixXd> ges(a, v, false);
  std::vector<double> out;
  for (Eigen::Index k = 0; k < n; ++k) {
    const std::complex<double> alpha = ges.alphas()(k);
    const double beta = ges.betas()(k);
    if (std::abs(beta) <= 1e-13 * std::abs(alpha)) continue;  // infinite eigenvalue
    const std::complex<double> s = alpha / beta;
    if (std::abs(s.imag()) > 1e-8 * (1.0 + std::abs(s.real()))) continue;
    if (s.real() > lo && s.real() < hi) out.push_back(s.real());
  }
  return out;
}

double frobenius(const Eigen::MatrixXd& m) { return m.norm(); }

struct MatrixIntegral {
  Eigen::MatrixXd value;
  double error = 0.0;
};

// int_{supp g} g(s) B E_{H + sV}(J) B ds, split at the pieces of g and at
// every crossing of an end of J.
MatrixIntegral average_1d(const Eigen::MatrixXd& h, const Eigen::MatrixXd& v, const Eigen::MatrixXd& b,
                          const PiecewisePolynomial& g, const Interval& j, const GaussRule& rule, double tol) {
  MatrixIntegral out{Eigen::MatrixXd::Zero(h.rows(), h.cols()), 0.0};
  const double total = g.upper() - g.lower();
  for (std::size_t pi = 0; pi < g.pieces().size(); ++pi) {
    const auto& pc = g.pieces()[pi];
    std::vector<double> cuts{pc.lo, pc.hi};
    for (double e : {j.lo, j.hi}) {
      for (double s : crossing_parameters(h, v, e, pc.lo, pc.hi)) cuts.push_back(s);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      const double lo = cuts[c], hi = cuts[c + 1];
      if (!(hi > lo)) continue;
      auto integrand = [&](double s) -> Eigen::MatrixXd {
        return poly_eval(pc.coeffs, s) * (b * spectral_projection(h + s * v, j) * b);
      };
      const auto res = adaptive_gauss(integrand, lo, hi, tol * (hi - lo) / total, rule, frobenius, 30);
      out.value += res.value;
      out.error += res.error_estimate;
    }
  }
  return out;
}

// Rounding allowance added to every quadrature error estimate.
double rounding_floor(double scale) { return 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, scale); }

void check_square(const Eigen::MatrixXd& m, Eigen::Index n, const char* what) {
  if (m.rows() != n || m.cols() != n) throw Error(ErrorKind::size_mismatch, std::string(what) + " has the wrong size");
}

}  // namespace

AveragingCheckReport spectral_average_check(const Eigen::MatrixXd& h0, const Eigen::MatrixXd& v,
                                            const Eigen::MatrixXd& b, double kappa, const PiecewisePolynomial& g,
                                            const Interval& j, const QuadratureOptions& quad) {
  const Eigen::Index n = h0.rows();
  check_square(h0, n, "H0");
  check_square(v, n, "V");
  check_square(b, n, "B");
  if (!(kappa > 0.0)) throw Error(ErrorKind::invalid_input, "kappa must be positive");
  if (min_eigenvalue(v - kappa * b * b) < -1e-10) {
    throw Error(ErrorKind::hypothesis_violated, "kappa B^2 <= V fails");
  }
  for (const auto& pc : g.pieces()) {
    if (std::min(poly_eval(pc.coeffs, pc.lo), poly_eval(pc.coeffs, pc.hi)) < 0.0) {
      throw Error(ErrorKind::invalid_input, "g must be nonnegative");
    }
  }
  AveragingCheckReport rep;
  rep.rhs_bound = sup_abs(g) * j.length() / kappa;
  rep.tolerance = quad.tolerance;
  if (j.length() > 0.0) {
    const MatrixIntegral in = average_1d(h0, v, b, g, j, gauss_legendre(quad.points), quad.tolerance);
    rep.lhs_norm = operator_norm(in.value);
    rep.quadrature_error_estimate = in.error;
  }
  rep.quadrature_error_estimate += rounding_floor(rep.lhs_norm);
  rep.pass = rep.lhs_norm <= rep.rhs_bound + rep.quadrature_error_estimate;
  return rep;
}

namespace {

// Outer coordinates by composite Gauss over every piece of f, innermost by
// average_1d.
Eigen::MatrixXd average_nd(std::size_t level, const Eigen::MatrixXd& h, const std::vector<Eigen::MatrixXd>& vs,
                           const Eigen::MatrixXd& b, const DensitySpec& f, const Interval& j, const GaussRule& rule,
                           std::size_t panels, double tol, double& inner_error) {
  if (level + 1 == vs.size()) {
    const MatrixIntegral in = average_1d(h, vs[level], b, f.function(), j, rule, tol);
    inner_error += in.error;
    return in.value;
  }
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(h.rows(), h.cols());
  for (const auto& pc : f.function().pieces()) {
    const double w = (pc.hi - pc.lo) / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
      const double lo = pc.lo + w * static_cast<double>(p);
      for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        const double s = lo + 0.5 * w * (rule.nodes[k] + 1.0);
        const double weight = 0.5 * w * rule.weights[k] * poly_eval(pc.coeffs, s);
        if (weight == 0.0) continue;
        acc += weight * average_nd(level + 1, h + s * vs[level], vs, b, f, j, rule, panels, tol, inner_error);
      }
    }
  }
  return acc;
}

}  // namespace

AveragingCheckReport multiparameter_average_check(const Eigen::MatrixXd& h0, const std::vector<Eigen::MatrixXd>& vs,
                                                  const std::vector<double>& t, const DensitySpec& f, double kappa,
                                                  const Eigen::MatrixXd& b, const Interval& j,
                                                  const QuadratureOptions& quad) {
  const Eigen::Index n = h0.rows();
  check_square(h0, n, "H0");
  check_square(b, n, "B");
  if (vs.empty()) throw Error(ErrorKind::invalid_input, "need at least one coupling matrix");
  if (vs.size() != t.size()) throw Error(ErrorKind::size_mismatch, "t and V_1..V_n differ in length");
  if (!(kappa > 0.0)) throw Error(ErrorKind::invalid_input, "kappa must be positive");
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  double t1 = 0.0;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    check_square(vs[i], n, "V_i");
    w += t[i] * vs[i];
    t1 += std::abs(t[i]);
  }
  if (!(t1 > 0.0)) throw Error(ErrorKind::invalid_input, "t must be nontrivial");
  if (min_eigenvalue(w - kappa * b * b) < -1e-10) {
    throw Error(ErrorKind::hypothesis_violated, "sum t_i V_i >= kappa B^2 fails");
  }
  AveragingCheckReport rep;
  rep.rhs_bound = t1 * total_variation(f) * j.length() / kappa;
  rep.tolerance = quad.tolerance;
  if (j.length() > 0.0) {
    const GaussRule rule = gauss_legendre(quad.points);
    // Outer rule error from one dyadic refinement of the panels.
    double err_coarse = 0.0, err_fine = 0.0;
    const Eigen::MatrixXd coarse = average_nd(0, h0, vs, b, f, j, rule, 2, quad.tolerance, err_coarse);
    const Eigen::MatrixXd fine = average_nd(0, h0, vs, b, f, j, rule, 4, quad.tolerance, err_fine);
    rep.lhs_norm = operator_norm(fine);
    rep.quadrature_error_estimate = (vs.size() > 1 ? operator_norm(Eigen::MatrixXd(fine - coarse)) : 0.0) + err_fine;
  }
  rep.quadrature_error_estimate += rounding_floor(rep.lhs_norm);
  rep.pass = rep.lhs_norm <= rep.rhs_bound + rep.quadrature_error_estimate;
  return rep;
}

LogResult dissipative_log(const Eigen::MatrixXcd& t, double tol) {
  const Eigen::Index n = t.rows();
  if (t.cols() != n || n == 0) throw Error(ErrorKind::size_mismatch, "T must be square and nonempty");
  const Eigen::MatrixXcd im = (t - t.adjoint()) / std::complex<double>(0.0, 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(im, Eigen::EigenvaluesOnly);
  if (es.eigenvalues()(0) < -1e-10) throw Error(ErrorKind::not_dissipative, "Im T is not nonnegative");
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXcd>(t).singularValues();
  if (!(sv(n - 1) > 1e-12 * sv(0))) throw Error(ErrorKind::not_invertible, "T is singular");

  const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(n, n);
  const Eigen::MatrixXcd one_minus_t = eye - t;
  const std::complex<double> i1(0.0, 1.0);
  auto integrand = [&](double u) -> Eigen::MatrixXcd {
    const double c = std::cos(0.5 * std::numbers::pi * u);
    const double lambda = std::sin(0.5 * std::numbers::pi * u) / c;
    const double jac = 0.5 * std::numbers::pi / (c * c);
    // (T + i lambda)^-1 - (1 + i lambda)^-1 = (T + i lambda)^-1 (I - T) / (1 + i lambda)
    const Eigen::MatrixXcd r = (t + i1 * lambda * eye).partialPivLu().solve(one_minus_t);
    return (-i1 * jac / (1.0 + i1 * lambda)) * r;
  };
  auto norm = [](const Eigen::MatrixXcd& m) { return m.norm(); };
  const auto res = adaptive_gauss(integrand, 0.0, 1.0, tol, gauss_legendre(10), norm, 50);
  return {res.value, res.error_estimate};
}

BirmanSolomyakReport birman_solomyak_check(const Eigen::MatrixXd& h0, const Eigen::MatrixXd& v, double t1, double t2,
                                           std::complex<double> z, std::size_t probes, std::uint64_t seed) {
  const Eigen::Index n = h0.rows();
  check_square(h0, n, "H0");
  check_square(v, n, "V");
  if (!(z.imag() > 0.0)) throw Error(ErrorKind::invalid_input, "Im z must be positive");
  if (!(t2 >= t1)) throw Error(ErrorKind::invalid_input, "need t1 <= t2");
  if (min_eigenvalue(v) < -1e-10) throw Error(ErrorKind::invalid_input, "V must be positive semidefinite");
  const Eigen::MatrixXcd vh = psd_sqrt(v).cast<std::complex<double>>();
  const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(n, n);
  auto resolvent_sandwich = [&](double s) -> Eigen::MatrixXcd {
    const Eigen::MatrixXcd hz = (h0 + s * v).cast<std::complex<double>>() - z * eye;
    return vh * hz.partialPivLu().solve(vh);
  };

  BirmanSolomyakReport rep;
  rep.lhs = Eigen::MatrixXcd::Zero(n, n);
  if (t2 > t1) {
    auto norm = [](const Eigen::MatrixXcd& m) { return m.norm(); };
    const auto res = adaptive_gauss(resolvent_sandwich, t1, t2, 1e-11, gauss_legendre(10), norm, 40);
    rep.lhs = res.value;
    rep.quadrature_error_estimate = res.error_estimate;
  }
  const LogResult lg = dissipative_log(eye + (t2 - t1) * resolvent_sandwich(t1), 1e-10);
  rep.rhs = lg.value;
  rep.quadrature_error_estimate += lg.error_estimate;
  rep.deviation = operator_norm(Eigen::MatrixXcd(rep.lhs - rep.rhs));

  rep.im_ratio_min = std::numeric_limits<double>::infinity();
  rep.im_ratio_max = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < probes; ++k) {
    CounterStream rng(seed, k);
    Eigen::VectorXcd phi(n);
    for (Eigen::Index i = 0; i < n; ++i) phi(i) = {rng.normal(), rng.normal()};
    const double ratio = (phi.adjoint() * rep.lhs * phi)(0).imag() / (std::numbers::pi * phi.squaredNorm());
    rep.im_ratio_min = std::min(rep.im_ratio_min, ratio);
    rep.im_ratio_max = std::max(rep.im_ratio_max, ratio);
    if (ratio < -1e-9 || ratio > 1.0 + 1e-9) rep.im_bound_pass = false;
  }
  if (probes == 0) rep.im_ratio_min = rep.im_ratio_max = 0.0;
  return rep;
}

NormComparison sandwich_norm_check(const Eigen::MatrixXd& a1, const Eigen::MatrixXd& a2, const Eigen::MatrixXd& c) {
  const Eigen::Index n = a1.rows();
  check_square(a1, n, "A1");
  check_square(a2, n, "A2");
  check_square(c, n, "C");
  if (min_eigenvalue(a1) < -1e-10 || min_eigenvalue(a2) < -1e-10) {
    throw Error(ErrorKind::hypothesis_violated, "A1 and A2 must be positive semidefinite");
  }
  if (min_eigenvalue(a2 * a2 - a1 * a1) < -1e-10) throw Error(ErrorKind::hypothesis_violated, "A2^2 >= A1^2 fails");
  NormComparison out;
  out.lhs = operator_norm(Eigen::MatrixXd(a1 * c * a1));
  out.rhs = operator_norm(Eigen::MatrixXd(a2 * c * a2));
  out.pass = out.lhs <= out.rhs + 1e-9;
  return out;
}

NormComparison stieltjes_bound_check(const PiecewisePolynomial& phi, const PiecewisePolynomial& g) {
  const double m = g.lower(), big_m = g.upper();
  if (std::abs(phi.lower() - m) > 1e-12 || std::abs(phi.upper() - big_m) > 1e-12) {
    throw Error(ErrorKind::invalid_input, "phi and g must live on the same interval");
  }
  const double g_scale = std::max(1.0, sup_abs(g));
  if (std::abs(phi.piece_value(0, m)) > 1e-12) throw Error(ErrorKind::precondition_violated, "phi(m) != 0");
  const auto& gp = g.pieces();
  for (std::size_t i = 0; i + 1 < gp.size(); ++i) {
    if (gp[i].hi != gp[i + 1].lo ||
        std::abs(g.piece_value(i, gp[i].hi) - g.piece_value(i + 1, gp[i + 1].lo)) > 1e-12 * g_scale) {
      throw Error(ErrorKind::precondition_violated, "g must be continuous");
    }
  }
  double integral = 0.0;
  for (const auto& fp : phi.pieces()) {
    for (const auto& gpc : gp) {
      const double lo = std::max(fp.lo, gpc.lo), hi = std::min(fp.hi, gpc.hi);
      if (!(hi > lo)) continue;
      const Polynomial prim = poly_antiderivative(poly_mul(fp.coeffs, poly_derivative(gpc.coeffs)));
      integral += poly_eval(prim, hi) - poly_eval(prim, lo);
    }
  }
  NormComparison out;
  out.lhs = std::abs(integral);
  out.rhs = 2.0 * variation(phi, false) * sup_abs(g);
  out.pass = out.lhs <= out.rhs * (1.0 + 1e-12) + 1e-15;
  return out;
}

}  // namespace wt

namespace wt {

namespace {

Eigen::MatrixXd random_symmetric(CounterStream& rng, Eigen::Index n) {
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < n; ++k) g(i, k) = rng.normal();
  }
  return 0.5 * (g + g.transpose());
}

Eigen::MatrixXd random_psd(CounterStream& rng, Eigen::Index n) {
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < n; ++k) g(i, k) = rng.normal();
  }
  return g * g.transpose() / static_cast<double>(n);
}

Interval random_interval(CounterStream& rng) {
  const double lo = -3.0 + 6.0 * rng.uniform();
  return {lo, lo + 2.0 * rng.uniform()};
}

// Separate Philox streams per check family so the sweeps do not share draws.
enum Stream : std::uint64_t { kSpectral = 1, kMulti, kBirman, kSandwich, kStieltjes };

CounterStream trial_stream(std::uint64_t seed, Stream family, std::size_t trial) {
  return CounterStream(seed, (static_cast<std::uint64_t>(family) << 32) | trial);
}

}  // namespace

std::vector<SuiteRow> averaging_suite(std::uint64_t seed, std::size_t trials) {
  constexpr Eigen::Index n = 3;
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
  std::vector<SuiteRow> rows;
  auto push = [&](const std::string& check, std::size_t trial, const AveragingCheckReport& r) {
    rows.push_back({check, trial, r.lhs_norm, r.rhs_bound, r.quadrature_error_estimate, r.pass});
  };

  {
    const Eigen::MatrixXd one = Eigen::MatrixXd::Ones(1, 1);
    const PiecewisePolynomial g({{0.0, 1.0, {1.0}}});
    const auto r = spectral_average_check(Eigen::MatrixXd::Zero(1, 1), one, one, 1.0, g, {0.2, 0.5});
    push("spectral-equality", 0, r);
  }

  const PiecewisePolynomial g_uniform({{0.0, 2.0, {0.5}}});
  for (std::size_t k = 0; k < trials; ++k) {
    CounterStream rng = trial_stream(seed, kSpectral, k);
    const Eigen::MatrixXd h0 = random_symmetric(rng, n);
    push("spectral-random", k, spectral_average_check(h0, eye, eye, 1.0, g_uniform, random_interval(rng)));
  }

  const DensitySpec f = DensitySpec::uniform(1.0);
  for (std::size_t k = 0; k < trials; ++k) {
    CounterStream rng = trial_stream(seed, kMulti, k);
    const Eigen::MatrixXd h0 = random_symmetric(rng, n);
    const std::vector<Eigen::MatrixXd> vs{random_psd(rng, n) + 0.1 * eye, random_psd(rng, n) + 0.1 * eye};
    const Eigen::MatrixXd b = psd_sqrt(0.9 * (vs[0] + vs[1]));
    push("multiparameter-random", k,
         multiparameter_average_check(h0, vs, {1.0, 1.0}, f, 1.0, b, random_interval(rng)));
  }

  for (std::size_t k = 0; k < std::min<std::size_t>(trials, 20); ++k) {
    CounterStream rng = trial_stream(seed, kBirman, k);
    const Eigen::MatrixXd h0 = random_symmetric(rng, n);
    const Eigen::MatrixXd v = random_psd(rng, n);
    const auto r = birman_solomyak_check(h0, v, 0.0, 1.0, {0.3, 1.0}, 100, seed ^ (0xB5ull << 40) ^ k);
    rows.push_back({"birman-solomyak", k, r.deviation, 1e-6, r.quadrature_error_estimate,
                    r.deviation <= 1e-6 && r.im_bound_pass});
  }

  for (std::size_t k = 0; k < trials; ++k) {
    CounterStream rng = trial_stream(seed, kSandwich, k);
    const Eigen::MatrixXd a1 = random_psd(rng, n);
    const Eigen::MatrixXd a2 = psd_sqrt(a1 * a1 + random_psd(rng, n));
    Eigen::MatrixXd c(n, n);
    for (Eigen::Index i = 0; i < n * n; ++i) c.data()[i] = rng.normal();
    const auto r = sandwich_norm_check(a1, a2, c);
    rows.push_back({"sandwich", k, r.lhs, r.rhs, 0.0, r.pass});
  }

  for (std::size_t k = 0; k < trials; ++k) {
    CounterStream rng = trial_stream(seed, kStieltjes, k);
    const PiecewisePolynomial phi({{0.0, 1.0, {0.0, rng.normal(), rng.normal(), rng.normal()}}});
    const PiecewisePolynomial g({{0.0, 1.0, {rng.normal(), rng.normal(), rng.normal()}}});
    const auto r = stieltjes_bound_check(phi, g);
    rows.push_back({"stieltjes", k, r.lhs, r.rhs, 0.0, r.pass});
  }
  return rows;
}

std::string suite_csv(const std::vector<SuiteRow>& rows) {
  std::ostringstream out;
  out << "check,trial,lhs,rhs,error_estimate,pass\n";
  for (const auto& r : rows) {
    out << r.check << ',' << r.trial << ',' << format_double(r.lhs) << ',' << format_double(r.rhs) << ','
        << format_double(r.error_estimate) << ',' << (r.pass ? "true" : "false") << '\n';
  }
  return out.str();
}

}  // namespace wt
