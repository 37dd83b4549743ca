#include "wt/anderson.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wt/error.hpp"
#include "wt/format.hpp"
#include "wt/philox.hpp"

namespace wt {

std::size_t torus_volume(int l, std::size_t dim) {
  std::size_t n = 1;
  for (std::size_t i = 0; i < dim; ++i) n *= static_cast<std::size_t>(l);
  return n;
}

std::size_t torus_index(const LatticePoint& n, int l) {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < n.dim(); ++i) {
    const int r = ((n[i] % l) + l) % l;
    idx = idx * static_cast<std::size_t>(l) + static_cast<std::size_t>(r);
  }
  return idx;
}

LatticePoint torus_site(std::size_t index, int l, std::size_t dim) {
  LatticePoint p(dim);
  for (std::size_t i = dim; i-- > 0;) {
    p[i] = static_cast<int>(index % static_cast<std::size_t>(l));
    index /= static_cast<std::size_t>(l);
  }
  return p;
}

PeriodicHamiltonian build_free_hamiltonian(int l, std::size_t dim) {
  if (l < 2) throw Error(ErrorKind::invalid_input, "l must be at least 2");
  if (dim != 1 && dim != 2) throw Error(ErrorKind::wrong_dimension, "only d = 1 and d = 2 are supported");
  const std::size_t n = torus_volume(l, dim);
  PeriodicHamiltonian h{l, dim, Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n))};
  for (std::size_t s = 0; s < n; ++s) {
    const LatticePoint site = torus_site(s, l, dim);
    for (std::size_t axis = 0; axis < dim; ++axis) {
      for (int step : {1, -1}) {
        LatticePoint nb = site;
        nb[axis] += step;
        h.matrix(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(torus_index(nb, l))) += 1.0;
      }
    }
  }
  return h;
}

CouplingField sample_couplings(const DensitySpec& f, int l, std::size_t dim, std::uint64_t seed,
                               std::uint64_t sample_index) {
  if (l < 1) throw Error(ErrorKind::invalid_input, "l must be positive");
  CouplingField field{l, dim, {}, seed, sample_index};
  const std::size_t n = torus_volume(l, dim);
  field.values.resize(n);
  for (std::size_t site = 0; site < n; ++site) {
    field.values[site] = f.quantile(counter_uniform(seed, sample_index, site));
  }
  return field;
}

PotentialField build_potential(const ConvolutionVector& a, const CouplingField& omega) {
  if (a.dim() != omega.dim) throw Error(ErrorKind::dimension_mismatch, "convolution vector and field differ in d");
  const int l = omega.l;
  const std::size_t n = torus_volume(l, omega.dim);
  if (omega.values.size() != n) throw Error(ErrorKind::size_mismatch, "coupling field has the wrong size");
  PotentialField out;
  out.values.assign(n, 0.0);
  out.support_wraps = a.support_diameter() >= l;
  for (std::size_t s = 0; s < n; ++s) {
    const LatticePoint site = torus_site(s, l, omega.dim);
    double v = 0.0;
    for (const auto& [k, c] : a.entries()) v += c * omega.values[torus_index(site - k, l)];
    out.values[s] = v;
  }
  return out;
}

PeriodicHamiltonian assemble_hamiltonian(const PeriodicHamiltonian& h0, const std::vector<double>& v) {
  if (static_cast<Eigen::Index>(v.size()) != h0.matrix.rows()) {
    throw Error(ErrorKind::size_mismatch, "potential size does not match the Hamiltonian");
  }
  PeriodicHamiltonian h = h0;
  for (std::size_t i = 0; i < v.size(); ++i) h.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) += v[i];
  return h;
}

std::vector<double> eigenvalues(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::size_mismatch, "matrix is not square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw Error(ErrorKind::invalid_input, "matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::no_convergence, "symmetric eigensolver did not converge");
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> eigenvalues(const PeriodicHamiltonian& h) { return eigenvalues(h.matrix); }

std::size_t count_in_interval(const std::vector<double>& eigs, double e, double eps) {
  if (!(eps >= 0.0)) throw Error(ErrorKind::invalid_input, "eps must be nonnegative");
  const auto lo = std::lower_bound(eigs.begin(), eigs.end(), e - eps);
  const auto hi = std::upper_bound(eigs.begin(), eigs.end(), e);
  return hi > lo ? static_cast<std::size_t>(hi - lo) : 0;
}

std::size_t count_below(const std::vector<double>& eigs, double e) {
  return static_cast<std::size_t>(std::lower_bound(eigs.begin(), eigs.end(), e) - eigs.begin());
}

double pairwise_sum(const double* x, std::size_t n) noexcept {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

SampleStats sample_stats(const std::vector<double>& x) {
  SampleStats st;
  if (x.empty()) return st;
  const std::size_t n = x.size();
  st.mean = pairwise_sum(x.data(), n) / static_cast<double>(n);
  if (n > 1) {
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) sq[i] = (x[i] - st.mean) * (x[i] - st.mean);
    const double var = pairwise_sum(sq.data(), n) / static_cast<double>(n - 1);
    st.stderr_mean = std::sqrt(var / static_cast<double>(n));
  }
  return st;
}

std::vector<IdsRow> empirical_ids(const ConvolutionVector& a, const DensitySpec& f, int l, std::size_t dim,
                                  const std::vector<double>& e_grid, std::size_t samples, std::uint64_t seed) {
  if (samples < 1) throw Error(ErrorKind::invalid_input, "samples must be at least 1");
  if (!std::is_sorted(e_grid.begin(), e_grid.end())) throw Error(ErrorKind::invalid_input, "energy grid must be sorted");
  const PeriodicHamiltonian h0 = build_free_hamiltonian(l, dim);
  const double volume = static_cast<double>(torus_volume(l, dim));
  std::vector<std::vector<double>> per_e(e_grid.size(), std::vector<double>(samples));
  for (std::size_t s = 0; s < samples; ++s) {
    const CouplingField omega = sample_couplings(f, l, dim, seed, s);
    const auto eigs = eigenvalues(assemble_hamiltonian(h0, build_potential(a, omega).values));
    for (std::size_t i = 0; i < e_grid.size(); ++i) {
      per_e[i][s] = static_cast<double>(count_below(eigs, e_grid[i])) / volume;
    }
  }
  std::vector<IdsRow> rows;
  for (std::size_t i = 0; i < e_grid.size(); ++i) {
    const SampleStats st = sample_stats(per_e[i]);
    rows.push_back({e_grid[i], st.mean, st.stderr_mean, samples, l, seed});
  }
  return rows;
}

std::string ids_csv(const std::vector<IdsRow>& rows) {
  std::ostringstream out;
  out << "E,N,stderr,samples,l,seed\n";
  for (const auto& r : rows) {
    out << format_double(r.e) << ',' << format_double(r.n) << ',' << format_double(r.stderr_n) << ',' << r.samples
        << ',' << r.l << ',' << r.seed << '\n';
  }
  return out.str();
}

}  // namespace wt
