#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "wt/density.hpp"
#include "wt/symbol.hpp"

namespace wt {

/// Random couplings on the torus (Z_l)^d, site n stored at index
/// sum_i n_i l^(d-1-i) (lexicographic).
struct CouplingField {
  int l = 0;
  std::size_t dim = 1;
  std::vector<double> values;
  std::uint64_t seed = 0;
  std::uint64_t sample_index = 0;
};

/// Real symmetric operator on l^2((Z_l)^d) with periodic boundary conditions.
struct PeriodicHamiltonian {
  int l = 0;
  std::size_t dim = 1;
  Eigen::MatrixXd matrix;
};

std::size_t torus_volume(int l, std::size_t dim);
std::size_t torus_index(const LatticePoint& n, int l);
LatticePoint torus_site(std::size_t index, int l, std::size_t dim);

/// Adjacency of the torus: each site gets +1 towards n + e and n - e for
/// every unit vector e, indices mod l. For l = 2 both directions reach the
/// same neighbour, giving weight 2.
PeriodicHamiltonian build_free_hamiltonian(int l, std::size_t dim);

/// One inverse-CDF draw per site from the Philox stream (seed, sample_index).
CouplingField sample_couplings(const DensitySpec& f, int l, std::size_t dim, std::uint64_t seed,
                               std::uint64_t sample_index);

struct PotentialField {
  std::vector<double> values;
  /// The support of a is at least l wide, so the periodic convolution folds
  /// onto itself. The values are still computed.
  bool support_wraps = false;
};

/// V(n) = sum_k a_k omega_{(n - k) mod l}.
PotentialField build_potential(const ConvolutionVector& a, const CouplingField& omega);

/// h0 + diag(V). Throws size_mismatch.
PeriodicHamiltonian assemble_hamiltonian(const PeriodicHamiltonian& h0, const std::vector<double>& v);

/// All eigenvalues, ascending (Householder tridiagonalization followed by
/// implicit symmetric QR). Throws no_convergence.
std::vector<double> eigenvalues(const PeriodicHamiltonian& h);
std::vector<double> eigenvalues(const Eigen::MatrixXd& symmetric);

/// Eigenvalues in the closed interval [E - eps, E].
std::size_t count_in_interval(const std::vector<double>& eigs, double e, double eps);
/// Eigenvalues strictly below E.
std::size_t count_below(const std::vector<double>& eigs, double e);

/// Pairwise (cascade) summation; the result is independent of how the
/// samples were produced, only of their order.
double pairwise_sum(const double* x, std::size_t n) noexcept;

struct SampleStats {
  double mean = 0.0;
  /// Standard error of the mean; 0 for a single sample.
  double stderr_mean = 0.0;
};

SampleStats sample_stats(const std::vector<double>& x);

struct IdsRow {
  double e = 0.0;
  double n = 0.0;
  double stderr_n = 0.0;
  std::size_t samples = 0;
  int l = 0;
  std::uint64_t seed = 0;
};

/// l^-d #{eigenvalues < E}, averaged over `samples` independent fields.
std::vector<IdsRow> empirical_ids(const ConvolutionVector& a, const DensitySpec& f, int l, std::size_t dim,
                                  const std::vector<double>& e_grid, std::size_t samples, std::uint64_t seed);

/// CSV with header `E,N,stderr,samples,l,seed`.
std::string ids_csv(const std::vector<IdsRow>& rows);

}  // namespace wt
