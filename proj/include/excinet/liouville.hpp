#ifndef EXCINET_LIOUVILLE_HPP
#define EXCINET_LIOUVILLE_HPP

#include <vector>

#include "excinet/network.hpp"

namespace excinet {

/// Row-major vectorization of a d x d density matrix: component i*d+j holds
/// rho_ij, so the diagonal lives at the flat indices k*(d+1).
struct StateVector {
  int dim = 0;
  Vector data;  ///< length dim*dim

  static StateVector vectorize(const Matrix& rho);
  /// rho = |k><k|.
  static StateVector basis_state(int dim, int k);
  Matrix devectorize() const;

  Complex diagonal(int k) const { return data[k * dim + k]; }
  double trace() const;

  /// Physicality diagnostics for tests and per-row experiment checks.
  double trace_deviation() const;        ///< |tr(rho) - 1|
  double hermiticity_deviation() const;  ///< max-abs of rho - rho†
  double min_eigenvalue() const;         ///< smallest eigenvalue of (rho+rho†)/2
};

/// The vectorized generator L of the master equation, acting on length-d²
/// states as dr/dt = -(i/hbar) L r. Split into an energy-independent fixed
/// part and the diagonal generators of the on-site energies, so sweeping h
/// never reassembles the dissipative part:
///
///   L(h) = fixed_part + sum_n h_n (I (x) |n><n| - |n><n| (x) I).
struct SuperOperator {
  int dim = 0;             ///< Hilbert dimension d
  int n_energy_sites = 0;  ///< sites with tunable on-site energy (1..n)
  double hbar = kDefaultHbar;
  SparseMatrix fixed_part;                      ///< d² x d²
  std::vector<SparseMatrix> energy_generators;  ///< one per tunable site
  RealVector energies;                          ///< h used in `assembled`
  SparseMatrix assembled;                       ///< fixed_part + sum h_n gen_n

  /// Same network, different on-site energies; fixed part is reused.
  SuperOperator with_energies(const RealVector& h) const;
  Matrix assembled_dense() const { return Matrix(assembled); }
};

/// Builds the superoperator for Hamiltonian H and jump operators L_mu:
///
///   fixed = I(x)H' - H'^T(x)I
///         + i*hbar * sum_mu [ conj(L_mu)(x)L_mu
///                             - 1/2 (I(x)L_mu†L_mu + (L_mu†L_mu)^T(x)I) ]
///
/// where H' is H with the tunable on-site energies (diagonal entries of the
/// first n_energy_sites site rows) moved into the energy generators.
SuperOperator assemble(const Matrix& h, const std::vector<JumpOperator>& jumps,
                       double hbar, int n_energy_sites);

enum class PropagationMethod { Expm, Ode };

/// r(t) = exp(-(i/hbar) t L) r0. Expm exponentiates the dense superoperator
/// (scaling and squaring); Ode integrates the equivalent linear system with
/// an adaptive Runge-Kutta scheme. The two agree to better than 1e-6.
StateVector propagate(const SuperOperator& op, const StateVector& r0, double t,
                      PropagationMethod method = PropagationMethod::Expm);

/// States at every requested time (ascending, nonnegative), computed by
/// step-chaining so the cost is linear in the number of samples.
std::vector<StateVector> propagate_trajectory(
    const SuperOperator& op, const StateVector& r0,
    const std::vector<double>& times,
    PropagationMethod method = PropagationMethod::Expm);

/// Real part of the last diagonal component (the sink population for the
/// standard basis ordering). Throws if its imaginary part exceeds 1e-9.
double sink_population(const StateVector& r);

/// Population of Hilbert basis state k.
double population(const StateVector& r, int k);

/// C = sum_{i != j} |rho_ij|.
double l1_coherence(const Matrix& rho);

/// C_k = sum_j |rho_kj| - rho_kk.
double site_coherence(const Matrix& rho, int k);

/// Sum of the diagonal populations over [chain_start, dim).
double chain_population(const StateVector& r, int chain_start);

}  // namespace excinet

#endif  // EXCINET_LIOUVILLE_HPP
