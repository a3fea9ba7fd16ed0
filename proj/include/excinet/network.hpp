#ifndef EXCINET_NETWORK_HPP
#define EXCINET_NETWORK_HPP

#include <cstdint>
#include <vector>

#include "excinet/common.hpp"

namespace excinet {

/// A fully connected excitation-transfer network in the single-excitation
/// subspace. The Hilbert space has dimension N+2 with the fixed basis
/// ordering [|0> (loss), |1..N> (sites), |s> (sink)], so site n lives at
/// Hilbert index n, the loss state at 0 and the sink at N+1.
///
/// Energies and couplings are expressed in units of 1.2414e-4 eV, rates in
/// 1/ps and times in ps.
struct NetworkSpec {
  int n_sites = 0;                ///< number of network sites N
  RealMatrix couplings;           ///< N x N symmetric, zero diagonal
  RealVector local_energies;      ///< on-site energies h_n
  RealVector dephasing_rates;     ///< gamma_n >= 0
  RealVector loss_rates;          ///< Gamma_n >= 0
  double sink_rate = 0.0;         ///< Gamma_s >= 0
  std::vector<int> sink_sites;    ///< 1-based sites feeding the sink
  int initial_site = 1;           ///< 1-based site carrying the excitation at t=0
  double hbar = kDefaultHbar;     ///< energy-unit * ps

  int dim() const { return n_sites + 2; }
  int loss_index() const { return 0; }
  int sink_index() const { return n_sites + 1; }

  /// Throws ConfigError when any structural invariant is violated
  /// (asymmetric couplings, out-of-range indices, negative rates, ...).
  void validate() const;
};

enum class JumpKind { Dephasing, Loss, SinkTransfer };

/// A single Lindblad jump operator |a><b| scaled by the square root of its
/// rate. All three kinds have exactly one nonzero entry, so L†L is diagonal.
struct JumpOperator {
  JumpKind kind;
  int site;             ///< 1-based network site the operator acts on
  double rate;          ///< canonical-form rate (see below), 1/ps
  SparseMatrix matrix;  ///< d x d, single entry sqrt(rate)
};

/// Rate convention: quoted dephasing/loss/sink rates parameterize the
/// dissipator in the doubled form 2L rho L† - {L†L, rho}. We assemble the
/// canonical form L rho L† - 1/2 {L†L, rho}, so a quoted rate r enters as a
/// jump operator sqrt(2r)|a><b| and JumpOperator::rate stores 2r.
inline constexpr double kRateConventionFactor = 2.0;

/// Dephasing sqrt(2*gamma_n)|n><n|, loss sqrt(2*Gamma_n)|0><n| and sink
/// transfer sqrt(2*Gamma_s)|s><m| for every m in sink_sites. Zero-rate
/// operators are omitted entirely (not emitted as zero matrices).
std::vector<JumpOperator> build_jump_operators(const NetworkSpec& spec);

/// H = sum_n h_n|n><n| + sum_{m<n} J_mn (|m><n| + |n><m|) embedded in the
/// (N+2)-dimensional space; rows/columns of |0> and |s> are zero.
Matrix build_hamiltonian(const NetworkSpec& spec);

/// The 7-site reference network: literature coupling matrix, reference
/// dephasing rates, uniform loss Gamma_n = 5e-4, sink rate 6.283 attached to
/// site 3, excitation injected at site 1, zero local energies, default hbar.
NetworkSpec fmo_reference_spec();

/// Literature reference on-site energies (215, 220, 0, 125, 450, 330, 280).
const RealVector& fmo_reference_energies();

/// Literature site-dependent dephasing rates
/// (0.157, 9.432, 7.797, 9.432, 7.797, 0.922, 9.433).
const RealVector& fmo_reference_dephasing();

/// Symmetric coupling matrix with zero diagonal whose upper-triangular
/// entries are i.i.d. uniform on [lo, hi). Identical seeds give bit-identical
/// matrices.
RealMatrix random_couplings(int n, double lo, double hi, std::uint64_t seed);

/// Deletes one site (never the initial site or a sink site) and re-indexes
/// the remaining ones, dropping the corresponding row/column of the coupling
/// matrix and the site's entries in all per-site vectors.
NetworkSpec remove_node(const NetworkSpec& spec, int node);

/// A uniform nearest-neighbour spin chain replacing the sink as an effective
/// (unitary) absorber, plus an optional extra uncoupled network site used by
/// the coherence study.
struct ChainSpec {
  int n_chain = 80;              ///< number of chain spins
  double chain_coupling = 0.0;   ///< J between neighbouring spins
  double bridge_coupling = 0.0;  ///< J between site 3 and the chain head
  bool extra_site = false;       ///< include the uncoupled site |8>

  void validate() const;
};

/// Chain-extended instance. Basis ordering: [|0>, |1..N>, |8> (optional),
/// |s_0 .. s_{n_chain-1}>]. There is no sink state: the SinkTransfer channel
/// is replaced by the unitary bridge into the chain. Dephasing and loss act
/// only on the original N network sites.
struct ExtendedSpec {
  NetworkSpec base;  ///< sink_rate/sink_sites are ignored (no sink state)
  ChainSpec chain;

  int dim() const {
    return 1 + base.n_sites + (chain.extra_site ? 1 : 0) + chain.n_chain;
  }
  int extra_index() const { return base.n_sites + 1; }
  int chain_start() const {
    return 1 + base.n_sites + (chain.extra_site ? 1 : 0);
  }
  int bridge_site() const { return 3; }
};

ExtendedSpec extend_with_chain(const NetworkSpec& spec, const ChainSpec& chain);

/// Network Hamiltonian plus bridge and nearest-neighbour chain terms.
Matrix build_extended_hamiltonian(const ExtendedSpec& ext);

/// Dephasing and loss operators on sites 1..N only (no sink operator).
std::vector<JumpOperator> build_extended_jump_operators(const ExtendedSpec& ext);

}  // namespace excinet

#endif  // EXCINET_NETWORK_HPP
