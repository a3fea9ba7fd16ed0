#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "excinet/common.hpp"
#include "excinet/network.hpp"
#include "excinet/optimize.hpp"

namespace excinet {

// Tabular result of a study: ordered scalar parameters plus CSV-ready rows.
// Every cell is pre-formatted text so that re-running a study with the same
// inputs reproduces the output files byte for byte, and every row carries the
// inputs needed to re-run it in isolation.
struct ExperimentReport {
  std::string name;
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_param(const std::string& key, const std::string& value);
  void add_param(const std::string& key, double value);
  void add_param(const std::string& key, int value);
  void add_param(const std::string& key, const RealVector& value);

  // Header line followed by one line per row, RFC-4180 quoting, LF endings.
  std::string to_csv() const;
};

// A named dephasing assignment. The three standard conditions are the
// network's own (reference) rates, uniform 1 ps^-1, and no dephasing.
struct GammaCondition {
  std::string name;
  RealVector rates;
};

std::vector<GammaCondition> standard_conditions(const NetworkSpec& spec);

// Sink population trajectory sampled at the given times; columns
// t, r_s, p_loss, p1..pN.
ExperimentReport simulate_trajectory(const NetworkSpec& spec,
                                     const std::vector<double>& times,
                                     PropagationMethod method =
                                         PropagationMethod::Expm);

// Uniform grid 0, T/K, ..., T (K+1 points); T = 0 collapses to a single time.
std::vector<double> uniform_times(double time, int n_intervals);

// --- Transfer table -------------------------------------------------------

// Unoptimized (h = 0) and optimized sink population for each standard
// dephasing condition: six rows. The per-condition optima are kept for
// downstream studies.
struct TransferTableResult {
  ExperimentReport report;
  std::map<std::string, double> unoptimized;           // condition -> r_s(T)
  std::map<std::string, double> optimized;             // condition -> r_s(T)
  std::map<std::string, RealVector> optimal_energies;  // condition -> h
};

TransferTableResult transfer_table(const NetworkSpec& spec, double time = 5.0,
                                   const OptimizerConfig& config = {});

// --- Dephasing sweep ------------------------------------------------------

struct SweepResult {
  ExperimentReport report;
  std::vector<double> gammas;
  std::vector<double> rs_plain;      // h = 0
  std::vector<double> rs_optimized;  // empty unless optimize_each
};

std::vector<double> default_dephasing_grid();  // 0, 0.5, ..., 20 ps^-1

// Shorter optimizer budget used for per-grid-point optimization.
OptimizerConfig sweep_config();

SweepResult dephasing_sweep(const NetworkSpec& spec,
                            const std::vector<double>& gammas,
                            bool optimize_each, double time = 5.0,
                            const OptimizerConfig& config = sweep_config());

// --- Reference comparison -------------------------------------------------

// Samples r_s(t) on a uniform grid under the reference energies and under
// h_opt, recording per sample whether the optimized curve is ahead.
struct CompareReferenceResult {
  ExperimentReport report;
  bool dominates;       // rs_opt >= rs_ref at every sampled t > 0
  double min_margin;    // min over t > 0 of rs_opt - rs_ref
  double t_min_margin;  // sample time attaining the minimum
  int n_violations;     // samples with rs_opt < rs_ref
};

CompareReferenceResult compare_reference(const NetworkSpec& spec,
                                         const RealVector& h_opt,
                                         double time = 5.0,
                                         int n_samples = 512);

// --- Resilience studies ---------------------------------------------------

// r_s(T) under fixed h_opt and dephasing gamma while the initial site (or the
// sink attachment site) is moved across every admissible choice.
struct ResilienceResult {
  ExperimentReport report;
  double min_rs;
  int argmin_site;
};

ResilienceResult resilience_initial_sites(const NetworkSpec& spec,
                                          const RealVector& h_opt,
                                          const RealVector& gamma,
                                          double time = 5.0);

ResilienceResult resilience_sink_sites(const NetworkSpec& spec,
                                       const RealVector& h_opt,
                                       const RealVector& gamma,
                                       double time = 5.0);

// --- Dual sink ------------------------------------------------------------

// Transfer with two sink attachment sites, compared against the single-sink
// baseline using the first element of the pair.
struct DualSinkResult {
  ExperimentReport report;
  double rs_dual;
  double rs_single;
};

DualSinkResult dual_sink(const NetworkSpec& spec, const RealVector& h_opt,
                         const RealVector& gamma,
                         std::pair<int, int> sink_sites, double time = 5.0);

// --- Random couplings -----------------------------------------------------

// Redraws the coupling matrix n_samples times and evaluates r_s(T) under
// fixed energies and dephasing. One row per draw; draw k uses
// derive_seed(seed, k), so any prefix of the study is independent of
// n_samples.
struct RandomCouplingResult {
  ExperimentReport report;
  double min_rs;
  double max_rs;
  double median_rs;
};

RandomCouplingResult random_coupling_study(const NetworkSpec& spec,
                                           const RealVector& energies,
                                           const RealVector& gamma,
                                           int n_samples, std::uint64_t seed,
                                           double coupling_lo = -200.0,
                                           double coupling_hi = 200.0,
                                           double time = 5.0);

// --- Node removal ---------------------------------------------------------

// Greedy worst-case shrinking: at each step every removable node is tried,
// the reduced network is re-optimized from h = 0, and the candidate whose
// removal leaves the lowest optimized r_s(T) is actually removed. Stops when
// three sites remain. Site labels in the rows refer to the original network.
struct NodeRemovalResult {
  ExperimentReport report;
  std::vector<double> rs_by_removals;  // index = number of nodes removed
  std::vector<int> removed_sites;      // original labels, in removal order
};

NodeRemovalResult node_removal_study(const NetworkSpec& spec,
                                     const RealVector& gamma,
                                     double time = 5.0,
                                     const OptimizerConfig& config = {});

// --- Chain-sink coherence study -------------------------------------------

// Default linear-chain sink used by the coherence study: 80 chain sites, an
// extra network site bridging into the chain, bridge coupling hbar * sink_rate
// and intra-chain coupling twice the bridge value.
ChainSpec default_chain(const NetworkSpec& spec);

struct CoherenceCondition {
  std::string name;
  RealVector gamma;
  RealVector energies;  // applied to the N network sites
};

struct CoherenceEntry {
  std::string name;
  ExperimentReport trajectory;  // t, r_s, p_loss, p1..p(N+1), p_C, C, C_8
  double c_start;               // C(0) / (N + n_chain)
  double c_final;               // C(T) / (N + n_chain)
  double coherence_start;       // C(0)
  double coherence_final;       // C(T)
  double site8_coherence_start;
  double site8_coherence_final;
  double chain_population_final;
  double max_backflow;     // largest drop of p_C between samples
  bool revival_warning;    // max_backflow > 0.01 (finite chain reflection)
};

struct CoherenceResult {
  std::vector<CoherenceEntry> entries;
};

// Evolves the chain-extended network from the symmetric superposition of the
// initial site and the extra site, sampling populations and l1 coherence at
// n_samples + 1 uniform times on [0, T].
CoherenceResult coherence_study(const NetworkSpec& spec, const ChainSpec& chain,
                                const std::vector<CoherenceCondition>& conditions,
                                double time = 10.0, int n_samples = 512);

}  // namespace excinet
