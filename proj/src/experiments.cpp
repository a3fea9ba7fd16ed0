#include "excinet/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "excinet/csv.hpp"
#include "excinet/liouville.hpp"
#include "excinet/parallel.hpp"
#include "excinet/random.hpp"

namespace excinet {

namespace {

std::string fmt(double v) { return csv::format_double(v); }

std::string fmt_vector(const RealVector& v) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += fmt(v[i]);
  }
  out += ']';
  return out;
}

// Final-time propagation of the network as given (energies already embedded).
double final_sink_population(const NetworkSpec& spec, double time) {
  const SuperOperator op =
      assemble(build_hamiltonian(spec), build_jump_operators(spec), spec.hbar, 0);
  const StateVector r0 = StateVector::basis_state(spec.dim(), spec.initial_site);
  return sink_population(propagate(op, r0, time));
}

void require(bool condition, const std::string& message) {
  if (!condition) throw ConfigError(message);
}

void check_site_vector(const NetworkSpec& spec, const RealVector& v,
                       const std::string& what) {
  require(static_cast<int>(v.size()) == spec.n_sites,
          what + " must have one entry per network site");
}

struct OptOutcome {
  bool ok = false;
  RealVector h;
  double rs = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
};

// Optimization from h = 0 with divergence downgraded to a flagged outcome.
OptOutcome optimize_from_zero(const NetworkSpec& spec, double time,
                              const OptimizerConfig& config) {
  OptOutcome out;
  try {
    OptimizationResult res = rmsprop_minimize(
        spec, time, config, RealVector::Zero(spec.n_sites));
    NetworkSpec best = spec;
    best.local_energies = res.h_opt;
    out.ok = true;
    out.h = res.h_opt;
    out.rs = final_sink_population(best, time);
    out.iterations = static_cast<int>(res.learning_curve.size());
  } catch (const DivergenceError&) {
    out.ok = false;
  }
  return out;
}

void add_optimizer_params(ExperimentReport& report,
                          const OptimizerConfig& config) {
  report.add_param("learning_rate", config.learning_rate);
  report.add_param("decay", config.decay);
  report.add_param("epsilon", config.epsilon);
  report.add_param("max_iters", config.max_iters);
}

}  // namespace

void ExperimentReport::add_param(const std::string& key,
                                 const std::string& value) {
  params.emplace_back(key, value);
}

void ExperimentReport::add_param(const std::string& key, double value) {
  params.emplace_back(key, fmt(value));
}

void ExperimentReport::add_param(const std::string& key, int value) {
  params.emplace_back(key, std::to_string(value));
}

void ExperimentReport::add_param(const std::string& key,
                                 const RealVector& value) {
  params.emplace_back(key, fmt_vector(value));
}

std::string ExperimentReport::to_csv() const {
  std::string out = csv::join_row(header);
  for (const auto& row : rows) out += csv::join_row(row);
  return out;
}

std::vector<GammaCondition> standard_conditions(const NetworkSpec& spec) {
  const int n = spec.n_sites;
  return {{"gamma_ref", spec.dephasing_rates},
          {"ones", RealVector::Ones(n)},
          {"zeros", RealVector::Zero(n)}};
}

std::vector<double> uniform_times(double time, int n_intervals) {
  if (time < 0.0) throw ConfigError("time must be nonnegative");
  if (time == 0.0 || n_intervals <= 0) return {0.0};
  std::vector<double> times(n_intervals + 1);
  for (int k = 0; k <= n_intervals; ++k) {
    times[k] = (k == n_intervals) ? time : time * k / n_intervals;
  }
  return times;
}

ExperimentReport simulate_trajectory(const NetworkSpec& spec,
                                     const std::vector<double>& times,
                                     PropagationMethod method) {
  spec.validate();
  require(!times.empty(), "trajectory needs at least one sample time");
  const SuperOperator op =
      assemble(build_hamiltonian(spec), build_jump_operators(spec), spec.hbar, 0);
  const StateVector r0 = StateVector::basis_state(spec.dim(), spec.initial_site);
  const std::vector<StateVector> states =
      propagate_trajectory(op, r0, times, method);

  ExperimentReport report;
  report.name = "trajectory";
  report.add_param("hbar", spec.hbar);
  report.add_param("initial_site", spec.initial_site);
  report.add_param("energies", spec.local_energies);
  report.add_param("dephasing", spec.dephasing_rates);
  report.add_param("method", method == PropagationMethod::Expm ? "expm" : "ode");
  report.header = {"t", "r_s", "p_loss"};
  for (int n = 1; n <= spec.n_sites; ++n) {
    report.header.push_back("p" + std::to_string(n));
  }
  for (std::size_t k = 0; k < times.size(); ++k) {
    const StateVector& r = states[k];
    if (r.trace_deviation() > 1e-6) {
      throw NumericalError("trajectory lost trace normalization");
    }
    std::vector<std::string> row = {fmt(times[k]), fmt(sink_population(r)),
                                    fmt(population(r, spec.loss_index()))};
    for (int n = 1; n <= spec.n_sites; ++n) row.push_back(fmt(population(r, n)));
    report.rows.push_back(std::move(row));
  }
  return report;
}

// --- Transfer table ---------------------------------------------------------

TransferTableResult transfer_table(const NetworkSpec& spec, double time,
                                   const OptimizerConfig& config) {
  spec.validate();
  config.validate();
  const auto conditions = standard_conditions(spec);
  const int n_cond = static_cast<int>(conditions.size());

  std::vector<double> plain(n_cond);
  std::vector<OptOutcome> opt(n_cond);
  parallel_for(n_cond, [&](int i) {
    NetworkSpec base = spec;
    base.dephasing_rates = conditions[i].rates;
    base.local_energies = RealVector::Zero(spec.n_sites);
    plain[i] = final_sink_population(base, time);
    opt[i] = optimize_from_zero(base, time, config);
  });

  TransferTableResult result;
  ExperimentReport& report = result.report;
  report.name = "table1";
  report.add_param("time", time);
  report.add_param("hbar", spec.hbar);
  add_optimizer_params(report, config);
  report.header = {"condition", "gamma",      "variant", "energies",
                   "status",    "iterations", "r_s_T"};
  for (int i = 0; i < n_cond; ++i) {
    const auto& cond = conditions[i];
    const std::string gamma_text = fmt_vector(cond.rates);
    report.rows.push_back({cond.name, gamma_text, "zero",
                           fmt_vector(RealVector::Zero(spec.n_sites)), "ok", "0",
                           fmt(plain[i])});
    result.unoptimized[cond.name] = plain[i];
    if (opt[i].ok) {
      report.rows.push_back({cond.name, gamma_text, "optimized",
                             fmt_vector(opt[i].h), "ok",
                             std::to_string(opt[i].iterations), fmt(opt[i].rs)});
      result.optimized[cond.name] = opt[i].rs;
      result.optimal_energies[cond.name] = opt[i].h;
      report.add_param("h_opt_" + cond.name, opt[i].h);
    } else {
      report.rows.push_back(
          {cond.name, gamma_text, "optimized", "", "diverged", "", ""});
    }
  }
  return result;
}

// --- Dephasing sweep --------------------------------------------------------

std::vector<double> default_dephasing_grid() {
  std::vector<double> grid;
  for (int k = 0; k <= 40; ++k) grid.push_back(0.5 * k);
  return grid;
}

OptimizerConfig sweep_config() {
  OptimizerConfig config;
  config.max_iters = 400;
  return config;
}

SweepResult dephasing_sweep(const NetworkSpec& spec,
                            const std::vector<double>& gammas,
                            bool optimize_each, double time,
                            const OptimizerConfig& config) {
  spec.validate();
  config.validate();
  require(!gammas.empty(), "dephasing grid must be nonempty");
  for (double g : gammas) require(g >= 0.0, "dephasing rates must be >= 0");

  const int n = static_cast<int>(gammas.size());
  std::vector<double> plain(n);
  std::vector<OptOutcome> opt(n);
  parallel_for(n, [&](int i) {
    NetworkSpec base = spec;
    base.dephasing_rates = RealVector::Constant(spec.n_sites, gammas[i]);
    base.local_energies = RealVector::Zero(spec.n_sites);
    plain[i] = final_sink_population(base, time);
    if (optimize_each) opt[i] = optimize_from_zero(base, time, config);
  });

  SweepResult result;
  result.gammas = gammas;
  result.rs_plain = plain;
  ExperimentReport& report = result.report;
  report.name = "sweep";
  report.add_param("time", time);
  report.add_param("hbar", spec.hbar);
  report.add_param("n_points", n);
  report.add_param("optimize_each", optimize_each ? "1" : "0");
  if (optimize_each) add_optimizer_params(report, config);
  report.header = {"gamma", "r_s_plain", "r_s_optimized", "status", "iterations"};
  for (int i = 0; i < n; ++i) {
    std::vector<std::string> row = {fmt(gammas[i]), fmt(plain[i])};
    if (!optimize_each) {
      row.insert(row.end(), {"", "ok", "0"});
    } else if (opt[i].ok) {
      row.insert(row.end(),
                 {fmt(opt[i].rs), "ok", std::to_string(opt[i].iterations)});
      result.rs_optimized.push_back(opt[i].rs);
    } else {
      row.insert(row.end(), {"", "diverged", ""});
      result.rs_optimized.push_back(std::numeric_limits<double>::quiet_NaN());
    }
    report.rows.push_back(std::move(row));
  }
  return result;
}

// --- Reference comparison ---------------------------------------------------

CompareReferenceResult compare_reference(const NetworkSpec& spec,
                                         const RealVector& h_opt, double time,
                                         int n_samples) {
  spec.validate();
  check_site_vector(spec, h_opt, "h_opt");
  require(n_samples >= 1, "compare_reference needs n_samples >= 1");
  require(time > 0.0, "compare_reference needs time > 0");
  const RealVector& h_ref = fmo_reference_energies();
  require(spec.n_sites == static_cast<int>(h_ref.size()),
          "reference energies are defined for the 7-site network");

  const std::vector<double> times = uniform_times(time, n_samples);
  auto trajectory = [&](const RealVector& h) {
    NetworkSpec s = spec;
    s.local_energies = h;
    const SuperOperator op =
        assemble(build_hamiltonian(s), build_jump_operators(s), s.hbar, 0);
    const StateVector r0 = StateVector::basis_state(s.dim(), s.initial_site);
    std::vector<StateVector> states = propagate_trajectory(op, r0, times);
    std::vector<double> rs(states.size());
    for (std::size_t k = 0; k < states.size(); ++k) {
      rs[k] = sink_population(states[k]);
    }
    return rs;
  };
  const std::vector<double> rs_ref = trajectory(h_ref);
  const std::vector<double> rs_opt = trajectory(h_opt);

  CompareReferenceResult result;
  result.min_margin = std::numeric_limits<double>::infinity();
  result.t_min_margin = times.back();
  result.n_violations = 0;
  ExperimentReport& report = result.report;
  report.name = "compare-ref";
  report.add_param("time", time);
  report.add_param("n_samples", n_samples);
  report.add_param("h_ref", h_ref);
  report.add_param("h_opt", h_opt);
  report.add_param("gamma", spec.dephasing_rates);
  report.header = {"t", "r_s_ref", "r_s_opt", "optimized_ahead"};
  for (std::size_t k = 0; k < times.size(); ++k) {
    const bool ahead = rs_opt[k] >= rs_ref[k];
    report.rows.push_back(
        {fmt(times[k]), fmt(rs_ref[k]), fmt(rs_opt[k]), ahead ? "1" : "0"});
    if (times[k] > 0.0) {
      const double margin = rs_opt[k] - rs_ref[k];
      if (margin < result.min_margin) {
        result.min_margin = margin;
        result.t_min_margin = times[k];
      }
      if (!ahead) ++result.n_violations;
    }
  }
  result.dominates = (result.n_violations == 0);
  report.add_param("dominates", result.dominates ? "1" : "0");
  report.add_param("min_margin", result.min_margin);
  return result;
}

// --- Resilience studies -----------------------------------------------------

namespace {

ResilienceResult resilience_scan(const NetworkSpec& spec,
                                 const RealVector& h_opt,
                                 const RealVector& gamma, double time,
                                 bool vary_initial) {
  spec.validate();
  check_site_vector(spec, h_opt, "h_opt");
  check_site_vector(spec, gamma, "gamma");

  std::vector<int> sites;
  for (int m = 1; m <= spec.n_sites; ++m) {
    if (vary_initial) {
      if (std::find(spec.sink_sites.begin(), spec.sink_sites.end(), m) ==
          spec.sink_sites.end()) {
        sites.push_back(m);
      }
    } else if (m != spec.initial_site) {
      sites.push_back(m);
    }
  }
  const int n = static_cast<int>(sites.size());
  std::vector<double> rs(n);
  parallel_for(n, [&](int i) {
    NetworkSpec s = spec;
    s.local_energies = h_opt;
    s.dephasing_rates = gamma;
    if (vary_initial) {
      s.initial_site = sites[i];
    } else {
      s.sink_sites = {sites[i]};
    }
    rs[i] = final_sink_population(s, time);
  });

  ResilienceResult result;
  result.min_rs = std::numeric_limits<double>::infinity();
  result.argmin_site = 0;
  ExperimentReport& report = result.report;
  report.name = vary_initial ? "resil-init" : "resil-sink";
  report.add_param("time", time);
  report.add_param("h_opt", h_opt);
  report.add_param("gamma", gamma);
  report.header = {vary_initial ? "initial_site" : "sink_site", "r_s_T"};
  for (int i = 0; i < n; ++i) {
    report.rows.push_back({std::to_string(sites[i]), fmt(rs[i])});
    if (rs[i] < result.min_rs) {
      result.min_rs = rs[i];
      result.argmin_site = sites[i];
    }
  }
  report.add_param("min_r_s", result.min_rs);
  report.add_param("argmin_site", result.argmin_site);
  return result;
}

}  // namespace

ResilienceResult resilience_initial_sites(const NetworkSpec& spec,
                                          const RealVector& h_opt,
                                          const RealVector& gamma,
                                          double time) {
  return resilience_scan(spec, h_opt, gamma, time, /*vary_initial=*/true);
}

ResilienceResult resilience_sink_sites(const NetworkSpec& spec,
                                       const RealVector& h_opt,
                                       const RealVector& gamma, double time) {
  return resilience_scan(spec, h_opt, gamma, time, /*vary_initial=*/false);
}

// --- Dual sink ----------------------------------------------------------------

DualSinkResult dual_sink(const NetworkSpec& spec, const RealVector& h_opt,
                         const RealVector& gamma,
                         std::pair<int, int> sink_sites, double time) {
  spec.validate();
  check_site_vector(spec, h_opt, "h_opt");
  check_site_vector(spec, gamma, "gamma");
  const int a = sink_sites.first;
  const int b = sink_sites.second;
  require(a >= 1 && a <= spec.n_sites && b >= 1 && b <= spec.n_sites,
          "sink pair must name network sites");
  require(a != b, "sink pair must be two distinct sites");

  NetworkSpec single = spec;
  single.local_energies = h_opt;
  single.dephasing_rates = gamma;
  single.sink_sites = {a};
  NetworkSpec dual = single;
  dual.sink_sites = {std::min(a, b), std::max(a, b)};

  DualSinkResult result;
  result.rs_single = final_sink_population(single, time);
  result.rs_dual = final_sink_population(dual, time);
  ExperimentReport& report = result.report;
  report.name = "dual-sink";
  report.add_param("time", time);
  report.add_param("h_opt", h_opt);
  report.add_param("gamma", gamma);
  report.header = {"sink_sites", "r_s_T"};
  report.rows.push_back({std::to_string(a), fmt(result.rs_single)});
  report.rows.push_back(
      {std::to_string(dual.sink_sites[0]) + ";" + std::to_string(dual.sink_sites[1]),
       fmt(result.rs_dual)});
  return result;
}

// --- Random couplings ---------------------------------------------------------

RandomCouplingResult random_coupling_study(const NetworkSpec& spec,
                                           const RealVector& energies,
                                           const RealVector& gamma,
                                           int n_samples, std::uint64_t seed,
                                           double coupling_lo,
                                           double coupling_hi, double time) {
  spec.validate();
  check_site_vector(spec, energies, "energies");
  check_site_vector(spec, gamma, "gamma");
  require(n_samples >= 1, "random_coupling_study needs n_samples >= 1");
  require(coupling_lo < coupling_hi, "coupling range must satisfy lo < hi");

  std::vector<std::uint64_t> seeds(n_samples);
  std::vector<double> rs(n_samples);
  parallel_for(n_samples, [&](int k) {
    seeds[k] = derive_seed(seed, static_cast<std::uint64_t>(k));
    NetworkSpec s = spec;
    s.local_energies = energies;
    s.dephasing_rates = gamma;
    s.couplings =
        random_couplings(spec.n_sites, coupling_lo, coupling_hi, seeds[k]);
    rs[k] = final_sink_population(s, time);
  });

  std::vector<double> sorted = rs;
  std::sort(sorted.begin(), sorted.end());
  auto quantile = [&](double q) {
    const double pos = q * (sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double w = pos - static_cast<double>(lo);
    return (1.0 - w) * sorted[lo] + w * sorted[hi];
  };

  RandomCouplingResult result;
  result.min_rs = sorted.front();
  result.max_rs = sorted.back();
  result.median_rs = quantile(0.5);
  ExperimentReport& report = result.report;
  report.name = "random-couplings";
  report.add_param("time", time);
  report.add_param("energies", energies);
  report.add_param("gamma", gamma);
  report.add_param("n_samples", n_samples);
  report.add_param("seed", std::to_string(seed));
  report.add_param("coupling_lo", coupling_lo);
  report.add_param("coupling_hi", coupling_hi);
  report.add_param("min", result.min_rs);
  report.add_param("q05", quantile(0.05));
  report.add_param("q25", quantile(0.25));
  report.add_param("median", result.median_rs);
  report.add_param("q75", quantile(0.75));
  report.add_param("q95", quantile(0.95));
  report.add_param("max", result.max_rs);
  report.header = {"draw", "seed", "r_s_T"};
  for (int k = 0; k < n_samples; ++k) {
    report.rows.push_back(
        {std::to_string(k), std::to_string(seeds[k]), fmt(rs[k])});
  }
  return result;
}

// --- Node removal ---------------------------------------------------------------

NodeRemovalResult node_removal_study(const NetworkSpec& spec,
                                     const RealVector& gamma, double time,
                                     const OptimizerConfig& config) {
  spec.validate();
  check_site_vector(spec, gamma, "gamma");
  config.validate();

  NodeRemovalResult result;
  ExperimentReport& report = result.report;
  report.name = "shrink";
  report.add_param("time", time);
  report.add_param("gamma", gamma);
  add_optimizer_params(report, config);
  report.header = {"removals",   "removed_site", "removed_sequence",
                   "n_sites",    "status",       "iterations",
                   "r_s_T"};

  NetworkSpec current = spec;
  current.dephasing_rates = gamma;
  current.local_energies = RealVector::Zero(spec.n_sites);
  std::vector<int> labels(spec.n_sites);
  for (int i = 0; i < spec.n_sites; ++i) labels[i] = i + 1;
  std::string sequence;

  const OptOutcome first = optimize_from_zero(current, time, config);
  if (!first.ok) {
    report.rows.push_back(
        {"0", "", "", std::to_string(current.n_sites), "diverged", "", ""});
    return result;
  }
  report.rows.push_back({"0", "", "", std::to_string(current.n_sites), "ok",
                         std::to_string(first.iterations), fmt(first.rs)});
  result.rs_by_removals.push_back(first.rs);

  int removals = 0;
  while (current.n_sites > 3) {
    std::vector<int> candidates;
    for (int m = 1; m <= current.n_sites; ++m) {
      if (m == current.initial_site) continue;
      if (std::find(current.sink_sites.begin(), current.sink_sites.end(), m) !=
          current.sink_sites.end()) {
        continue;
      }
      candidates.push_back(m);
    }
    if (candidates.empty()) break;

    const int n_cand = static_cast<int>(candidates.size());
    std::vector<OptOutcome> outcomes(n_cand);
    std::vector<NetworkSpec> reduced(n_cand);
    parallel_for(n_cand, [&](int i) {
      reduced[i] = remove_node(current, candidates[i]);
      outcomes[i] = optimize_from_zero(reduced[i], time, config);
    });

    int pick = -1;
    for (int i = 0; i < n_cand; ++i) {
      if (!outcomes[i].ok) continue;
      if (pick < 0 || outcomes[i].rs < outcomes[pick].rs) pick = i;
    }
    ++removals;
    if (pick < 0) {
      report.rows.push_back({std::to_string(removals), "", sequence,
                             std::to_string(current.n_sites - 1), "diverged",
                             "", ""});
      return result;
    }
    const int removed_label = labels[candidates[pick] - 1];
    labels.erase(labels.begin() + (candidates[pick] - 1));
    if (!sequence.empty()) sequence += ';';
    sequence += std::to_string(removed_label);
    current = reduced[pick];
    current.local_energies = RealVector::Zero(current.n_sites);

    report.rows.push_back({std::to_string(removals),
                           std::to_string(removed_label), sequence,
                           std::to_string(current.n_sites), "ok",
                           std::to_string(outcomes[pick].iterations),
                           fmt(outcomes[pick].rs)});
    result.rs_by_removals.push_back(outcomes[pick].rs);
    result.removed_sites.push_back(removed_label);
  }
  report.add_param("removed_sequence", sequence);
  return result;
}

// --- Chain-sink coherence study ---------------------------------------------------

ChainSpec default_chain(const NetworkSpec& spec) {
  ChainSpec chain;
  chain.n_chain = 80;
  chain.bridge_coupling = spec.hbar * spec.sink_rate;
  chain.chain_coupling = 2.0 * chain.bridge_coupling;
  chain.extra_site = true;
  return chain;
}

CoherenceResult coherence_study(const NetworkSpec& spec, const ChainSpec& chain,
                                const std::vector<CoherenceCondition>& conditions,
                                double time, int n_samples) {
  spec.validate();
  chain.validate();
  require(chain.extra_site,
          "coherence study requires the extra (superposed) site");
  require(!conditions.empty(), "coherence study needs at least one condition");
  require(n_samples >= 1, "coherence study needs n_samples >= 1");

  const std::vector<double> times = uniform_times(time, n_samples);
  CoherenceResult result;
  for (const auto& cond : conditions) {
    check_site_vector(spec, cond.gamma, "gamma");
    check_site_vector(spec, cond.energies, "energies");
    NetworkSpec base = spec;
    base.dephasing_rates = cond.gamma;
    base.local_energies = cond.energies;
    const ExtendedSpec ext = extend_with_chain(base, chain);
    const SuperOperator op =
        assemble(build_extended_hamiltonian(ext),
                 build_extended_jump_operators(ext), spec.hbar, 0);

    const int d = ext.dim();
    const int site8 = ext.extra_index();
    Vector psi = Vector::Zero(d);
    psi[base.initial_site] = 1.0 / std::sqrt(2.0);
    psi[site8] = 1.0 / std::sqrt(2.0);
    const Matrix rho0 = psi * psi.adjoint();
    const StateVector r0 = StateVector::vectorize(rho0);

    const std::vector<StateVector> states =
        propagate_trajectory(op, r0, times, PropagationMethod::Ode);

    CoherenceEntry entry;
    entry.name = cond.name;
    ExperimentReport& report = entry.trajectory;
    report.name = "coherence";
    report.add_param("condition", cond.name);
    report.add_param("time", time);
    report.add_param("n_samples", n_samples);
    report.add_param("gamma", cond.gamma);
    report.add_param("energies", cond.energies);
    report.add_param("n_chain", chain.n_chain);
    report.add_param("chain_coupling", chain.chain_coupling);
    report.add_param("bridge_coupling", chain.bridge_coupling);
    report.header = {"t", "r_s", "p_loss"};
    for (int n = 1; n <= site8; ++n) {
      report.header.push_back("p" + std::to_string(n));
    }
    report.header.insert(report.header.end(), {"p_C", "C", "C_8"});

    std::vector<double> p_chain(times.size());
    for (std::size_t k = 0; k < times.size(); ++k) {
      const StateVector& r = states[k];
      if (r.trace_deviation() > 1e-6) {
        throw NumericalError("coherence trajectory lost trace normalization");
      }
      const Matrix rho = r.devectorize();
      p_chain[k] = chain_population(r, ext.chain_start());
      const double coh = l1_coherence(rho);
      const double coh8 = site_coherence(rho, site8);
      std::vector<std::string> row = {fmt(times[k]), fmt(p_chain[k]),
                                      fmt(population(r, 0))};
      for (int n = 1; n <= site8; ++n) row.push_back(fmt(population(r, n)));
      row.insert(row.end(), {fmt(p_chain[k]), fmt(coh), fmt(coh8)});
      report.rows.push_back(std::move(row));

      const double denom = spec.n_sites + chain.n_chain;
      if (k == 0) {
        entry.coherence_start = coh;
        entry.c_start = coh / denom;
        entry.site8_coherence_start = coh8;
      }
      if (k + 1 == times.size()) {
        entry.coherence_final = coh;
        entry.c_final = coh / denom;
        entry.site8_coherence_final = coh8;
        entry.chain_population_final = p_chain[k];
      }
    }
    entry.max_backflow = 0.0;
    for (std::size_t k = 0; k + 1 < p_chain.size(); ++k) {
      entry.max_backflow =
          std::max(entry.max_backflow, p_chain[k] - p_chain[k + 1]);
    }
    entry.revival_warning = entry.max_backflow > 0.01;
    report.add_param("c_final", entry.c_final);
    report.add_param("coherence_final", entry.coherence_final);
    report.add_param("site8_coherence_final", entry.site8_coherence_final);
    report.add_param("chain_population_final", entry.chain_population_final);
    report.add_param("max_backflow", entry.max_backflow);
    report.add_param("revival_warning", entry.revival_warning ? "1" : "0");
    result.entries.push_back(std::move(entry));
  }
  return result;
}

}  // namespace excinet
