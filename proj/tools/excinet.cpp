// excinet: batch frontend for the excitation-transfer toolkit.
//
// Subcommands: simulate (trajectory CSV), optimize (h_opt + learning curve),
// experiment (named studies), dump-config (canonical config echo).
// Exit codes: 0 success, 2 input error, 3 numerical error, 4 optimizer
// divergence.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "excinet/common.hpp"
#include "excinet/config.hpp"
#include "excinet/csv.hpp"
#include "excinet/experiments.hpp"
#include "excinet/liouville.hpp"
#include "excinet/manifest.hpp"
#include "excinet/network.hpp"
#include "excinet/optimize.hpp"
#include "excinet/parallel.hpp"

namespace {

using namespace excinet;

// Energies are always optimized over the standard transfer window, even when
// the downstream study (e.g. coherence) evolves for longer.
constexpr double kTransferTime = 5.0;

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string spec_hash(const NetworkSpec& spec) {
  return hex64(fnv1a64(dump_network_config(spec)));
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  }
};

void merge_report_params(RunManifest& manifest, const std::string& stem,
                         const ExperimentReport& report) {
  for (const auto& [key, value] : report.params) {
    manifest.parameters[stem + "." + key] = value;
  }
}

std::string one_line_csv(const RealVector& v) {
  std::vector<std::string> cells;
  cells.reserve(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    cells.push_back(csv::format_double(v[i]));
  }
  return csv::join_row(cells);
}

// The condition-matched optimum used as a precondition by several studies.
RealVector optimum_for(const NetworkSpec& spec, const RealVector& gamma,
                       const OptimizerConfig& config) {
  NetworkSpec base = spec;
  base.dephasing_rates = gamma;
  base.local_energies = RealVector::Zero(spec.n_sites);
  return rmsprop_minimize(base, kTransferTime, config, base.local_energies)
      .h_opt;
}

std::map<std::string, RealVector> optima_for_conditions(
    const NetworkSpec& spec, const std::vector<GammaCondition>& conditions,
    const OptimizerConfig& config) {
  std::vector<RealVector> optima(conditions.size());
  parallel_for(static_cast<int>(conditions.size()), [&](int i) {
    optima[i] = optimum_for(spec, conditions[i].rates, config);
  });
  std::map<std::string, RealVector> out;
  for (std::size_t i = 0; i < conditions.size(); ++i) {
    out[conditions[i].name] = optima[i];
  }
  return out;
}

struct SimulateArgs {
  std::string config;
  double time = kTransferTime;
  std::string method = "expm";
  int samples = 500;
  std::string out = "out";
};

int run_simulate(const SimulateArgs& args) {
  Timer timer;
  const NetworkSpec spec = load_network_config(args.config);
  const PropagationMethod method = (args.method == "ode")
                                       ? PropagationMethod::Ode
                                       : PropagationMethod::Expm;
  if (args.samples < 1) throw ConfigError("--samples must be >= 1");
  const ExperimentReport report =
      simulate_trajectory(spec, uniform_times(args.time, args.samples), method);

  RunManifest manifest;
  manifest.command = "simulate";
  manifest.config_path = args.config;
  manifest.output_directory = args.out;
  manifest.parameters["config_fnv1a64"] = spec_hash(spec);
  manifest.parameters["time"] = csv::format_double(args.time);
  manifest.parameters["method"] = args.method;
  manifest.parameters["samples"] = std::to_string(args.samples);
  merge_report_params(manifest, "trajectory", report);
  std::filesystem::create_directories(args.out);
  write_artifact(manifest, args.out, "trajectory.csv", report.to_csv());
  manifest.duration_seconds = timer.seconds();
  write_manifest(manifest, args.out);
  std::cout << "wrote " << args.out << "/trajectory.csv ("
            << report.rows.size() << " rows)\n";
  return 0;
}

struct OptimizeArgs {
  std::string config;
  double time = kTransferTime;
  int iters = 2000;
  double lr = 1.0;
  std::optional<double> target;  // target r_s^T
  std::uint64_t seed = 0;
  std::string out = "out";
};

int run_optimize(const OptimizeArgs& args) {
  Timer timer;
  const NetworkSpec spec = load_network_config(args.config);
  OptimizerConfig config;
  config.max_iters = args.iters;
  config.learning_rate = args.lr;
  config.seed = args.seed;
  if (args.target) config.target_cost = 1.0 - *args.target;
  config.validate();

  const OptimizationResult result =
      rmsprop_minimize(spec, args.time, config, spec.local_energies);

  std::string curve = csv::join_row({"iteration", "r_s_T"});
  double best_rs = 0.0;
  for (const auto& [iter, rs] : result.learning_curve) {
    curve += csv::join_row({std::to_string(iter), csv::format_double(rs)});
    best_rs = std::max(best_rs, rs);
  }

  RunManifest manifest;
  manifest.command = "optimize";
  manifest.config_path = args.config;
  manifest.seed = args.seed;
  manifest.output_directory = args.out;
  manifest.parameters["config_fnv1a64"] = spec_hash(spec);
  manifest.parameters["time"] = csv::format_double(args.time);
  manifest.parameters["iters"] = std::to_string(args.iters);
  manifest.parameters["learning_rate"] = csv::format_double(args.lr);
  if (args.target) {
    manifest.parameters["target_r_s"] = csv::format_double(*args.target);
  }
  manifest.parameters["r_s_best"] = csv::format_double(best_rs);
  std::filesystem::create_directories(args.out);
  write_artifact(manifest, args.out, "h_opt.csv", one_line_csv(result.h_opt));
  write_artifact(manifest, args.out, "learning_curve.csv", curve);
  manifest.duration_seconds = timer.seconds();
  write_manifest(manifest, args.out);
  std::cout << "best r_s = " << csv::format_double(best_rs) << " after "
            << result.learning_curve.size() << " iterations\n";
  return 0;
}

struct ExperimentArgs {
  std::string name;
  std::string config;
  std::optional<double> time;
  std::optional<int> samples;
  std::optional<int> iters;
  double lr = 1.0;
  std::uint64_t seed = 1;
  std::vector<int> sink_pair = {3, 7};
  std::string out = "out";
};

int run_experiment(const ExperimentArgs& args) {
  Timer timer;
  const NetworkSpec spec = load_network_config(args.config);
  const double transfer_time = args.time.value_or(kTransferTime);

  OptimizerConfig full_config;
  full_config.max_iters = args.iters.value_or(full_config.max_iters);
  full_config.learning_rate = args.lr;
  full_config.validate();

  RunManifest manifest;
  manifest.command = "experiment " + args.name;
  manifest.config_path = args.config;
  manifest.seed = args.seed;
  manifest.output_directory = args.out;
  manifest.parameters["config_fnv1a64"] = spec_hash(spec);
  std::filesystem::create_directories(args.out);

  auto emit = [&](const std::string& file_name, const ExperimentReport& report) {
    const std::string stem =
        file_name.substr(0, file_name.find_last_of('.'));
    merge_report_params(manifest, stem, report);
    write_artifact(manifest, args.out, file_name, report.to_csv());
    std::cout << "wrote " << args.out << "/" << file_name << " ("
              << report.rows.size() << " rows)\n";
  };
  const auto conditions = standard_conditions(spec);

  if (args.name == "table1") {
    const TransferTableResult result =
        transfer_table(spec, transfer_time, full_config);
    emit("table1.csv", result.report);
    for (const auto& [name, h] : result.optimal_energies) {
      write_artifact(manifest, args.out, "h_opt_" + name + ".csv",
                     one_line_csv(h));
    }
  } else if (args.name == "sweep") {
    OptimizerConfig config = sweep_config();
    config.max_iters = args.iters.value_or(config.max_iters);
    config.learning_rate = args.lr;
    const SweepResult result = dephasing_sweep(
        spec, default_dephasing_grid(), /*optimize_each=*/true, transfer_time,
        config);
    emit("sweep.csv", result.report);
  } else if (args.name == "compare-ref") {
    const RealVector h_opt =
        optimum_for(spec, spec.dephasing_rates, full_config);
    const CompareReferenceResult result = compare_reference(
        spec, h_opt, transfer_time, args.samples.value_or(512));
    emit("compare_ref.csv", result.report);
  } else if (args.name == "resil-init" || args.name == "resil-sink" ||
             args.name == "dual-sink" || args.name == "random-couplings") {
    const auto optima = optima_for_conditions(spec, conditions, full_config);
    for (const auto& cond : conditions) {
      const RealVector& h_opt = optima.at(cond.name);
      if (args.name == "resil-init") {
        emit("resil_init_" + cond.name + ".csv",
             resilience_initial_sites(spec, h_opt, cond.rates, transfer_time)
                 .report);
      } else if (args.name == "resil-sink") {
        emit("resil_sink_" + cond.name + ".csv",
             resilience_sink_sites(spec, h_opt, cond.rates, transfer_time)
                 .report);
      } else if (args.name == "dual-sink") {
        if (args.sink_pair.size() != 2) {
          throw ConfigError("--pair expects exactly two sites");
        }
        emit("dual_sink_" + cond.name + ".csv",
             dual_sink(spec, h_opt, cond.rates,
                       {args.sink_pair[0], args.sink_pair[1]}, transfer_time)
                 .report);
      } else {
        emit("random_couplings_" + cond.name + ".csv",
             random_coupling_study(spec, h_opt, cond.rates,
                                   args.samples.value_or(1000), args.seed,
                                   -200.0, 200.0, transfer_time)
                 .report);
      }
    }
  } else if (args.name == "shrink") {
    for (const auto& cond : conditions) {
      emit("shrink_" + cond.name + ".csv",
           node_removal_study(spec, cond.rates, transfer_time, full_config)
               .report);
    }
  } else if (args.name == "coherence") {
    const auto optima = optima_for_conditions(spec, conditions, full_config);
    std::vector<CoherenceCondition> coherence_conditions;
    for (const auto& cond : conditions) {
      coherence_conditions.push_back(
          {cond.name, cond.rates, optima.at(cond.name)});
    }
    const CoherenceResult result =
        coherence_study(spec, default_chain(spec), coherence_conditions,
                        args.time.value_or(10.0), args.samples.value_or(512));
    for (const auto& entry : result.entries) {
      emit("coherence_" + entry.name + ".csv", entry.trajectory);
    }
  } else {
    throw ConfigError("unknown experiment '" + args.name +
                      "' (expected table1, sweep, compare-ref, resil-init, "
                      "resil-sink, dual-sink, random-couplings, shrink or "
                      "coherence)");
  }

  manifest.duration_seconds = timer.seconds();
  write_manifest(manifest, args.out);
  return 0;
}

int run_dump_config(const std::string& path) {
  std::cout << dump_network_config(load_network_config(path));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"excitation-transfer simulation and optimization toolkit"};
  app.require_subcommand(1);

  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "propagate the network and write trajectory.csv");
  simulate->add_option("config", sim.config, "network config file")->required();
  simulate->add_option("--time", sim.time, "final time T in ps");
  simulate->add_option("--method", sim.method, "propagator: expm or ode")
      ->check(CLI::IsMember({"expm", "ode"}));
  simulate->add_option("--samples", sim.samples,
                       "number of uniform intervals on [0, T]");
  simulate->add_option("--out", sim.out, "output directory");

  OptimizeArgs opt;
  CLI::App* optimize = app.add_subcommand(
      "optimize", "RMSprop energy optimization; writes h_opt.csv and "
                  "learning_curve.csv");
  optimize->add_option("config", opt.config, "network config file")->required();
  optimize->add_option("--time", opt.time, "final time T in ps");
  optimize->add_option("--iters", opt.iters, "maximum iterations");
  optimize->add_option("--lr", opt.lr, "learning rate");
  optimize->add_option("--target", opt.target,
                       "stop early once r_s^T reaches this value");
  optimize->add_option("--seed", opt.seed, "run seed (recorded in manifest)");
  optimize->add_option("--out", opt.out, "output directory");

  ExperimentArgs exp;
  CLI::App* experiment = app.add_subcommand(
      "experiment", "run a named study (table1, sweep, compare-ref, "
                    "resil-init, resil-sink, dual-sink, random-couplings, "
                    "shrink, coherence)");
  experiment->add_option("name", exp.name, "experiment name")->required();
  experiment->add_option("config", exp.config, "network config file")
      ->required();
  experiment->add_option("--time", exp.time, "final time T in ps");
  experiment->add_option("--samples", exp.samples,
                         "sample count (draws or trajectory points)");
  experiment->add_option("--iters", exp.iters, "optimizer iteration budget");
  experiment->add_option("--lr", exp.lr, "optimizer learning rate");
  experiment->add_option("--seed", exp.seed, "master seed for random draws");
  experiment->add_option("--pair", exp.sink_pair,
                         "sink site pair for dual-sink")
      ->expected(2);
  experiment->add_option("--out", exp.out, "output directory");

  std::string dump_path;
  CLI::App* dump = app.add_subcommand(
      "dump-config", "parse a config and print its canonical form");
  dump->add_option("config", dump_path, "network config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (simulate->parsed()) return run_simulate(sim);
    if (optimize->parsed()) return run_optimize(opt);
    if (experiment->parsed()) return run_experiment(exp);
    if (dump->parsed()) return run_dump_config(dump_path);
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const DivergenceError& e) {
    std::cerr << "optimizer divergence: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  }
}
