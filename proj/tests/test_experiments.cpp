// Study drivers: row/column contracts, determinism, and cheap-budget sanity
// checks that do not depend on full optimization runs.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "excinet/experiments.hpp"
#include "excinet/liouville.hpp"

using namespace excinet;

namespace {

double cell(const ExperimentReport& report, std::size_t row,
            std::size_t col) {
  return std::stod(report.rows.at(row).at(col));
}

OptimizerConfig quick(int iters) {
  OptimizerConfig config;
  config.max_iters = iters;
  return config;
}

}  // namespace

TEST_CASE("standard_conditions carries the three canonical assignments") {
  const NetworkSpec spec = fmo_reference_spec();
  const auto conditions = standard_conditions(spec);
  REQUIRE(conditions.size() == 3);
  CHECK(conditions[0].name == "gamma_ref");
  CHECK(conditions[1].name == "ones");
  CHECK(conditions[2].name == "zeros");
  CHECK((conditions[0].rates - spec.dephasing_rates).cwiseAbs().maxCoeff() ==
        0.0);
  CHECK((conditions[1].rates - RealVector::Ones(7)).cwiseAbs().maxCoeff() ==
        0.0);
  CHECK(conditions[2].rates.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("uniform_times spans [0, T] inclusively") {
  const auto times = uniform_times(5.0, 4);
  REQUIRE(times.size() == 5);
  CHECK(times.front() == 0.0);
  CHECK(times.back() == 5.0);
  CHECK(times[2] == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(uniform_times(0.0, 10) == std::vector<double>{0.0});
  CHECK_THROWS_AS(uniform_times(-1.0, 4), ConfigError);
}

TEST_CASE("simulate_trajectory emits one row per sample time") {
  const NetworkSpec spec = fmo_reference_spec();
  const ExperimentReport report =
      simulate_trajectory(spec, uniform_times(5.0, 10));
  REQUIRE(report.header.size() == 10);  // t, r_s, p_loss, p1..p7
  CHECK(report.header[0] == "t");
  CHECK(report.header[1] == "r_s");
  CHECK(report.header[9] == "p7");
  REQUIRE(report.rows.size() == 11);
  CHECK(cell(report, 0, 0) == 0.0);
  CHECK(cell(report, 0, 1) == 0.0);           // nothing in the sink at t = 0
  CHECK(cell(report, 0, 3) == 1.0);           // everything on site 1
  CHECK(cell(report, 10, 1) ==
        doctest::Approx(0.9552159549).epsilon(1e-6));

  const ExperimentReport start = simulate_trajectory(spec, {0.0});
  REQUIRE(start.rows.size() == 1);
  CHECK(cell(start, 0, 1) == 0.0);
}

TEST_CASE("transfer_table reports all six condition/variant rows") {
  const NetworkSpec spec = fmo_reference_spec();
  const TransferTableResult result = transfer_table(spec, 5.0, quick(5));
  REQUIRE(result.report.rows.size() == 6);
  REQUIRE(result.report.header.size() == 7);

  for (const std::string name : {"gamma_ref", "ones", "zeros"}) {
    REQUIRE(result.unoptimized.count(name) == 1);
    REQUIRE(result.optimized.count(name) == 1);
    REQUIRE(result.optimal_energies.count(name) == 1);
    CHECK(result.optimal_energies.at(name).size() == 7);
    // The optimizer starts from h = 0 and returns the best iterate, so it can
    // never fall below the unoptimized baseline.
    CHECK(result.optimized.at(name) >=
          result.unoptimized.at(name) - 1e-12);
  }
  CHECK(result.unoptimized.at("gamma_ref") ==
        doctest::Approx(0.9552159549).epsilon(1e-6));
  CHECK(result.unoptimized.at("ones") ==
        doctest::Approx(0.9227347562).epsilon(1e-6));
  CHECK(result.unoptimized.at("zeros") ==
        doctest::Approx(0.6393027580).epsilon(1e-6));

  // Byte-identical rerun.
  const TransferTableResult again = transfer_table(spec, 5.0, quick(5));
  CHECK(again.report.to_csv() == result.report.to_csv());
}

TEST_CASE("dephasing_sweep walks the grid in order") {
  const NetworkSpec spec = fmo_reference_spec();
  const std::vector<double> grid{0.0, 5.0, 20.0};

  const SweepResult plain = dephasing_sweep(spec, grid, false, 5.0, quick(2));
  REQUIRE(plain.report.rows.size() == 3);
  CHECK(plain.gammas == grid);
  CHECK(plain.rs_optimized.empty());
  CHECK(plain.rs_plain[0] == doctest::Approx(0.6393027580).epsilon(1e-6));
  CHECK(plain.rs_plain[1] > plain.rs_plain[0]);  // dephasing assists transfer

  const SweepResult opt = dephasing_sweep(spec, grid, true, 5.0, quick(2));
  REQUIRE(opt.rs_optimized.size() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(opt.rs_optimized[i] >= opt.rs_plain[i] - 1e-12);
  }

  CHECK(default_dephasing_grid().size() == 41);
  CHECK(default_dephasing_grid().front() == 0.0);
  CHECK(default_dephasing_grid().back() == 20.0);
}

TEST_CASE("compare_reference samples both trajectories consistently") {
  const NetworkSpec spec = fmo_reference_spec();
  const CompareReferenceResult result =
      compare_reference(spec, RealVector::Zero(7), 5.0, 16);
  REQUIRE(result.report.rows.size() == 17);
  REQUIRE(result.report.header.size() == 4);
  CHECK(cell(result.report, 0, 1) == 0.0);
  CHECK(cell(result.report, 0, 2) == 0.0);
  CHECK(result.dominates == (result.n_violations == 0));
  if (result.dominates) {
    CHECK(result.min_margin >= 0.0);
  } else {
    CHECK(result.min_margin < 0.0);
  }
  int ahead = 0;
  for (std::size_t k = 1; k < result.report.rows.size(); ++k) {
    ahead += result.report.rows[k][3] == "1" ? 1 : 0;
  }
  CHECK(ahead == 16 - result.n_violations);
}

TEST_CASE("resilience scans cover every admissible placement") {
  const NetworkSpec spec = fmo_reference_spec();
  const RealVector h0 = RealVector::Zero(7);
  const RealVector gref = fmo_reference_dephasing();

  const ResilienceResult init = resilience_initial_sites(spec, h0, gref, 5.0);
  REQUIRE(init.report.rows.size() == 6);  // all sites except the sink
  double lowest = 2.0;
  for (std::size_t k = 0; k < init.report.rows.size(); ++k) {
    CHECK(init.report.rows[k][0] != "3");
    lowest = std::min(lowest, cell(init.report, k, 1));
  }
  CHECK(init.min_rs == doctest::Approx(lowest).epsilon(1e-12));
  CHECK(init.argmin_site >= 1);
  CHECK(init.argmin_site <= 7);

  const ResilienceResult sink = resilience_sink_sites(spec, h0, gref, 5.0);
  REQUIRE(sink.report.rows.size() == 6);  // all sites except the initial one
  for (std::size_t k = 0; k < sink.report.rows.size(); ++k) {
    CHECK(sink.report.rows[k][0] != "1");
  }
}

TEST_CASE("dual_sink compares against the single-sink baseline") {
  const NetworkSpec spec = fmo_reference_spec();
  const RealVector h0 = RealVector::Zero(7);
  const RealVector gref = fmo_reference_dephasing();
  const DualSinkResult result = dual_sink(spec, h0, gref, {3, 7}, 5.0);
  REQUIRE(result.report.rows.size() == 2);
  CHECK(result.report.rows[0][0] == "3");
  CHECK(result.report.rows[1][0] == "3;7");
  CHECK(result.rs_single == doctest::Approx(0.9552159549).epsilon(1e-6));
  CHECK(result.rs_dual > result.rs_single);

  CHECK_THROWS_AS(dual_sink(spec, h0, gref, {3, 3}, 5.0), ConfigError);
  CHECK_THROWS_AS(dual_sink(spec, h0, gref, {0, 7}, 5.0), ConfigError);
}

TEST_CASE("random_coupling_study is a deterministic prefix-stable stream") {
  const NetworkSpec spec = fmo_reference_spec();
  const RealVector h0 = RealVector::Zero(7);
  const RealVector gref = fmo_reference_dephasing();

  const RandomCouplingResult ten =
      random_coupling_study(spec, h0, gref, 10, 7);
  REQUIRE(ten.report.rows.size() == 10);
  CHECK(ten.min_rs <= ten.median_rs);
  CHECK(ten.median_rs <= ten.max_rs);

  const RandomCouplingResult five =
      random_coupling_study(spec, h0, gref, 5, 7);
  for (int k = 0; k < 5; ++k) {
    CHECK(five.report.rows[k] == ten.report.rows[k]);
  }

  const RandomCouplingResult rerun =
      random_coupling_study(spec, h0, gref, 10, 7);
  CHECK(rerun.report.to_csv() == ten.report.to_csv());

  const RandomCouplingResult other =
      random_coupling_study(spec, h0, gref, 10, 8);
  CHECK(other.report.to_csv() != ten.report.to_csv());
}

TEST_CASE("node_removal_study shrinks greedily to three sites") {
  const NetworkSpec spec = fmo_reference_spec();
  const NodeRemovalResult result =
      node_removal_study(spec, fmo_reference_dephasing(), 5.0, quick(15));
  REQUIRE(result.report.rows.size() == 5);  // removals 0..4
  REQUIRE(result.rs_by_removals.size() == 5);
  REQUIRE(result.removed_sites.size() == 4);

  std::set<int> seen;
  for (int site : result.removed_sites) {
    CHECK(site >= 1);
    CHECK(site <= 7);
    CHECK(site != 1);  // initial site is never removed
    CHECK(site != 3);  // sink site is never removed
    seen.insert(site);
  }
  CHECK(seen.size() == 4);  // original labels, no repeats

  for (std::size_t k = 0; k < result.report.rows.size(); ++k) {
    CHECK(result.report.rows[k][0] == std::to_string(k));
    CHECK(result.report.rows[k][3] == std::to_string(7 - k));
    CHECK(result.report.rows[k][4] == "ok");
  }
}

TEST_CASE("coherence_study tracks the chain-absorbed superposition") {
  const NetworkSpec spec = fmo_reference_spec();
  const ChainSpec chain = default_chain(spec);
  CHECK(chain.n_chain == 80);
  CHECK(chain.extra_site);
  CHECK(chain.bridge_coupling ==
        doctest::Approx(spec.hbar * spec.sink_rate).epsilon(1e-15));
  CHECK(chain.chain_coupling ==
        doctest::Approx(2.0 * chain.bridge_coupling).epsilon(1e-15));

  CoherenceCondition zeros{"zeros", RealVector::Zero(7), RealVector::Zero(7)};
  const CoherenceResult result =
      coherence_study(spec, chain, {zeros}, 10.0, 8);
  REQUIRE(result.entries.size() == 1);
  const CoherenceEntry& entry = result.entries[0];
  REQUIRE(entry.trajectory.rows.size() == 9);
  REQUIRE(entry.trajectory.header.size() == 14);  // t,r_s,p_loss,p1..p8,p_C,C,C_8
  CHECK(entry.trajectory.header[11] == "p_C");
  // The initial superposition of two basis states has l1 coherence exactly 1;
  // row 8 alone contributes the single off-diagonal magnitude 1/2.
  CHECK(entry.coherence_start == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(entry.c_start == doctest::Approx(1.0 / 87.0).epsilon(1e-9));
  CHECK(entry.site8_coherence_start == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(entry.chain_population_final > 0.0);

  ChainSpec bare = chain;
  bare.extra_site = false;
  CHECK_THROWS_AS(coherence_study(spec, bare, {zeros}, 10.0, 8), ConfigError);
}

TEST_CASE("a dissipation-free chain extension evolves unitarily") {
  NetworkSpec spec = fmo_reference_spec();
  spec.dephasing_rates = RealVector::Zero(7);
  spec.loss_rates = RealVector::Zero(7);
  const ExtendedSpec ext = extend_with_chain(spec, default_chain(spec));
  const SuperOperator op =
      assemble(build_extended_hamiltonian(ext),
               build_extended_jump_operators(ext), spec.hbar, 0);

  const int d = ext.dim();
  Vector psi = Vector::Zero(d);
  psi[1] = 1.0 / std::sqrt(2.0);
  psi[ext.extra_index()] = 1.0 / std::sqrt(2.0);
  const Matrix rho0 = psi * psi.adjoint();

  const auto states =
      propagate_trajectory(op, StateVector::vectorize(rho0),
                           uniform_times(2.0, 4), PropagationMethod::Ode);
  for (const StateVector& r : states) {
    const Matrix rho = r.devectorize();
    const double purity = (rho * rho).trace().real();
    CHECK(purity == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("to_csv applies RFC-4180 quoting") {
  ExperimentReport report;
  report.header = {"plain", "needs,comma", "needs\"quote"};
  report.rows.push_back({"1", "a,b", "say \"hi\""});
  const std::string csv = report.to_csv();
  CHECK(csv ==
        "plain,\"needs,comma\",\"needs\"\"quote\"\n"
        "1,\"a,b\",\"say \"\"hi\"\"\"\n");
}
