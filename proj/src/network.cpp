#include "excinet/network.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "excinet/random.hpp"

namespace excinet {

namespace {

SparseMatrix single_entry(int dim, int row, int col, double value) {
  SparseMatrix m(dim, dim);
  m.insert(row, col) = Complex(value, 0.0);
  m.makeCompressed();
  return m;
}

void require(bool ok, const std::string& field, const std::string& message) {
  if (!ok) throw ConfigError(field + ": " + message);
}

}  // namespace

void NetworkSpec::validate() const {
  require(n_sites >= 1, "n_sites", "need at least one site");
  require(couplings.rows() == n_sites && couplings.cols() == n_sites,
          "couplings", "must be n_sites x n_sites");
  require(couplings.allFinite(), "couplings", "non-finite entry");
  for (int i = 0; i < n_sites; ++i) {
    require(couplings(i, i) == 0.0, "couplings", "diagonal must be zero");
    for (int j = i + 1; j < n_sites; ++j) {
      require(couplings(i, j) == couplings(j, i), "couplings",
              "must be exactly symmetric");
    }
  }
  auto check_rates = [&](const RealVector& v, const std::string& field) {
    require(v.size() == n_sites, field, "must have one entry per site");
    require(v.allFinite(), field, "non-finite entry");
    require((v.array() >= 0.0).all(), field, "rates must be nonnegative");
  };
  require(local_energies.size() == n_sites, "local_energies",
          "must have one entry per site");
  require(local_energies.allFinite(), "local_energies", "non-finite entry");
  check_rates(dephasing_rates, "dephasing_rates");
  check_rates(loss_rates, "loss_rates");
  require(std::isfinite(sink_rate) && sink_rate >= 0.0, "sink_rate",
          "must be a nonnegative finite number");
  require(!sink_sites.empty(), "sink_sites", "must not be empty");
  for (int m : sink_sites) {
    require(m >= 1 && m <= n_sites, "sink_sites", "site index out of range");
  }
  for (std::size_t i = 1; i < sink_sites.size(); ++i) {
    require(sink_sites[i] > sink_sites[i - 1], "sink_sites",
            "must be strictly increasing (no duplicates)");
  }
  require(initial_site >= 1 && initial_site <= n_sites, "initial_site",
          "site index out of range");
  require(std::isfinite(hbar) && hbar > 0.0, "hbar", "must be positive");
}

Matrix build_hamiltonian(const NetworkSpec& spec) {
  spec.validate();
  const int d = spec.dim();
  Matrix h = Matrix::Zero(d, d);
  for (int n = 1; n <= spec.n_sites; ++n) {
    h(n, n) = spec.local_energies[n - 1];
    for (int m = 1; m < n; ++m) {
      h(m, n) = spec.couplings(m - 1, n - 1);
      h(n, m) = spec.couplings(n - 1, m - 1);
    }
  }
  return h;
}

std::vector<JumpOperator> build_jump_operators(const NetworkSpec& spec) {
  spec.validate();
  const int d = spec.dim();
  std::vector<JumpOperator> ops;
  for (int n = 1; n <= spec.n_sites; ++n) {
    const double rate = kRateConventionFactor * spec.dephasing_rates[n - 1];
    if (rate > 0.0) {
      ops.push_back({JumpKind::Dephasing, n, rate,
                     single_entry(d, n, n, std::sqrt(rate))});
    }
  }
  for (int n = 1; n <= spec.n_sites; ++n) {
    const double rate = kRateConventionFactor * spec.loss_rates[n - 1];
    if (rate > 0.0) {
      ops.push_back({JumpKind::Loss, n, rate,
                     single_entry(d, spec.loss_index(), n, std::sqrt(rate))});
    }
  }
  const double sink = kRateConventionFactor * spec.sink_rate;
  if (sink > 0.0) {
    for (int m : spec.sink_sites) {
      ops.push_back({JumpKind::SinkTransfer, m, sink,
                     single_entry(d, spec.sink_index(), m, std::sqrt(sink))});
    }
  }
  return ops;
}

const RealVector& fmo_reference_energies() {
  static const RealVector h = [] {
    RealVector v(7);
    v << 215, 220, 0, 125, 450, 330, 280;
    return v;
  }();
  return h;
}

const RealVector& fmo_reference_dephasing() {
  static const RealVector g = [] {
    RealVector v(7);
    v << 0.157, 9.432, 7.797, 9.432, 7.797, 0.922, 9.433;
    return v;
  }();
  return g;
}

NetworkSpec fmo_reference_spec() {
  NetworkSpec spec;
  spec.n_sites = 7;
  spec.couplings.resize(7, 7);
  spec.couplings << 0.0, -104.1, 5.1, -4.3, 4.7, -15.1, -7.8,
      -104.1, 0.0, 32.6, 7.1, 5.4, 8.3, 0.8,
      5.1, 32.6, 0.0, -46.8, 1.0, -8.1, 5.1,
      -4.3, 7.1, -46.8, 0.0, -70.7, -14.7, -61.5,
      4.7, 5.4, 1.0, -70.7, 0.0, 89.7, -2.5,
      -15.1, 8.3, -8.1, -14.7, 89.7, 0.0, 32.7,
      -7.8, 0.8, 5.1, -61.5, -2.5, 32.7, 0.0;
  spec.local_energies = RealVector::Zero(7);
  spec.dephasing_rates = fmo_reference_dephasing();
  spec.loss_rates = RealVector::Constant(7, 5e-4);
  spec.sink_rate = 6.283;
  spec.sink_sites = {3};
  spec.initial_site = 1;
  spec.hbar = kDefaultHbar;
  return spec;
}

RealMatrix random_couplings(int n, double lo, double hi, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("random_couplings: need n >= 2");
  if (!(lo < hi)) throw std::invalid_argument("random_couplings: need lo < hi");
  std::mt19937_64 engine(seed);
  RealMatrix j = RealMatrix::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      j(a, b) = uniform_double(engine, lo, hi);
      j(b, a) = j(a, b);
    }
  }
  return j;
}

NetworkSpec remove_node(const NetworkSpec& spec, int node) {
  spec.validate();
  if (node < 1 || node > spec.n_sites) {
    throw std::invalid_argument("remove_node: site index out of range");
  }
  if (node == spec.initial_site) {
    throw std::invalid_argument("remove_node: cannot remove the initial site");
  }
  if (std::find(spec.sink_sites.begin(), spec.sink_sites.end(), node) !=
      spec.sink_sites.end()) {
    throw std::invalid_argument("remove_node: cannot remove a sink site");
  }
  if (spec.n_sites < 4) {
    throw std::invalid_argument("remove_node: result must keep at least 3 sites");
  }

  NetworkSpec out = spec;
  const int n = spec.n_sites - 1;
  out.n_sites = n;
  out.couplings.resize(n, n);
  out.local_energies.resize(n);
  out.dephasing_rates.resize(n);
  out.loss_rates.resize(n);
  auto shifted = [&](int old_index) {
    return old_index < node ? old_index : old_index - 1;
  };
  for (int a = 1; a <= spec.n_sites; ++a) {
    if (a == node) continue;
    const int ra = shifted(a);
    out.local_energies[ra - 1] = spec.local_energies[a - 1];
    out.dephasing_rates[ra - 1] = spec.dephasing_rates[a - 1];
    out.loss_rates[ra - 1] = spec.loss_rates[a - 1];
    for (int b = 1; b <= spec.n_sites; ++b) {
      if (b == node) continue;
      out.couplings(ra - 1, shifted(b) - 1) = spec.couplings(a - 1, b - 1);
    }
  }
  out.initial_site = shifted(spec.initial_site);
  for (int& m : out.sink_sites) m = shifted(m);
  return out;
}

void ChainSpec::validate() const {
  if (n_chain < 1) throw ConfigError("n_chain: need at least one chain spin");
  if (!std::isfinite(chain_coupling) || !std::isfinite(bridge_coupling)) {
    throw ConfigError("chain couplings: non-finite value");
  }
}

ExtendedSpec extend_with_chain(const NetworkSpec& spec, const ChainSpec& chain) {
  spec.validate();
  chain.validate();
  if (chain.extra_site && spec.n_sites != 7) {
    throw ConfigError(
        "extra_site: the uncoupled extra site is only defined for the "
        "7-site network");
  }
  return ExtendedSpec{spec, chain};
}

Matrix build_extended_hamiltonian(const ExtendedSpec& ext) {
  const int d = ext.dim();
  const int n = ext.base.n_sites;
  Matrix h = Matrix::Zero(d, d);
  for (int a = 1; a <= n; ++a) {
    h(a, a) = ext.base.local_energies[a - 1];
    for (int b = 1; b < a; ++b) {
      h(b, a) = ext.base.couplings(b - 1, a - 1);
      h(a, b) = ext.base.couplings(a - 1, b - 1);
    }
  }
  const int head = ext.chain_start();
  h(ext.bridge_site(), head) = ext.chain.bridge_coupling;
  h(head, ext.bridge_site()) = ext.chain.bridge_coupling;
  for (int j = 0; j + 1 < ext.chain.n_chain; ++j) {
    h(head + j, head + j + 1) = ext.chain.chain_coupling;
    h(head + j + 1, head + j) = ext.chain.chain_coupling;
  }
  return h;
}

std::vector<JumpOperator> build_extended_jump_operators(const ExtendedSpec& ext) {
  const int d = ext.dim();
  const int n = ext.base.n_sites;
  std::vector<JumpOperator> ops;
  for (int a = 1; a <= n; ++a) {
    const double rate = kRateConventionFactor * ext.base.dephasing_rates[a - 1];
    if (rate > 0.0) {
      ops.push_back({JumpKind::Dephasing, a, rate,
                     single_entry(d, a, a, std::sqrt(rate))});
    }
  }
  for (int a = 1; a <= n; ++a) {
    const double rate = kRateConventionFactor * ext.base.loss_rates[a - 1];
    if (rate > 0.0) {
      ops.push_back({JumpKind::Loss, a, rate,
                     single_entry(d, 0, a, std::sqrt(rate))});
    }
  }
  return ops;
}

}  // namespace excinet
