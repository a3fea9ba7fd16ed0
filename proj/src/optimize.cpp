#include "excinet/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "excinet/expm.hpp"

namespace excinet {

void OptimizerConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("learning_rate: must be positive");
  }
  if (!(decay > 0.0 && decay < 1.0)) {
    throw ConfigError("decay: must lie in (0, 1)");
  }
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw ConfigError("epsilon: must be positive");
  }
  if (max_iters < 1) throw ConfigError("max_iters: must be positive");
  if (target_cost && !std::isfinite(*target_cost)) {
    throw ConfigError("target_cost: must be finite");
  }
}

TransferProblem::TransferProblem(const NetworkSpec& spec, double time)
    : n_sites_(spec.n_sites), time_(time), hbar_(spec.hbar) {
  if (!(time > 0.0)) {
    throw std::invalid_argument("TransferProblem: time must be positive");
  }
  spec.validate();
  const auto jumps = build_jump_operators(spec);
  sink_reachable_ = std::any_of(jumps.begin(), jumps.end(), [](const auto& j) {
    return j.kind == JumpKind::SinkTransfer;
  });

  const SuperOperator op =
      assemble(build_hamiltonian(spec), jumps, spec.hbar, spec.n_sites);
  const Complex factor(0.0, -time / spec.hbar);
  fixed_dense_ = factor * Matrix(op.fixed_part);
  gen_diag_.reserve(op.energy_generators.size());
  for (const auto& gen : op.energy_generators) {
    RealVector diag = RealVector::Zero(op.dim * op.dim);
    for (int col = 0; col < gen.outerSize(); ++col) {
      for (SparseMatrix::InnerIterator it(gen, col); it; ++it) {
        diag[it.row()] = it.value().real();
      }
    }
    gen_diag_.push_back(std::move(diag));
  }

  const int d = spec.dim();
  r0_flat_ = spec.initial_site * d + spec.initial_site;
  sink_flat_ = d * d - 1;
}

Matrix TransferProblem::generator(const RealVector& h) const {
  if (h.size() != n_sites_) {
    throw std::invalid_argument("cost: wrong energy-vector length");
  }
  if (!h.allFinite()) {
    throw std::invalid_argument("cost: non-finite energies");
  }
  Matrix a = fixed_dense_;
  const Complex factor(0.0, -time_ / hbar_);
  for (int n = 0; n < n_sites_; ++n) {
    const Complex scale = factor * h[n];
    for (Eigen::Index k = 0; k < a.rows(); ++k) {
      if (gen_diag_[n][k] != 0.0) a(k, k) += scale * gen_diag_[n][k];
    }
  }
  return a;
}

double TransferProblem::cost(const RealVector& h) const {
  if (!sink_reachable_) {
    generator(h);  // still validates the input
    return 1.0;
  }
  const Matrix m = expm(generator(h));
  const double rs = m(sink_flat_, r0_flat_).real();
  if (!std::isfinite(rs)) throw NumericalError("cost: non-finite result");
  return 1.0 - rs;
}

std::pair<double, RealVector> TransferProblem::cost_and_gradient(
    const RealVector& h) const {
  if (!sink_reachable_) {
    generator(h);
    // The sink population is identically zero, so the cost is constant.
    return {1.0, RealVector::Zero(n_sites_)};
  }
  const Matrix a = generator(h);
  Matrix direction = Matrix::Zero(a.rows(), a.cols());
  direction(r0_flat_, sink_flat_) = 1.0;
  const ExpmFrechetResult res = expm_frechet(a, direction);

  const double rs = res.expa(sink_flat_, r0_flat_).real();
  if (!std::isfinite(rs)) {
    throw NumericalError("cost_and_gradient: non-finite result");
  }

  const Complex factor(0.0, -time_ / hbar_);
  RealVector grad(n_sites_);
  for (int n = 0; n < n_sites_; ++n) {
    Complex tr{};
    for (Eigen::Index k = 0; k < a.rows(); ++k) {
      if (gen_diag_[n][k] != 0.0) {
        tr += gen_diag_[n][k] * res.dexpa(k, k);
      }
    }
    // d r_s / d h_n = Re tr(A_n D); the cost gradient is its negative.
    grad[n] = -(factor * tr).real();
  }
  if (!grad.allFinite()) {
    throw NumericalError("cost_and_gradient: non-finite gradient");
  }
  return {1.0 - rs, grad};
}

RealVector TransferProblem::gradient(const RealVector& h) const {
  return cost_and_gradient(h).second;
}

double cost(const RealVector& h, const NetworkSpec& spec, double time) {
  return TransferProblem(spec, time).cost(h);
}

RealVector gradient(const RealVector& h, const NetworkSpec& spec,
                    double time) {
  return TransferProblem(spec, time).gradient(h);
}

RealVector gradient_fd(const RealVector& h, const NetworkSpec& spec,
                       double time, double step) {
  TransferProblem problem(spec, time);
  RealVector grad(h.size());
  for (Eigen::Index n = 0; n < h.size(); ++n) {
    RealVector hp = h;
    RealVector hm = h;
    hp[n] += step;
    hm[n] -= step;
    grad[n] = (problem.cost(hp) - problem.cost(hm)) / (2.0 * step);
  }
  return grad;
}

OptimizationResult rmsprop_minimize(const NetworkSpec& spec, double time,
                                    const OptimizerConfig& config,
                                    const RealVector& h0) {
  config.validate();
  TransferProblem problem(spec, time);
  if (h0.size() != spec.n_sites) {
    throw std::invalid_argument("rmsprop_minimize: wrong h0 length");
  }

  RealVector h = h0;
  RealVector v = RealVector::Zero(h.size());
  OptimizationResult result;
  result.h_opt = h0;
  double best_cost = std::numeric_limits<double>::infinity();

  for (int iter = 1; iter <= config.max_iters; ++iter) {
    const auto [c, g] = problem.cost_and_gradient(h);
    if (!std::isfinite(c) || c > 1.0 + 1e-6) {
      throw DivergenceError("rmsprop_minimize: cost diverged");
    }
    result.learning_curve.emplace_back(iter, 1.0 - c);
    result.final_cost = c;
    result.gradient_norm_final = g.norm();
    if (c < best_cost) {
      best_cost = c;
      result.h_opt = h;
    }
    if (config.target_cost && c < *config.target_cost) break;

    v = (config.decay * v.array() +
         (1.0 - config.decay) * g.array().square())
            .matrix();
    h -= config.learning_rate *
         (g.array() / (v.array().sqrt() + config.epsilon)).matrix();
    if (h.norm() > 1e6) {
      throw DivergenceError("rmsprop_minimize: energies diverged");
    }
  }
  return result;
}

}  // namespace excinet
