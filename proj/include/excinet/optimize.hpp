#ifndef EXCINET_OPTIMIZE_HPP
#define EXCINET_OPTIMIZE_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "excinet/liouville.hpp"
#include "excinet/network.hpp"

namespace excinet {

struct OptimizerConfig {
  double learning_rate = 1.0;
  double decay = 0.9;          ///< moving-average weight for squared gradients
  double epsilon = 1e-8;       ///< division guard
  int max_iters = 2000;
  std::optional<double> target_cost{};  ///< early stop when cost drops below
  std::uint64_t seed = 0;      ///< reserved for randomized restarts

  void validate() const;
};

struct OptimizationResult {
  RealVector h_opt;  ///< best-cost iterate observed (not necessarily the last)
  std::vector<std::pair<int, double>> learning_curve;  ///< (iteration, r_s^T)
  double final_cost = 1.0;          ///< 1 - last recorded r_s^T
  double gradient_norm_final = 0.0;
};

/// Final-time transfer problem: cost C(h) = 1 - r_s^T for the network `spec`
/// with on-site energies h. The superoperator's fixed part is assembled once;
/// every evaluation only updates the energy diagonal.
///
/// The gradient uses the block-triangular identity
/// exp([[A, E], [0, A]]) = [[e^A, D], [0, e^A]], where D is the Frechet
/// derivative of the exponential along E: one augmented exponential in the
/// adjoint direction E = r0 s† yields every component as
/// d r_s / d h_n = Re tr(A_n D) with A_n = -(i/hbar) T G_n diagonal, plus the
/// cost itself from the diagonal block.
class TransferProblem {
 public:
  TransferProblem(const NetworkSpec& spec, double time);

  double cost(const RealVector& h) const;
  RealVector gradient(const RealVector& h) const;
  /// One augmented exponential for both values.
  std::pair<double, RealVector> cost_and_gradient(const RealVector& h) const;

  int n_sites() const { return n_sites_; }
  double time() const { return time_; }

 private:
  Matrix generator(const RealVector& h) const;  ///< A(h) = -(i/hbar) T L(h)

  int n_sites_;
  double time_;
  double hbar_;
  bool sink_reachable_;  ///< false when no transfer channel feeds the sink
  int r0_flat_;
  int sink_flat_;
  Matrix fixed_dense_;                  ///< dense -(i/hbar)T * fixed part
  std::vector<RealVector> gen_diag_;    ///< diagonals of the energy generators
};

/// Convenience wrappers constructing a TransferProblem per call.
double cost(const RealVector& h, const NetworkSpec& spec, double time);
RealVector gradient(const RealVector& h, const NetworkSpec& spec, double time);

/// Central finite differences (the independent oracle for `gradient`).
RealVector gradient_fd(const RealVector& h, const NetworkSpec& spec,
                       double time, double step = 1e-3);

/// RMSprop minimization of the transfer cost:
///   v <- decay*v + (1-decay)*g^2,  h <- h - lr * g / (sqrt(v) + eps).
/// Records r_s^T for each iteration, returns the best-cost iterate, and
/// aborts with DivergenceError if the cost exceeds 1 + 1e-6 or |h| exceeds
/// 1e6. Bit-deterministic given identical inputs.
OptimizationResult rmsprop_minimize(const NetworkSpec& spec, double time,
                                    const OptimizerConfig& config,
                                    const RealVector& h0);

}  // namespace excinet

#endif  // EXCINET_OPTIMIZE_HPP
