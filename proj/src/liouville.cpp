#include "excinet/liouville.hpp"

#include <cmath>
#include <map>

#include <unsupported/Eigen/KroneckerProduct>

#include "excinet/expm.hpp"
#include "excinet/ode.hpp"

namespace excinet {

StateVector StateVector::vectorize(const Matrix& rho) {
  if (rho.rows() != rho.cols()) {
    throw std::invalid_argument("vectorize: density matrix must be square");
  }
  const int d = static_cast<int>(rho.rows());
  StateVector r{d, Vector(d * d)};
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) r.data[i * d + j] = rho(i, j);
  }
  return r;
}

StateVector StateVector::basis_state(int dim, int k) {
  if (k < 0 || k >= dim) {
    throw std::invalid_argument("basis_state: index out of range");
  }
  StateVector r{dim, Vector::Zero(dim * dim)};
  r.data[k * dim + k] = 1.0;
  return r;
}

Matrix StateVector::devectorize() const {
  Matrix rho(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) rho(i, j) = data[i * dim + j];
  }
  return rho;
}

double StateVector::trace() const {
  Complex t{};
  for (int k = 0; k < dim; ++k) t += data[k * dim + k];
  return t.real();
}

double StateVector::trace_deviation() const {
  Complex t{};
  for (int k = 0; k < dim; ++k) t += data[k * dim + k];
  return std::abs(t - Complex(1.0, 0.0));
}

double StateVector::hermiticity_deviation() const {
  const Matrix rho = devectorize();
  return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

double StateVector::min_eigenvalue() const {
  const Matrix rho = devectorize();
  const Matrix sym = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym,
                                               Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

namespace {

SparseMatrix energy_generator(int d, int n) {
  // I (x) |n><n| - |n><n| (x) I is diagonal: +1 at flat (i, n) for all i,
  // -1 at flat (n, j) for all j, cancelling at (n, n).
  std::vector<Eigen::Triplet<Complex>> trip;
  trip.reserve(2 * (d - 1));
  for (int i = 0; i < d; ++i) {
    if (i == n) continue;
    trip.emplace_back(i * d + n, i * d + n, Complex(1.0, 0.0));
    trip.emplace_back(n * d + i, n * d + i, Complex(-1.0, 0.0));
  }
  SparseMatrix g(d * d, d * d);
  g.setFromTriplets(trip.begin(), trip.end());
  g.makeCompressed();
  return g;
}

SparseMatrix sparse_identity(int n) {
  SparseMatrix id(n, n);
  id.setIdentity();
  return id;
}

}  // namespace

SuperOperator assemble(const Matrix& h, const std::vector<JumpOperator>& jumps,
                       double hbar, int n_energy_sites) {
  const int d = static_cast<int>(h.rows());
  if (h.cols() != d) throw std::invalid_argument("assemble: H must be square");
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-9) {
    throw std::invalid_argument("assemble: H must be Hermitian");
  }
  if (n_energy_sites < 0 || n_energy_sites > d - 1) {
    throw std::invalid_argument("assemble: invalid energy-site count");
  }
  if (!(hbar > 0.0) || !std::isfinite(hbar)) {
    throw std::invalid_argument("assemble: hbar must be positive");
  }
  for (const auto& jump : jumps) {
    if (jump.matrix.rows() != d || jump.matrix.cols() != d) {
      throw std::invalid_argument("assemble: jump operator dimension mismatch");
    }
  }

  SuperOperator op;
  op.dim = d;
  op.n_energy_sites = n_energy_sites;
  op.hbar = hbar;
  op.energies.resize(n_energy_sites);

  // Split off the tunable diagonal.
  Matrix h_fixed = h;
  for (int n = 1; n <= n_energy_sites; ++n) {
    op.energies[n - 1] = h(n, n).real();
    h_fixed(n, n) = 0.0;
  }

  const SparseMatrix id = sparse_identity(d);
  const SparseMatrix hs = h_fixed.sparseView();
  const SparseMatrix hst = SparseMatrix(hs.transpose());
  SparseMatrix fixed =
      Eigen::kroneckerProduct(id, hs).eval() -
      Eigen::kroneckerProduct(hst, id).eval();
  for (const auto& jump : jumps) {
    const SparseMatrix& l = jump.matrix;
    const SparseMatrix lc = l.conjugate();
    const SparseMatrix ldl = SparseMatrix(l.adjoint()) * l;
    const SparseMatrix ldlt = SparseMatrix(ldl.transpose());
    SparseMatrix diss =
        Eigen::kroneckerProduct(lc, l).eval() -
        SparseMatrix(0.5 * (Eigen::kroneckerProduct(id, ldl).eval() +
                            Eigen::kroneckerProduct(ldlt, id).eval()));
    fixed += SparseMatrix((Complex(0.0, 1.0) * hbar) * diss);
  }
  fixed.makeCompressed();
  op.fixed_part = fixed;

  op.energy_generators.reserve(n_energy_sites);
  for (int n = 1; n <= n_energy_sites; ++n) {
    op.energy_generators.push_back(energy_generator(d, n));
  }

  SparseMatrix assembled = op.fixed_part;
  for (int n = 0; n < n_energy_sites; ++n) {
    assembled += SparseMatrix(Complex(op.energies[n], 0.0) *
                              op.energy_generators[n]);
  }
  assembled.makeCompressed();
  op.assembled = assembled;
  return op;
}

SuperOperator SuperOperator::with_energies(const RealVector& h) const {
  if (h.size() != n_energy_sites) {
    throw std::invalid_argument("with_energies: wrong energy-vector length");
  }
  if (!h.allFinite()) {
    throw std::invalid_argument("with_energies: non-finite energies");
  }
  SuperOperator out = *this;
  out.energies = h;
  SparseMatrix assembled = fixed_part;
  for (int n = 0; n < n_energy_sites; ++n) {
    assembled += SparseMatrix(Complex(h[n], 0.0) * energy_generators[n]);
  }
  assembled.makeCompressed();
  out.assembled = assembled;
  return out;
}

StateVector propagate(const SuperOperator& op, const StateVector& r0, double t,
                      PropagationMethod method) {
  if (t < 0.0) throw std::invalid_argument("propagate: negative time");
  if (r0.dim != op.dim || r0.data.size() != op.dim * op.dim) {
    throw std::invalid_argument("propagate: state dimension mismatch");
  }
  if (!r0.data.allFinite()) {
    throw NumericalError("propagate: non-finite initial state");
  }
  if (t == 0.0) return r0;

  const Complex factor(0.0, -t / op.hbar);
  StateVector out{op.dim, {}};
  if (method == PropagationMethod::Expm) {
    const Matrix a = factor * op.assembled_dense();
    out.data = expm(a) * r0.data;
  } else {
    const SparseMatrix m = SparseMatrix(Complex(0.0, -1.0 / op.hbar) *
                                        op.assembled);
    out.data = ode_propagate(m, r0.data, t);
  }
  if (!out.data.allFinite()) {
    throw NumericalError("propagate: non-finite state");
  }
  return out;
}

std::vector<StateVector> propagate_trajectory(const SuperOperator& op,
                                              const StateVector& r0,
                                              const std::vector<double>& times,
                                              PropagationMethod method) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < 0.0 || (i > 0 && times[i] < times[i - 1])) {
      throw std::invalid_argument(
          "propagate_trajectory: times must be ascending and nonnegative");
    }
  }
  std::vector<StateVector> out;
  out.reserve(times.size());
  if (times.empty()) return out;

  if (method == PropagationMethod::Ode) {
    const SparseMatrix m = SparseMatrix(Complex(0.0, -1.0 / op.hbar) *
                                        op.assembled);
    ode_trajectory(m, r0.data, times,
                   [&](std::size_t, const Vector& y) {
                     out.push_back(StateVector{op.dim, y});
                   });
    return out;
  }

  // Step-chained exponentials: one propagator per distinct increment.
  const Matrix lm = op.assembled_dense();
  std::map<double, Matrix> propagators;
  Vector r = r0.data;
  double t_prev = 0.0;
  for (double t : times) {
    const double dt = t - t_prev;
    if (dt > 0.0) {
      auto it = propagators.find(dt);
      if (it == propagators.end()) {
        const Matrix p = expm(Complex(0.0, -dt / op.hbar) * lm);
        it = propagators.emplace(dt, p).first;
      }
      r = it->second * r;
    }
    if (!r.allFinite()) {
      throw NumericalError("propagate_trajectory: non-finite state");
    }
    out.push_back(StateVector{op.dim, r});
    t_prev = t;
  }
  return out;
}

double sink_population(const StateVector& r) {
  const Complex v = r.data[r.data.size() - 1];
  if (std::abs(v.imag()) >= 1e-9) {
    throw NumericalError("sink_population: last diagonal is not real");
  }
  return v.real();
}

double population(const StateVector& r, int k) {
  if (k < 0 || k >= r.dim) {
    throw std::invalid_argument("population: index out of range");
  }
  return r.diagonal(k).real();
}

double l1_coherence(const Matrix& rho) {
  double c = 0.0;
  for (Eigen::Index i = 0; i < rho.rows(); ++i) {
    for (Eigen::Index j = 0; j < rho.cols(); ++j) {
      if (i != j) c += std::abs(rho(i, j));
    }
  }
  return c;
}

double site_coherence(const Matrix& rho, int k) {
  if (k < 0 || k >= rho.rows()) {
    throw std::invalid_argument("site_coherence: index out of range");
  }
  double c = 0.0;
  for (Eigen::Index j = 0; j < rho.cols(); ++j) {
    if (j != k) c += std::abs(rho(k, j));
  }
  return c;
}

double chain_population(const StateVector& r, int chain_start) {
  if (chain_start < 0 || chain_start > r.dim) {
    throw std::invalid_argument("chain_population: index out of range");
  }
  double p = 0.0;
  for (int k = chain_start; k < r.dim; ++k) p += r.diagonal(k).real();
  return p;
}

}  // namespace excinet
