#include "excinet/ode.hpp"

#include <algorithm>
#include <cmath>

namespace excinet {

namespace {

// Dormand-Prince 5(4) tableau. b5 gives the propagated fifth-order solution;
// db = b5 - b4 weights the embedded error estimate. The last row of `a`
// equals b5 (FSAL property).
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
constexpr double kB5[7] = {35.0 / 384,      0.0,  500.0 / 1113, 125.0 / 192,
                           -2187.0 / 6784, 11.0 / 84, 0.0};
constexpr double kDb[7] = {35.0 / 384 - 5179.0 / 57600,
                           0.0,
                           500.0 / 1113 - 7571.0 / 16695,
                           125.0 / 192 - 393.0 / 640,
                           -2187.0 / 6784 + 92097.0 / 339200,
                           11.0 / 84 - 187.0 / 2100,
                           -1.0 / 40};

struct Stepper {
  const SparseMatrix& m;
  double rtol;
  double atol;
  Vector k[7];
  Vector y_stage;

  explicit Stepper(const SparseMatrix& mat, double rt, double at)
      : m(mat), rtol(rt), atol(at) {}

  // One attempted step from (t, y) with size h. On acceptance updates y and
  // k[0] (FSAL) and returns true; always writes the recommended next h.
  bool step(Vector& y, double h, double& h_next) {
    const auto n = y.size();
    for (int s = 1; s < 7; ++s) {
      y_stage = y;
      for (int j = 0; j < s; ++j) {
        if (kA[s][j] != 0.0) y_stage += (h * kA[s][j]) * k[j];
      }
      k[s] = m * y_stage;
    }
    Vector y_new = y;
    for (int s = 0; s < 7; ++s) {
      if (kB5[s] != 0.0) y_new += (h * kB5[s]) * k[s];
    }
    // Weighted RMS of the embedded error estimate.
    double err_sq = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      Complex e{};
      for (int s = 0; s < 7; ++s) e += kDb[s] * k[s][i];
      const double scale =
          atol + rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      const double w = std::abs(h * e) / scale;
      err_sq += w * w;
    }
    const double err = std::sqrt(err_sq / static_cast<double>(n));
    const double safety = 0.9;
    double factor =
        (err > 0.0) ? safety * std::pow(err, -0.2) : 5.0;
    factor = std::clamp(factor, 0.2, 5.0);
    h_next = h * factor;
    if (err <= 1.0) {
      y.swap(y_new);
      k[0] = k[6];  // FSAL: last stage is the derivative at the new point
      return true;
    }
    return false;
  }
};

double initial_step(const SparseMatrix& m, double t_end) {
  // Crude spectral bound from the 1-norm keeps the first attempt stable;
  // the controller refines immediately.
  double norm = 0.0;
  for (int j = 0; j < m.outerSize(); ++j) {
    double col = 0.0;
    for (SparseMatrix::InnerIterator it(m, j); it; ++it)
      col += std::abs(it.value());
    norm = std::max(norm, col);
  }
  if (norm <= 0.0) return t_end;
  return std::min(t_end, 0.1 / norm);
}

}  // namespace

Vector ode_propagate(const SparseMatrix& m, const Vector& y0, double t_end,
                     double rtol, double atol) {
  if (t_end < 0.0) throw std::invalid_argument("ode_propagate: negative time");
  Vector y = y0;
  if (t_end == 0.0) return y;

  Stepper st(m, rtol, atol);
  st.k[0] = m * y;
  double t = 0.0;
  double h = initial_step(m, t_end);
  while (t < t_end) {
    h = std::min(h, t_end - t);
    double h_next = h;
    if (st.step(y, h, h_next)) {
      t += h;
      if (!y.allFinite()) {
        throw NumericalError("ode_propagate: non-finite state");
      }
    }
    if (h_next <= t_end * 1e-15) {
      throw NumericalError("ode_propagate: step size underflow");
    }
    h = h_next;
  }
  return y;
}

void ode_trajectory(const SparseMatrix& m, const Vector& y0,
                    const std::vector<double>& times,
                    const std::function<void(std::size_t, const Vector&)>& emit,
                    double rtol, double atol) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < 0.0 || (i > 0 && times[i] < times[i - 1])) {
      throw std::invalid_argument("ode_trajectory: times must be ascending and nonnegative");
    }
  }
  if (times.empty()) return;

  Vector y = y0;
  Stepper st(m, rtol, atol);
  st.k[0] = m * y;
  double t = 0.0;
  double h = initial_step(m, times.back() > 0 ? times.back() : 1.0);

  for (std::size_t i = 0; i < times.size(); ++i) {
    const double target = times[i];
    while (t < target) {
      const double h_try = std::min(h, target - t);
      double h_next = h_try;
      if (st.step(y, h_try, h_next)) {
        t += h_try;
        if (!y.allFinite()) {
          throw NumericalError("ode_trajectory: non-finite state");
        }
      }
      if (h_next <= times.back() * 1e-15) {
        throw NumericalError("ode_trajectory: step size underflow");
      }
      h = h_next;
    }
    emit(i, y);
  }
}

Vector rk4_fixed(const SparseMatrix& m, const Vector& y0, double t_end,
                 int n_steps) {
  if (t_end < 0.0) throw std::invalid_argument("rk4_fixed: negative time");
  if (n_steps < 1) throw std::invalid_argument("rk4_fixed: need at least one step");
  Vector y = y0;
  const double h = t_end / n_steps;
  for (int s = 0; s < n_steps; ++s) {
    const Vector k1 = m * y;
    const Vector k2 = m * (y + (h / 2) * k1);
    const Vector k3 = m * (y + (h / 2) * k2);
    const Vector k4 = m * (y + h * k3);
    y += (h / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  if (!y.allFinite()) throw NumericalError("rk4_fixed: non-finite state");
  return y;
}

}  // namespace excinet
