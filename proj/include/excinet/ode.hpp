#ifndef EXCINET_ODE_HPP
#define EXCINET_ODE_HPP

#include <functional>
#include <vector>

#include "excinet/common.hpp"

namespace excinet {

/// Integrates the linear system dy/dt = m*y from t=0 to t=t_end with the
/// adaptive Dormand-Prince embedded Runge-Kutta 5(4) pair and a standard
/// step-size controller. Error control: per-component tolerance
/// atol + rtol*|y|, RMS norm.
Vector ode_propagate(const SparseMatrix& m, const Vector& y0, double t_end,
                     double rtol = 1e-10, double atol = 1e-12);

/// As ode_propagate, but lands exactly on every requested sample time
/// (ascending, nonnegative) and hands each state to `emit(index, y)`.
void ode_trajectory(const SparseMatrix& m, const Vector& y0,
                    const std::vector<double>& times,
                    const std::function<void(std::size_t, const Vector&)>& emit,
                    double rtol = 1e-10, double atol = 1e-12);

/// Classical fixed-step fourth-order Runge-Kutta with n_steps equal steps.
/// Used as the step-halving reference: the adaptive result must be met by
/// doubling n_steps until successive answers change by less than the target.
Vector rk4_fixed(const SparseMatrix& m, const Vector& y0, double t_end,
                 int n_steps);

}  // namespace excinet

#endif  // EXCINET_ODE_HPP
