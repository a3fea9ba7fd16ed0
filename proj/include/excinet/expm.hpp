#ifndef EXCINET_EXPM_HPP
#define EXCINET_EXPM_HPP

#include "excinet/common.hpp"

namespace excinet {

/// Matrix exponential of a dense complex square matrix by Pade approximation
/// with scaling and squaring (degree ladder 3/5/7/9/13).
Matrix expm(const Matrix& a);

struct ExpmFrechetResult {
  Matrix expa;    ///< exp(a)
  Matrix dexpa;   ///< directional (Frechet) derivative of exp at a along e
};

/// Exponential together with its Frechet derivative in direction e, based on
/// the block-triangular identity
///
///   exp([[a, e], [0, a]]) = [[exp(a), D exp(a)[e]], [0, exp(a)]].
///
/// The two nontrivial blocks are computed by carrying (value, derivative)
/// pairs through the scaling-and-squaring Pade recurrence — the arithmetic of
/// the doubled matrix without ever forming it, at roughly a third of the
/// flops. The direction is rescaled to the norm of `a` first (the derivative
/// is linear in `e`) so the pair stays well balanced.
ExpmFrechetResult expm_frechet(const Matrix& a, const Matrix& e);

}  // namespace excinet

#endif  // EXCINET_EXPM_HPP
