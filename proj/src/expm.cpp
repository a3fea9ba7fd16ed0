#include "excinet/expm.hpp"

#include <array>
#include <cmath>

namespace excinet {

namespace {

// Maximal 1-norms for which the [m/m] Pade approximant attains double
// precision (Higham's scaling-and-squaring analysis).
constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

constexpr std::array<double, 14> kB13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0, 129060195264000.0, 10559470521600.0,
    670442572800.0, 33522128640.0, 1323241920.0, 40840800.0,
    960960.0, 16380.0, 182.0, 1.0};

double one_norm(const Matrix& a) {
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

// Solves (v - u) x = (v + u) for x, the rational Pade step.
Matrix pade_solve(const Matrix& u, const Matrix& v) {
  Eigen::PartialPivLU<Matrix> lu(v - u);
  Matrix x = lu.solve(v + u);
  if (!x.allFinite()) {
    throw NumericalError("matrix exponential: Pade solve produced non-finite values");
  }
  return x;
}

// Pade approximant of odd degree m given a and a^2; b holds b_0..b_m.
// u collects odd, v even coefficients.
template <std::size_t N>
Matrix pade_low(const Matrix& a, const Matrix& a2,
                const std::array<double, N>& b) {
  const auto n = a.rows();
  const Matrix id = Matrix::Identity(n, n);
  Matrix u = Matrix::Zero(n, n);
  Matrix v = Matrix::Zero(n, n);
  Matrix pow = id;  // a^0, then a^2, a^4, ...
  for (std::size_t k = 0; 2 * k + 1 < N; ++k) {
    u += b[2 * k + 1] * pow;
    v += b[2 * k] * pow;
    if (2 * k + 2 < N) pow = (pow * a2).eval();
  }
  u = (a * u).eval();
  return pade_solve(u, v);
}

Matrix pade13(const Matrix& a) {
  const auto& b = kB13;
  const auto n = a.rows();
  const Matrix id = Matrix::Identity(n, n);
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a2 * a4;
  Matrix u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) +
                  b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
  Matrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) +
             b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
  return pade_solve(u, v);
}

// First-order (dual-number) pair: value and its directional derivative.
// Products follow (x, dx)*(y, dy) = (x*y, x*dy + dx*y), which is exactly the
// arithmetic of the 2x2 block-triangular matrices [[x, dx], [0, x]].
struct Pair {
  Matrix val;
  Matrix der;
};

Pair multiply(const Pair& x, const Pair& y) {
  return {x.val * y.val, x.val * y.der + x.der * y.val};
}

}  // namespace

Matrix expm(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("expm: matrix must be square");
  }
  if (!a.allFinite()) {
    throw NumericalError("expm: input contains non-finite entries");
  }
  const auto n = a.rows();
  if (n == 0) return Matrix(0, 0);

  const double norm = one_norm(a);
  if (norm <= kTheta3) {
    static constexpr std::array<double, 4> b = {120.0, 60.0, 12.0, 1.0};
    return pade_low(a, (a * a).eval(), b);
  }
  if (norm <= kTheta5) {
    static constexpr std::array<double, 6> b = {30240.0, 15120.0, 3360.0,
                                                420.0, 30.0, 1.0};
    return pade_low(a, (a * a).eval(), b);
  }
  if (norm <= kTheta7) {
    static constexpr std::array<double, 8> b = {
        17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0};
    return pade_low(a, (a * a).eval(), b);
  }
  if (norm <= kTheta9) {
    static constexpr std::array<double, 10> b = {
        17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
        2162160.0, 110880.0, 3960.0, 90.0, 1.0};
    return pade_low(a, (a * a).eval(), b);
  }

  // Scale so the 1-norm fits the degree-13 approximant, then square back.
  const int squarings =
      std::max(0, static_cast<int>(std::ceil(std::log2(norm / kTheta13))));
  Matrix scaled = a / std::pow(2.0, squarings);
  Matrix result = pade13(scaled);
  for (int k = 0; k < squarings; ++k) result = (result * result).eval();
  if (!result.allFinite()) {
    throw NumericalError("expm: result contains non-finite entries");
  }
  return result;
}

ExpmFrechetResult expm_frechet(const Matrix& a, const Matrix& e) {
  if (a.rows() != a.cols() || e.rows() != e.cols() || a.rows() != e.rows()) {
    throw std::invalid_argument("expm_frechet: dimension mismatch");
  }
  if (!a.allFinite() || !e.allFinite()) {
    throw NumericalError("expm_frechet: input contains non-finite entries");
  }
  const auto n = a.rows();
  const double norm_e = one_norm(e);
  if (norm_e == 0.0) {
    return {expm(a), Matrix::Zero(n, n)};
  }
  // The derivative is linear in the direction, so balance it against a for
  // conditioning and undo the scale at the end.
  const double norm_a = one_norm(a);
  const double dir_scale = (norm_a > 0.0) ? norm_a / norm_e : 1.0;

  const int squarings = std::max(
      0, static_cast<int>(std::ceil(std::log2(
             std::max(norm_a, kTheta13 / 2) / kTheta13))));
  const double down = std::pow(2.0, squarings);

  // Degree-13 Pade of the pair (a, e) scaled by 2^-s: identical to
  // exponentiating the block matrix [[a, e], [0, a]] and reading off the
  // d x d blocks, at a third of the flops.
  Pair x{a / down, (dir_scale / down) * e};
  const Matrix id = Matrix::Identity(n, n);
  const auto& b = kB13;

  const Pair x2 = multiply(x, x);
  const Pair x4 = multiply(x2, x2);
  const Pair x6 = multiply(x2, x4);

  Pair w{b[13] * x6.val + b[11] * x4.val + b[9] * x2.val,
         b[13] * x6.der + b[11] * x4.der + b[9] * x2.der};
  Pair z = multiply(x6, w);
  Pair u_inner{z.val + b[7] * x6.val + b[5] * x4.val + b[3] * x2.val + b[1] * id,
               z.der + b[7] * x6.der + b[5] * x4.der + b[3] * x2.der};
  Pair u = multiply(x, u_inner);

  Pair w2{b[12] * x6.val + b[10] * x4.val + b[8] * x2.val,
          b[12] * x6.der + b[10] * x4.der + b[8] * x2.der};
  Pair z2 = multiply(x6, w2);
  Pair v{z2.val + b[6] * x6.val + b[4] * x4.val + b[2] * x2.val + b[0] * id,
         z2.der + b[6] * x6.der + b[4] * x4.der + b[2] * x2.der};

  // (v - u) r = (v + u); differentiating gives
  // (v - u) r' = (v' + u') - (v' - u') r, reusing the factorization.
  Eigen::PartialPivLU<Matrix> lu(v.val - u.val);
  Pair r;
  r.val = lu.solve(v.val + u.val);
  r.der = lu.solve(v.der + u.der - (v.der - u.der) * r.val);
  if (!r.val.allFinite() || !r.der.allFinite()) {
    throw NumericalError("expm_frechet: Pade solve produced non-finite values");
  }

  for (int k = 0; k < squarings; ++k) r = multiply(r, r);
  r.der /= dir_scale;
  if (!r.val.allFinite() || !r.der.allFinite()) {
    throw NumericalError("expm_frechet: result contains non-finite entries");
  }
  return {std::move(r.val), std::move(r.der)};
}

}  // namespace excinet
