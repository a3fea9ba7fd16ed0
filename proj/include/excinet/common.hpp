#ifndef EXCINET_COMMON_HPP
#define EXCINET_COMMON_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace excinet {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<Complex>;

/// Planck constant over 2*pi expressed in the energy unit used throughout
/// (1 unit = 1.2414e-4 eV) times picoseconds:
/// 6.582119569e-4 eV*ps / 1.2414e-4 eV = 5.3022 unit*ps (4 decimals kept).
inline constexpr double kDefaultHbar = 5.3022;

/// Invalid or inconsistent user input (config files, spec fields, CLI
/// arguments). Mapped to process exit code 2 by the command-line tool.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Numerical breakdown (non-finite intermediates, failed linear solves).
/// Mapped to process exit code 3 by the command-line tool.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised by the optimizer divergence guard. Mapped to exit code 4.
struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace excinet

#endif  // EXCINET_COMMON_HPP
