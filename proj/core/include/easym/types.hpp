#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>

#include <Eigen/Dense>

namespace easym {

using Complex = std::complex<double>;

/// Raised for malformed or inconsistent experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a numerical routine fails its own accuracy contract
/// (non-convergence, invalid density matrix, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two-qubit gate in the basis |q_i q_j> = |00>, |01>, |10>, |11>.
using Gate = Eigen::Matrix4cd;

inline constexpr std::uint64_t bit(int k) { return std::uint64_t{1} << k; }

}  // namespace easym
