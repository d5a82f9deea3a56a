#pragma once

#include <span>
#include <vector>

#include "easym/hamiltonian.hpp"

namespace easym::detail {

/// Orthonormal Krylov basis K_m(H, v0) with full reorthogonalization.
struct LanczosBasis {
  std::vector<Eigen::VectorXcd> vectors;
  Eigen::VectorXd alpha;  // diagonal of T
  Eigen::VectorXd beta;   // beta(k) = ||residual|| after step k; beta(m-1) drives error estimates
  bool invariant = false; // Krylov space closed under H (happy breakdown)
};

LanczosBasis lanczos(const PauliSum& op, const Eigen::VectorXcd& start, int max_dim);

}  // namespace easym::detail
