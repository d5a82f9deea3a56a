#pragma once

#include <cstdint>
#include <vector>

#include "easym/state.hpp"
#include "easym/types.hpp"

namespace easym {

enum class PauliAxis { X, Y, Z };

struct PauliFactor {
  int site;
  PauliAxis axis;
};

struct PauliString {
  double coefficient = 0.0;
  std::vector<PauliFactor> factors;
};

/// Parameters of the periodic XYZ chain with next-nearest-neighbour coupling
///
///   H = -1/4 sum_j [X_j X_{j+1} + gamma Y_j Y_{j+1} + delta1 Z_j Z_{j+1}]
///       - delta2_scale * delta2 sum_j [X_j X_{j+2} + Y_j Y_{j+2} + Z_j Z_{j+2}]
///
/// delta2_scale defaults to 1 (the printed prefactor, no implicit 1/4).
struct HamiltonianParams {
  int num_sites = 12;
  double gamma = 1.0;
  double delta1 = 0.4;
  double delta2 = 0.0;
  bool periodic = true;
  double delta2_scale = 1.0;
};

/// Integrable (delta2 = 0) and non-integrable parameter sets.
HamiltonianParams h1_params(int num_sites, double gamma);
HamiltonianParams h2_params(int num_sites, double gamma);

/// A Hermitian operator stored as a real-weighted sum of Pauli strings.
///
/// Immutable once built; terms sharing a bit-flip pattern are grouped so
/// that `apply` does one pass over the state per distinct flip mask.
class PauliSum {
 public:
  PauliSum(int num_sites, std::vector<PauliString> terms);

  int num_sites() const { return num_sites_; }
  const std::vector<PauliString>& terms() const { return terms_; }

  PauliSum scaled(double factor) const;
  friend PauliSum operator+(const PauliSum& a, const PauliSum& b);

  struct FlipGroup {
    std::uint64_t flip_mask;
    std::vector<std::pair<Complex, std::uint64_t>> phases;  // (coefficient * i^ny, sign mask)
  };
  const std::vector<FlipGroup>& groups() const { return groups_; }

 private:
  int num_sites_;
  std::vector<PauliString> terms_;
  std::vector<FlipGroup> groups_;
};

PauliSum build_hamiltonian(const HamiltonianParams& params);

/// sum_{i in region} sigma^z_i
PauliSum build_charge_operator(int num_sites, const Region& region);

/// out = H in, matrix-free. `out` is overwritten.
void apply_into(const PauliSum& op, std::span<const Complex> in, std::span<Complex> out);
std::vector<Complex> apply(const PauliSum& op, const StateVector& state);

/// <psi|op|psi>
Complex expectation(const PauliSum& op, const StateVector& state);

inline constexpr int kDefaultDenseCap = 14;

Eigen::MatrixXcd materialize_dense(const PauliSum& op, int max_sites = kDefaultDenseCap);

/// ||AB - BA||_F via dense matrices.
double commutator_frobenius(const PauliSum& a, const PauliSum& b,
                            int max_sites = kDefaultDenseCap);

struct GroundStateOptions {
  int max_iterations = 5000;  // total matrix-vector products
  int subspace_dim = 60;
  double residual_tolerance = 1e-8;
  std::uint64_t seed = 0x5eed;
};

struct GroundState {
  double energy;
  StateVector state;
  double residual;
  int iterations;
};

/// Lowest eigenpair by restarted Lanczos on the matrix-free operator.
GroundState ground_state(const PauliSum& op, const GroundStateOptions& options = {});

}  // namespace easym
