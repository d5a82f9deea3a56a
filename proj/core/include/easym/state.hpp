#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "easym/types.hpp"

namespace easym {

/// Dense statevector over the 2^L computational basis.
///
/// Site k is bit k of the basis index (site 0 least significant), and |0>
/// is the +1 eigenstate of sigma^z.
class StateVector {
 public:
  /// The all-zeros basis state |0...0>.
  explicit StateVector(int num_sites);
  StateVector(int num_sites, std::vector<Complex> amplitudes);

  static StateVector basis(int num_sites, std::uint64_t index);

  int num_sites() const { return num_sites_; }
  std::size_t dimension() const { return amplitudes_.size(); }

  std::span<const Complex> amplitudes() const { return amplitudes_; }
  std::span<Complex> amplitudes() { return amplitudes_; }

  const Complex& operator[](std::size_t i) const { return amplitudes_[i]; }
  Complex& operator[](std::size_t i) { return amplitudes_[i]; }

  double norm() const;
  void normalize();

 private:
  int num_sites_;
  std::vector<Complex> amplitudes_;
};

enum class Pattern { Ferromagnetic, Antiferromagnetic, DomainWall };

std::string_view to_string(Pattern p);
Pattern parse_pattern(std::string_view name);

struct ProductStateSpec {
  Pattern pattern = Pattern::Ferromagnetic;
  double tilt_angle = 0.0;  // radians, in [0, pi/2]
};

/// Ordered set of distinct sites of an L-site chain.
class Region {
 public:
  Region(std::vector<int> sites, int num_sites);

  /// `count` consecutive sites starting at `first`.
  static Region contiguous(int first, int count, int num_sites);
  static Region full(int num_sites);

  const std::vector<int>& sites() const { return sites_; }
  int size() const { return static_cast<int>(sites_.size()); }
  int num_sites() const { return num_sites_; }
  std::uint64_t mask() const { return mask_; }

  bool operator==(const Region&) const = default;

 private:
  std::vector<int> sites_;
  int num_sites_;
  std::uint64_t mask_;
};

/// Computational basis bit of `site` in the untilted pattern.
int pattern_bit(Pattern pattern, int site, int num_sites);

/// Product state with every site prepared in R_y(theta)|b_site>, where
/// R_y(theta)|0> = cos(theta/2)|0> + sin(theta/2)|1>.
StateVector build_initial_state(const ProductStateSpec& spec, int num_sites);

/// R_y(theta) as a 2x2 matrix.
Eigen::Matrix2cd ry_matrix(double theta);

void apply_single_qubit_gate_inplace(StateVector& state, const Eigen::Matrix2cd& gate, int site);

/// Applies `gate` to the ordered pair (i, j); the gate's row/column index is
/// 2*q_i + q_j. Throws std::invalid_argument for a non-unitary gate and
/// std::out_of_range for bad sites.
void apply_two_qubit_gate_inplace(StateVector& state, const Gate& gate, int i, int j);

StateVector apply_two_qubit_gate(StateVector state, const Gate& gate, int i, int j);

/// <a|b>, conjugate-linear in `a`.
Complex overlap(const StateVector& a, const StateVector& b);

/// Frobenius norm of G^dagger G - I.
double unitarity_defect(const Eigen::MatrixXcd& m);

}  // namespace easym
