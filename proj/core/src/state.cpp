#include "easym/state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace easym {

namespace {

constexpr int kMaxSites = 30;

void check_num_sites(int num_sites) {
  if (num_sites < 1 || num_sites > kMaxSites) {
    throw std::invalid_argument("number of sites must be in [1, " + std::to_string(kMaxSites) +
                                "], got " + std::to_string(num_sites));
  }
}

// Spreads the bits of `k` over the positions not in {lo, hi}, lo < hi.
inline std::uint64_t insert_two_zeros(std::uint64_t k, int lo, int hi) {
  const std::uint64_t low_mask = bit(lo) - 1;
  k = ((k & ~low_mask) << 1) | (k & low_mask);
  const std::uint64_t high_mask = bit(hi) - 1;
  return ((k & ~high_mask) << 1) | (k & high_mask);
}

}  // namespace

StateVector::StateVector(int num_sites) : num_sites_(num_sites) {
  check_num_sites(num_sites);
  amplitudes_.assign(std::size_t{1} << num_sites, Complex{0.0, 0.0});
  amplitudes_[0] = 1.0;
}

StateVector::StateVector(int num_sites, std::vector<Complex> amplitudes)
    : num_sites_(num_sites), amplitudes_(std::move(amplitudes)) {
  check_num_sites(num_sites);
  if (amplitudes_.size() != (std::size_t{1} << num_sites)) {
    throw std::invalid_argument("amplitude count " + std::to_string(amplitudes_.size()) +
                                " does not match 2^" + std::to_string(num_sites));
  }
}

StateVector StateVector::basis(int num_sites, std::uint64_t index) {
  StateVector s(num_sites);
  if (index >= s.dimension()) throw std::out_of_range("basis index out of range");
  s.amplitudes_[0] = 0.0;
  s.amplitudes_[index] = 1.0;
  return s;
}

double StateVector::norm() const {
  double acc = 0.0;
  for (const auto& a : amplitudes_) acc += std::norm(a);
  return std::sqrt(acc);
}

void StateVector::normalize() {
  const double n = norm();
  if (n == 0.0) throw std::invalid_argument("cannot normalize the zero vector");
  for (auto& a : amplitudes_) a /= n;
}

std::string_view to_string(Pattern p) {
  switch (p) {
    case Pattern::Ferromagnetic: return "ferromagnetic";
    case Pattern::Antiferromagnetic: return "antiferromagnetic";
    case Pattern::DomainWall: return "domain-wall";
  }
  return "?";
}

Pattern parse_pattern(std::string_view name) {
  if (name == "ferromagnetic" || name == "ferro" || name == "F") return Pattern::Ferromagnetic;
  if (name == "antiferromagnetic" || name == "antiferro" || name == "AF") {
    return Pattern::Antiferromagnetic;
  }
  if (name == "domain-wall" || name == "domainwall" || name == "DW") return Pattern::DomainWall;
  throw std::invalid_argument("unknown initial-state pattern '" + std::string(name) + "'");
}

Region::Region(std::vector<int> sites, int num_sites)
    : sites_(std::move(sites)), num_sites_(num_sites), mask_(0) {
  check_num_sites(num_sites);
  if (sites_.empty()) throw std::invalid_argument("region must be nonempty");
  for (std::size_t k = 0; k < sites_.size(); ++k) {
    const int s = sites_[k];
    if (s < 0 || s >= num_sites) throw std::out_of_range("region site out of range");
    if (k > 0 && s <= sites_[k - 1]) {
      throw std::invalid_argument("region sites must be strictly increasing");
    }
    mask_ |= bit(s);
  }
}

Region Region::contiguous(int first, int count, int num_sites) {
  std::vector<int> sites(static_cast<std::size_t>(std::max(count, 0)));
  for (int k = 0; k < count; ++k) sites[static_cast<std::size_t>(k)] = first + k;
  return Region(std::move(sites), num_sites);
}

Region Region::full(int num_sites) { return contiguous(0, num_sites, num_sites); }

int pattern_bit(Pattern pattern, int site, int num_sites) {
  switch (pattern) {
    case Pattern::Ferromagnetic: return 0;
    case Pattern::Antiferromagnetic: return site % 2;
    case Pattern::DomainWall: return site < num_sites / 2 ? 0 : 1;
  }
  return 0;
}

Eigen::Matrix2cd ry_matrix(double theta) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  Eigen::Matrix2cd m;
  m << c, -s, s, c;
  return m;
}

StateVector build_initial_state(const ProductStateSpec& spec, int num_sites) {
  check_num_sites(num_sites);
  if (spec.pattern == Pattern::DomainWall && num_sites % 2 != 0) {
    throw std::invalid_argument("domain-wall state requires an even number of sites");
  }
  constexpr double kAngleSlack = 1e-12;
  if (!(spec.tilt_angle >= 0.0 && spec.tilt_angle <= std::numbers::pi / 2 + kAngleSlack)) {
    throw std::invalid_argument("tilt angle must lie in [0, pi/2]");
  }

  const double c = std::cos(spec.tilt_angle / 2.0);
  const double s = std::sin(spec.tilt_angle / 2.0);
  // Per-site amplitudes <q|R_y|b> indexed [b][q].
  const double site_amp[2][2] = {{c, s}, {-s, c}};

  std::vector<Complex> amps(std::size_t{1} << num_sites);
  for (std::size_t x = 0; x < amps.size(); ++x) {
    double a = 1.0;
    for (int k = 0; k < num_sites && a != 0.0; ++k) {
      const int b = pattern_bit(spec.pattern, k, num_sites);
      a *= site_amp[b][(x >> k) & 1U];
    }
    amps[x] = a;
  }
  return StateVector(num_sites, std::move(amps));
}

void apply_single_qubit_gate_inplace(StateVector& state, const Eigen::Matrix2cd& gate, int site) {
  if (site < 0 || site >= state.num_sites()) throw std::out_of_range("gate site out of range");
  auto amps = state.amplitudes();
  const std::uint64_t b = bit(site);
  for (std::uint64_t x = 0; x < amps.size(); ++x) {
    if (x & b) continue;
    const Complex a0 = amps[x];
    const Complex a1 = amps[x | b];
    amps[x] = gate(0, 0) * a0 + gate(0, 1) * a1;
    amps[x | b] = gate(1, 0) * a0 + gate(1, 1) * a1;
  }
}

double unitarity_defect(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m.adjoint() * m - Eigen::MatrixXcd::Identity(m.rows(), m.cols())).norm();
}

void apply_two_qubit_gate_inplace(StateVector& state, const Gate& gate, int i, int j) {
  const int n = state.num_sites();
  if (i < 0 || j < 0 || i >= n || j >= n) throw std::out_of_range("gate site out of range");
  if (i == j) throw std::invalid_argument("two-qubit gate requires distinct sites");
  constexpr double kUnitarityTolerance = 1e-8;
  if (const double d = (gate.adjoint() * gate - Eigen::Matrix4cd::Identity()).norm();
      !(d <= kUnitarityTolerance)) {
    throw std::invalid_argument("gate is not unitary (Frobenius defect " + std::to_string(d) + ")");
  }

  const std::uint64_t bi = bit(i);
  const std::uint64_t bj = bit(j);
  const int lo = std::min(i, j);
  const int hi = std::max(i, j);
  auto amps = state.amplitudes();
  const std::uint64_t blocks = amps.size() >> 2;

  for (std::uint64_t k = 0; k < blocks; ++k) {
    const std::uint64_t base = insert_two_zeros(k, lo, hi);
    // local index 2*q_i + q_j
    const std::uint64_t idx[4] = {base, base | bj, base | bi, base | bi | bj};
    const Complex in[4] = {amps[idx[0]], amps[idx[1]], amps[idx[2]], amps[idx[3]]};
    for (int r = 0; r < 4; ++r) {
      amps[idx[r]] = gate(r, 0) * in[0] + gate(r, 1) * in[1] + gate(r, 2) * in[2] + gate(r, 3) * in[3];
    }
  }
}

StateVector apply_two_qubit_gate(StateVector state, const Gate& gate, int i, int j) {
  apply_two_qubit_gate_inplace(state, gate, i, j);
  return state;
}

Complex overlap(const StateVector& a, const StateVector& b) {
  if (a.num_sites() != b.num_sites()) throw std::invalid_argument("overlap: dimension mismatch");
  Complex acc{0.0, 0.0};
  const auto x = a.amplitudes();
  const auto y = b.amplitudes();
  for (std::size_t k = 0; k < x.size(); ++k) acc += std::conj(x[k]) * y[k];
  return acc;
}

}  // namespace easym
