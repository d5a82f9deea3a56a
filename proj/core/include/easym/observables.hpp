#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "easym/state.hpp"

namespace easym {

/// Reduced state of a region; row/column bit r is the r-th region site.
struct DensityMatrix {
  int n_sites = 0;
  Eigen::MatrixXcd entries;

  /// Throws NumericalError unless Hermitian, unit trace and PSD within tolerance.
  void validate(double tolerance = 1e-10) const;
};

enum class SymmetryProbe { U1, Z2 };

DensityMatrix reduced_density_matrix(const StateVector& state, const Region& region);

/// -sum lambda ln lambda in nats; eigenvalues <= 1e-12 contribute nothing,
/// eigenvalues below -1e-8 raise NumericalError.
double von_neumann_entropy(const DensityMatrix& rho);

/// sum_q Pi_q rho Pi_q for the region charge (U1) or parity (Z2).
DensityMatrix sector_project(const DensityMatrix& rho, SymmetryProbe probe);

/// S(rho_Q) - S(rho). Exactly 0 when rho is already block diagonal.
double entanglement_asymmetry(const DensityMatrix& rho, SymmetryProbe probe);
double entanglement_asymmetry(const StateVector& state, const Region& region, SymmetryProbe probe);

struct ChargeMoments {
  double mean;
  double variance;
};

/// Mean and variance of sum_{i in region} sigma^z_i.
ChargeMoments charge_moments(const StateVector& state, const Region& region);

/// P_Q for Q in {-L, -L+2, ..., L}.
std::map<int, double> charge_distribution(const StateVector& state);

enum class ProbeKind {
  AsymmetryU1,         // EA-U1
  AsymmetryZ2,         // EA-Z2
  ChargeVariance,      // CV (full chain)
  ChargeMean,          // Qmean (full chain)
  ChargeDistribution,  // PQ (L+1 channels, Q = -L .. L)
  Entropy,             // EE: S(rho_a)
  SymmetrizedEntropy,  // EEQ: S(rho_{a,Q}) for the U1 charge
};

std::string_view probe_name(ProbeKind kind);
ProbeKind parse_probe(std::string_view name);

struct ProbeRequest {
  ProbeKind kind;
  Region region;  // ignored by full-chain probes
};

/// Number of values the probe produces per state.
int probe_width(ProbeKind kind, int num_sites);

/// Evaluates one probe. Region-based probes share a single reduced density matrix
/// when called through `evaluate_probes`.
std::vector<double> evaluate_probe(const ProbeRequest& request, const StateVector& state);
std::vector<std::vector<double>> evaluate_probes(const std::vector<ProbeRequest>& requests,
                                                 const StateVector& state);

}  // namespace easym
