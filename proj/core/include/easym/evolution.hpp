#pragma once

#include <variant>
#include <vector>

#include "easym/analysis.hpp"
#include "easym/hamiltonian.hpp"
#include "easym/observables.hpp"

namespace easym {

/// Full eigendecomposition H = V diag(E) V^dagger.
///
/// The matrix is split into the connected components of its sparsity graph
/// before diagonalization (parity or charge sectors, when present), and a
/// real symmetric solver is used when every entry is real.
class SpectralPropagator {
 public:
  struct Block {
    std::vector<Eigen::Index> indices;  // basis states spanned by this block
    Eigen::VectorXd energies;
    Eigen::MatrixXd real_vectors;       // used when `real` is set
    Eigen::MatrixXcd complex_vectors;
    bool real = false;
  };

  SpectralPropagator(int num_sites, std::vector<Block> blocks);

  int num_sites() const { return num_sites_; }
  Eigen::Index dimension() const { return Eigen::Index{1} << num_sites_; }
  const std::vector<Block>& blocks() const { return blocks_; }

  /// Eigenvalues in block order, matching the columns of `eigenvectors()`.
  Eigen::VectorXd eigenvalues() const;
  /// Dense unitary V; materialized on demand.
  Eigen::MatrixXcd eigenvectors() const;

  /// Coefficients V^dagger psi.
  Eigen::VectorXcd to_eigenbasis(const StateVector& state) const;
  /// V diag(exp(-i E t)) c
  StateVector from_eigenbasis(const Eigen::VectorXcd& coefficients, double t) const;

 private:
  int num_sites_;
  std::vector<Block> blocks_;
};

inline constexpr int kSpectralCap = 14;

SpectralPropagator build_spectral(const Eigen::MatrixXcd& dense_hamiltonian);

StateVector evolve_spectral(const SpectralPropagator& prop, const StateVector& state, double t);

struct KrylovConfig {
  int subspace_dim = 30;
  double dt = 0.05;
  double tolerance = 1e-10;  // per-step local error target
};

/// exp(-i H t)|psi> by short Lanczos steps of size <= cfg.dt. A step whose
/// error estimate exceeds the tolerance is retried with half the step.
StateVector evolve_krylov(const PauliSum& hamiltonian, const StateVector& state, double t,
                          const KrylovConfig& cfg = {});

/// Probe values along a trajectory. `samples[k]` holds the probe output at times[k].
struct ProbeSeries {
  ProbeRequest request;
  std::vector<double> times;
  std::vector<std::vector<double>> samples;

  /// One output channel as a time series (channel 0 for scalar probes).
  TimeSeries channel(std::size_t index = 0) const;
};

/// Spectral backend: every time is evolved independently from t = 0 and
/// time points are spread over `threads` workers.
std::vector<ProbeSeries> trajectory(const SpectralPropagator& prop, const StateVector& initial,
                                    const std::vector<double>& times,
                                    const std::vector<ProbeRequest>& probes, int threads = 1);

/// Krylov backend: sequential stepping between consecutive times.
std::vector<ProbeSeries> trajectory(const PauliSum& hamiltonian, const StateVector& initial,
                                    const std::vector<double>& times,
                                    const std::vector<ProbeRequest>& probes,
                                    const KrylovConfig& cfg = {});

/// Uniform grid 0, dt, ..., t_max (t_max included when it lands on the grid).
std::vector<double> uniform_times(double t_max, double dt);

}  // namespace easym
