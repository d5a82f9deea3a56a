#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "easym/evolution.hpp"
#include "easym/observables.hpp"
#include "easym/state.hpp"

namespace easym {

using Rng = std::mt19937_64;

enum class GateKind { U1Symmetric, Haar };

struct CircuitConfig {
  int num_sites = 12;
  double p_haar = 0.0;
  int depth_units = 40;  // one unit = even layer followed by odd layer
  std::uint64_t master_seed = 1;
  int n_realizations = 200;

  void validate() const;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Seed of the stream that draws one gate. Keyed by every coordinate of the
/// gate so draws do not depend on execution order.
std::uint64_t gate_seed(std::uint64_t master_seed, std::uint64_t realization, std::uint64_t layer,
                        std::uint64_t slot);

/// Haar unitary of size dim via QR of a complex Ginibre matrix, with the
/// diagonal of R made positive.
Eigen::MatrixXcd sample_haar_unitary(int dim, Rng& rng);

/// Block-diagonal charge-conserving gate: phase on |00>, 2x2 Haar block on
/// span{|01>, |10>}, phase on |11>.
Gate sample_u1_gate(Rng& rng);

struct PlacedGate {
  int first;
  int second;
  GateKind kind;
  Gate matrix;
};

enum class LayerParity { Even, Odd };

/// Even layer: (0,1), (2,3), ...; odd layer: (1,2), ..., (L-1, 0).
/// Gate slot g of layer `layer_index` uses stream gate_seed(master, realization, layer_index, g):
/// first a uniform draw decides Haar (probability p_haar), then the matrix is sampled.
std::vector<PlacedGate> build_layer(int num_sites, LayerParity parity, double p_haar,
                                    std::uint64_t master_seed, std::uint64_t realization,
                                    std::uint64_t layer_index);

/// One circuit realization; probes are evaluated at t = 0 and after each time unit.
std::vector<ProbeSeries> run_realization(const CircuitConfig& config, const StateVector& initial,
                                         const std::vector<ProbeRequest>& probes,
                                         std::uint64_t realization_index);

struct EnsembleSeries {
  ProbeRequest probe;
  std::vector<int> times;
  std::vector<std::vector<double>> mean;       // [time][channel]
  std::vector<std::vector<double>> std_error;  // [time][channel]
  int n = 0;

  TimeSeries mean_series(std::size_t channel = 0) const;
  TimeSeries std_error_series(std::size_t channel = 0) const;
};

/// Mean and standard error over realizations 0 .. n-1. Results are reduced in
/// realization order, so they do not depend on `threads`.
std::vector<EnsembleSeries> ensemble_average(const CircuitConfig& config,
                                             const ProductStateSpec& initial,
                                             const std::vector<ProbeRequest>& probes,
                                             int threads = 1);

/// Reduction used by ensemble_average; exposed for testing.
std::vector<EnsembleSeries> aggregate_realizations(
    const std::vector<std::vector<ProbeSeries>>& realizations);

}  // namespace easym
