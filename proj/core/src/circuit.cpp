#include "easym/circuit.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "easym/parallel.hpp"

namespace easym {

void CircuitConfig::validate() const {
  if (num_sites < 2 || num_sites % 2 != 0) {
    throw std::invalid_argument("circuit: L must be even and >= 2, got " + std::to_string(num_sites));
  }
  if (!(p_haar >= 0.0 && p_haar <= 1.0)) throw std::invalid_argument("circuit: p_haar must lie in [0, 1]");
  if (depth_units < 0) throw std::invalid_argument("circuit: depth_units must be >= 0");
  if (n_realizations < 1) throw std::invalid_argument("circuit: n_realizations must be >= 1");
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t gate_seed(std::uint64_t master_seed, std::uint64_t realization, std::uint64_t layer,
                        std::uint64_t slot) {
  std::uint64_t h = mix64(master_seed);
  h = mix64(h ^ realization);
  h = mix64(h ^ layer);
  return mix64(h ^ slot);
}

Eigen::MatrixXcd sample_haar_unitary(int dim, Rng& rng) {
  if (dim < 1) throw std::invalid_argument("sample_haar_unitary: dim must be positive");
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  while (true) {
    Eigen::MatrixXcd z(dim, dim);
    for (int c = 0; c < dim; ++c) {
      for (int r = 0; r < dim; ++r) {
        const double re = normal(rng);
        const double im = normal(rng);
        z(r, c) = Complex(re, im);
      }
    }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
    const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    Eigen::MatrixXcd q = qr.householderQ();
    bool degenerate = false;
    for (int k = 0; k < dim; ++k) {
      const double mag = std::abs(r(k, k));
      if (mag < 1e-300) {
        degenerate = true;
        break;
      }
      q.col(k) *= r(k, k) / mag;
    }
    if (!degenerate) return q;
  }
}

Gate sample_u1_gate(Rng& rng) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  const double phi00 = angle(rng);
  const double phi11 = angle(rng);
  const Eigen::MatrixXcd block = sample_haar_unitary(2, rng);
  Gate g = Gate::Zero();
  g(0, 0) = std::polar(1.0, phi00);
  g.block<2, 2>(1, 1) = block;
  g(3, 3) = std::polar(1.0, phi11);
  return g;
}

std::vector<PlacedGate> build_layer(int num_sites, LayerParity parity, double p_haar,
                                    std::uint64_t master_seed, std::uint64_t realization,
                                    std::uint64_t layer_index) {
  if (num_sites < 2 || num_sites % 2 != 0) throw std::invalid_argument("build_layer: L must be even");
  std::vector<PlacedGate> layer;
  const int offset = parity == LayerParity::Even ? 0 : 1;
  const int gates = num_sites / 2;
  layer.reserve(static_cast<std::size_t>(gates));
  for (int g = 0; g < gates; ++g) {
    const int a = 2 * g + offset;
    const int b = (a + 1) % num_sites;
    Rng rng(gate_seed(master_seed, realization, layer_index, static_cast<std::uint64_t>(g)));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const bool haar = u(rng) < p_haar;
    PlacedGate pg{a, b, haar ? GateKind::Haar : GateKind::U1Symmetric,
                  haar ? Gate(sample_haar_unitary(4, rng)) : sample_u1_gate(rng)};
    layer.push_back(std::move(pg));
  }
  return layer;
}

std::vector<ProbeSeries> run_realization(const CircuitConfig& config, const StateVector& initial,
                                         const std::vector<ProbeRequest>& probes,
                                         std::uint64_t realization_index) {
  config.validate();
  if (initial.num_sites() != config.num_sites) throw std::invalid_argument("run_realization: initial state has wrong L");

  std::vector<double> times(static_cast<std::size_t>(config.depth_units) + 1);
  for (std::size_t k = 0; k < times.size(); ++k) times[k] = static_cast<double>(k);
  std::vector<ProbeSeries> out;
  for (const auto& p : probes) out.push_back(ProbeSeries{p, times, std::vector<std::vector<double>>(times.size())});

  auto record = [&](std::size_t k, const StateVector& s) {
    auto values = evaluate_probes(probes, s);
    for (std::size_t p = 0; p < probes.size(); ++p) out[p].samples[k] = std::move(values[p]);
  };

  StateVector state = initial;
  record(0, state);
  for (int unit = 0; unit < config.depth_units; ++unit) {
    for (int half = 0; half < 2; ++half) {
      const auto layer_index = static_cast<std::uint64_t>(2 * unit + half);
      const auto layer = build_layer(config.num_sites, half == 0 ? LayerParity::Even : LayerParity::Odd,
                                     config.p_haar, config.master_seed, realization_index, layer_index);
      for (const auto& g : layer) apply_two_qubit_gate_inplace(state, g.matrix, g.first, g.second);
    }
    record(static_cast<std::size_t>(unit) + 1, state);
  }
  return out;
}

TimeSeries EnsembleSeries::mean_series(std::size_t channel) const {
  std::vector<double> t(times.begin(), times.end()), v(mean.size());
  for (std::size_t k = 0; k < mean.size(); ++k) v[k] = mean[k].at(channel);
  return TimeSeries(std::move(t), std::move(v));
}

TimeSeries EnsembleSeries::std_error_series(std::size_t channel) const {
  std::vector<double> t(times.begin(), times.end()), v(std_error.size());
  for (std::size_t k = 0; k < std_error.size(); ++k) v[k] = std_error[k].at(channel);
  return TimeSeries(std::move(t), std::move(v));
}

std::vector<EnsembleSeries> aggregate_realizations(
    const std::vector<std::vector<ProbeSeries>>& realizations) {
  if (realizations.empty()) throw std::invalid_argument("aggregate_realizations: no realizations");
  const std::size_t n = realizations.size();
  const auto& first = realizations.front();
  std::vector<EnsembleSeries> out;
  for (std::size_t p = 0; p < first.size(); ++p) {
    EnsembleSeries es{first[p].request, {}, {}, {}, 0};
    es.n = static_cast<int>(n);
    for (double t : first[p].times) es.times.push_back(static_cast<int>(std::lround(t)));
    const std::size_t nt = first[p].times.size();
    es.mean.resize(nt);
    es.std_error.resize(nt);
    for (std::size_t k = 0; k < nt; ++k) {
      const std::size_t width = first[p].samples[k].size();
      std::vector<double> mean(width, 0.0), se(width, 0.0);
      for (std::size_t c = 0; c < width; ++c) {
        const double v0 = first[p].samples[k][c];
        bool constant = true;
        double sum = 0.0;
        for (const auto& r : realizations) {
          sum += r[p].samples[k][c];
          constant = constant && r[p].samples[k][c] == v0;
        }
        if (constant) {
          mean[c] = v0;
          continue;
        }
        const double m = sum / static_cast<double>(n);
        double ss = 0.0;
        for (const auto& r : realizations) {
          const double d = r[p].samples[k][c] - m;
          ss += d * d;
        }
        mean[c] = m;
        se[c] = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
      }
      es.mean[k] = std::move(mean);
      es.std_error[k] = std::move(se);
    }
    out.push_back(std::move(es));
  }
  return out;
}

std::vector<EnsembleSeries> ensemble_average(const CircuitConfig& config,
                                             const ProductStateSpec& initial,
                                             const std::vector<ProbeRequest>& probes, int threads) {
  config.validate();
  if (config.n_realizations < 2) throw std::invalid_argument("ensemble_average: need at least 2 realizations");
  const StateVector psi0 = build_initial_state(initial, config.num_sites);
  std::vector<std::vector<ProbeSeries>> results(static_cast<std::size_t>(config.n_realizations));
  parallel_for(results.size(), threads, [&](std::size_t r) {
    results[r] = run_realization(config, psi0, probes, r);
  });
  return aggregate_realizations(results);
}

}  // namespace easym
