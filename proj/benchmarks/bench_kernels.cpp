#include <benchmark/benchmark.h>

#include <random>

#include "easym/circuit.hpp"
#include "easym/evolution.hpp"
#include "easym/hamiltonian.hpp"
#include "easym/observables.hpp"

using namespace easym;

namespace {

StateVector random_state(int L, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<Complex> amps(std::size_t{1} << L);
  for (auto& a : amps) a = {g(rng), g(rng)};
  StateVector s(L, std::move(amps));
  s.normalize();
  return s;
}

void BM_TwoQubitGate(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  auto psi = random_state(L, 1);
  Rng rng(2);
  const Gate g = sample_haar_unitary(4, rng);
  int i = 0;
  for (auto _ : state) {
    apply_two_qubit_gate_inplace(psi, g, i, (i + 1) % L);
    i = (i + 1) % L;
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(psi.dimension()));
}
BENCHMARK(BM_TwoQubitGate)->Arg(12)->Arg(16)->Arg(20);

void BM_PauliApply(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  const auto h = build_hamiltonian(h2_params(L, 0.5));
  const auto psi = random_state(L, 3);
  std::vector<Complex> out(psi.dimension());
  for (auto _ : state) {
    apply_into(h, psi.amplitudes(), out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(psi.dimension()));
}
BENCHMARK(BM_PauliApply)->Arg(12)->Arg(16)->Arg(20);

void BM_AsymmetryU1(benchmark::State& state) {
  const int L = 12;
  const auto psi = random_state(L, 4);
  const Region region = Region::contiguous(0, static_cast<int>(state.range(0)), L);
  for (auto _ : state) benchmark::DoNotOptimize(entanglement_asymmetry(psi, region, SymmetryProbe::U1));
}
BENCHMARK(BM_AsymmetryU1)->Arg(3)->Arg(4)->Arg(6);

void BM_KrylovStep(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  const auto h = build_hamiltonian(h1_params(L, 0.5));
  auto psi = build_initial_state({Pattern::Ferromagnetic, 0.3}, L);
  for (auto _ : state) psi = evolve_krylov(h, psi, 0.05);
}
BENCHMARK(BM_KrylovStep)->Arg(12)->Arg(16);

void BM_CircuitUnit(benchmark::State& state) {
  const CircuitConfig cfg{12, 0.3, 1, 5, 2};
  const auto psi = build_initial_state({Pattern::Antiferromagnetic, 0.0}, 12);
  const std::vector<ProbeRequest> probes{{ProbeKind::AsymmetryU1, Region::contiguous(0, 3, 12)}};
  std::uint64_t r = 0;
  for (auto _ : state) benchmark::DoNotOptimize(run_realization(cfg, psi, probes, r++));
}
BENCHMARK(BM_CircuitUnit);

}  // namespace
BENCHMARK_MAIN();
