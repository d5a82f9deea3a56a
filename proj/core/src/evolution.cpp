#include "easym/evolution.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "easym/parallel.hpp"
#include "lanczos.hpp"

namespace easym {

namespace {

void check_times(const std::vector<double>& times) {
  if (times.empty()) throw std::invalid_argument("trajectory: empty time grid");
  if (times.front() < 0.0) throw std::invalid_argument("trajectory: times must be >= 0");
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (!(times[k] > times[k - 1])) throw std::invalid_argument("trajectory: times must increase strictly");
  }
}

std::vector<ProbeSeries> empty_series(const std::vector<ProbeRequest>& probes,
                                      const std::vector<double>& times) {
  std::vector<ProbeSeries> out;
  for (const auto& p : probes) {
    out.push_back(ProbeSeries{p, times, std::vector<std::vector<double>>(times.size())});
  }
  return out;
}

Eigen::Index find_root(std::vector<Eigen::Index>& parent, Eigen::Index x) {
  while (parent[static_cast<std::size_t>(x)] != x) {
    auto& p = parent[static_cast<std::size_t>(x)];
    p = parent[static_cast<std::size_t>(p)];
    x = p;
  }
  return x;
}

}  // namespace

SpectralPropagator::SpectralPropagator(int num_sites, std::vector<Block> blocks)
    : num_sites_(num_sites), blocks_(std::move(blocks)) {}

Eigen::VectorXd SpectralPropagator::eigenvalues() const {
  Eigen::VectorXd e(dimension());
  Eigen::Index offset = 0;
  for (const auto& b : blocks_) {
    e.segment(offset, b.energies.size()) = b.energies;
    offset += b.energies.size();
  }
  return e;
}

Eigen::MatrixXcd SpectralPropagator::eigenvectors() const {
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(dimension(), dimension());
  Eigen::Index col = 0;
  for (const auto& b : blocks_) {
    const auto n = static_cast<Eigen::Index>(b.indices.size());
    for (Eigen::Index c = 0; c < n; ++c, ++col) {
      for (Eigen::Index r = 0; r < n; ++r) {
        v(b.indices[static_cast<std::size_t>(r)], col) =
            b.real ? Complex(b.real_vectors(r, c), 0.0) : b.complex_vectors(r, c);
      }
    }
  }
  return v;
}

Eigen::VectorXcd SpectralPropagator::to_eigenbasis(const StateVector& state) const {
  if (state.num_sites() != num_sites_) throw std::invalid_argument("spectral: dimension mismatch");
  Eigen::VectorXcd c(dimension());
  Eigen::Index offset = 0;
  for (const auto& b : blocks_) {
    const auto n = static_cast<Eigen::Index>(b.indices.size());
    Eigen::VectorXcd local(n);
    for (Eigen::Index r = 0; r < n; ++r) local(r) = state[static_cast<std::size_t>(b.indices[static_cast<std::size_t>(r)])];
    if (b.real) {
      const Eigen::VectorXd re = b.real_vectors.transpose() * local.real();
      const Eigen::VectorXd im = b.real_vectors.transpose() * local.imag();
      c.segment(offset, n).real() = re;
      c.segment(offset, n).imag() = im;
    } else {
      c.segment(offset, n) = b.complex_vectors.adjoint() * local;
    }
    offset += n;
  }
  return c;
}

StateVector SpectralPropagator::from_eigenbasis(const Eigen::VectorXcd& coefficients, double t) const {
  std::vector<Complex> amps(static_cast<std::size_t>(dimension()));
  Eigen::Index offset = 0;
  for (const auto& b : blocks_) {
    const auto n = static_cast<Eigen::Index>(b.indices.size());
    Eigen::VectorXcd phased(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      phased(k) = coefficients(offset + k) * std::polar(1.0, -b.energies(k) * t);
    }
    Eigen::VectorXcd local(n);
    if (b.real) {
      const Eigen::VectorXd re = b.real_vectors * phased.real();
      const Eigen::VectorXd im = b.real_vectors * phased.imag();
      local.real() = re;
      local.imag() = im;
    } else {
      local = b.complex_vectors * phased;
    }
    for (Eigen::Index r = 0; r < n; ++r) amps[static_cast<std::size_t>(b.indices[static_cast<std::size_t>(r)])] = local(r);
    offset += n;
  }
  return StateVector(num_sites_, std::move(amps));
}

SpectralPropagator build_spectral(const Eigen::MatrixXcd& h) {
  const Eigen::Index dim = h.rows();
  if (h.cols() != dim || dim < 2 || (dim & (dim - 1)) != 0) {
    throw std::invalid_argument("build_spectral: matrix must be square with power-of-two dimension");
  }
  const int num_sites = std::countr_zero(static_cast<std::uint64_t>(dim));
  if (num_sites > kSpectralCap) {
    throw std::invalid_argument("build_spectral: dimension exceeds 2^" + std::to_string(kSpectralCap));
  }
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if (const double herm = (h - h.adjoint()).cwiseAbs().maxCoeff(); herm > 1e-12 * scale) {
    throw std::invalid_argument("build_spectral: matrix is not Hermitian (max deviation " +
                                std::to_string(herm) + ")");
  }

  // connected components of the sparsity graph
  std::vector<Eigen::Index> parent(static_cast<std::size_t>(dim));
  std::iota(parent.begin(), parent.end(), Eigen::Index{0});
  for (Eigen::Index c = 0; c < dim; ++c) {
    for (Eigen::Index r = c + 1; r < dim; ++r) {
      if (h(r, c) != Complex{0.0, 0.0}) {
        const auto a = find_root(parent, r);
        const auto b = find_root(parent, c);
        if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
      }
    }
  }
  std::vector<std::vector<Eigen::Index>> members(static_cast<std::size_t>(dim));
  for (Eigen::Index k = 0; k < dim; ++k) members[static_cast<std::size_t>(find_root(parent, k))].push_back(k);

  std::vector<SpectralPropagator::Block> blocks;
  for (auto& idx : members) {
    if (idx.empty()) continue;
    const auto n = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXcd sub(n, n);
    for (Eigen::Index c = 0; c < n; ++c) {
      for (Eigen::Index r = 0; r < n; ++r) sub(r, c) = h(idx[static_cast<std::size_t>(r)], idx[static_cast<std::size_t>(c)]);
    }
    SpectralPropagator::Block block;
    block.indices = std::move(idx);
    block.real = sub.imag().cwiseAbs().maxCoeff() == 0.0;
    if (block.real) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sub.real());
      if (es.info() != Eigen::Success) {
        throw NumericalError("build_spectral: real eigensolver failed on block of size " + std::to_string(n));
      }
      block.energies = es.eigenvalues();
      block.real_vectors = es.eigenvectors();
    } else {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sub);
      if (es.info() != Eigen::Success) {
        throw NumericalError("build_spectral: complex eigensolver failed on block of size " + std::to_string(n));
      }
      block.energies = es.eigenvalues();
      block.complex_vectors = es.eigenvectors();
    }
    blocks.push_back(std::move(block));
  }
  return SpectralPropagator(num_sites, std::move(blocks));
}

StateVector evolve_spectral(const SpectralPropagator& prop, const StateVector& state, double t) {
  return prop.from_eigenbasis(prop.to_eigenbasis(state), t);
}

namespace {

// One Krylov step of length at most `h` from `psi`; returns the step taken.
double krylov_step(const PauliSum& hamiltonian, Eigen::VectorXcd& psi, double h, const KrylovConfig& cfg) {
  const double nrm = psi.norm();
  const auto basis = detail::lanczos(hamiltonian, psi / nrm, cfg.subspace_dim);
  const auto m = basis.alpha.size();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
  tri.computeFromTridiagonal(basis.alpha, basis.beta.head(std::max<Eigen::Index>(m - 1, 0)),
                             Eigen::ComputeEigenvectors);
  const Eigen::MatrixXd& q = tri.eigenvectors();
  const Eigen::VectorXd& lambda = tri.eigenvalues();
  const Eigen::VectorXd q0 = q.row(0).transpose();
  const double residual = basis.invariant ? 0.0 : basis.beta(m - 1);

  constexpr double kMinStep = 1e-12;
  for (double step = h; step >= kMinStep * std::max(1.0, h); step *= 0.5) {
    Eigen::VectorXcd phased(m);
    for (Eigen::Index k = 0; k < m; ++k) phased(k) = q0(k) * std::polar(1.0, -lambda(k) * step);
    const Eigen::VectorXcd c = q.cast<Complex>() * phased;
    const double err = residual * std::abs(c(m - 1));
    if (err <= cfg.tolerance) {
      psi.setZero();
      for (Eigen::Index k = 0; k < m; ++k) psi += (nrm * c(k)) * basis.vectors[static_cast<std::size_t>(k)];
      return step;
    }
  }
  throw NumericalError("evolve_krylov: local error above tolerance " + std::to_string(cfg.tolerance) +
                       " even at step " + std::to_string(kMinStep) + " with m=" +
                       std::to_string(cfg.subspace_dim));
}

void krylov_advance(const PauliSum& hamiltonian, Eigen::VectorXcd& psi, double duration,
                    const KrylovConfig& cfg) {
  if (duration <= 0.0) return;
  const double steps = std::ceil(duration / cfg.dt - 1e-9);
  const double nominal = duration / std::max(steps, 1.0);
  double remaining = duration;
  while (remaining > 1e-15 * std::max(1.0, duration)) {
    const double h = std::min(nominal, remaining);
    remaining -= krylov_step(hamiltonian, psi, h, cfg);
  }
}

void check_krylov(const KrylovConfig& cfg) {
  if (cfg.subspace_dim < 2) throw std::invalid_argument("KrylovConfig: subspace_dim must be >= 2");
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("KrylovConfig: dt must be positive");
  if (!(cfg.tolerance > 0.0)) throw std::invalid_argument("KrylovConfig: tolerance must be positive");
}

}  // namespace

StateVector evolve_krylov(const PauliSum& hamiltonian, const StateVector& state, double t,
                          const KrylovConfig& cfg) {
  check_krylov(cfg);
  if (t < 0.0) throw std::invalid_argument("evolve_krylov: t must be >= 0");
  if (state.num_sites() != hamiltonian.num_sites()) throw std::invalid_argument("evolve_krylov: dimension mismatch");
  const auto amps = state.amplitudes();
  Eigen::VectorXcd psi = Eigen::Map<const Eigen::VectorXcd>(amps.data(), static_cast<Eigen::Index>(amps.size()));
  krylov_advance(hamiltonian, psi, t, cfg);
  return StateVector(state.num_sites(), std::vector<Complex>(psi.data(), psi.data() + psi.size()));
}

TimeSeries ProbeSeries::channel(std::size_t index) const {
  std::vector<double> v(samples.size());
  for (std::size_t k = 0; k < samples.size(); ++k) v[k] = samples[k].at(index);
  return TimeSeries(times, std::move(v));
}

std::vector<ProbeSeries> trajectory(const SpectralPropagator& prop, const StateVector& initial,
                                    const std::vector<double>& times,
                                    const std::vector<ProbeRequest>& probes, int threads) {
  check_times(times);
  auto out = empty_series(probes, times);
  const Eigen::VectorXcd c = prop.to_eigenbasis(initial);
  parallel_for(times.size(), threads, [&](std::size_t k) {
    const StateVector psi = prop.from_eigenbasis(c, times[k]);
    auto values = evaluate_probes(probes, psi);
    for (std::size_t p = 0; p < probes.size(); ++p) out[p].samples[k] = std::move(values[p]);
  });
  return out;
}

std::vector<ProbeSeries> trajectory(const PauliSum& hamiltonian, const StateVector& initial,
                                    const std::vector<double>& times,
                                    const std::vector<ProbeRequest>& probes, const KrylovConfig& cfg) {
  check_times(times);
  check_krylov(cfg);
  if (initial.num_sites() != hamiltonian.num_sites()) throw std::invalid_argument("trajectory: dimension mismatch");
  auto out = empty_series(probes, times);
  const auto amps = initial.amplitudes();
  Eigen::VectorXcd psi = Eigen::Map<const Eigen::VectorXcd>(amps.data(), static_cast<Eigen::Index>(amps.size()));
  double now = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    krylov_advance(hamiltonian, psi, times[k] - now, cfg);
    now = times[k];
    const StateVector state(initial.num_sites(), std::vector<Complex>(psi.data(), psi.data() + psi.size()));
    auto values = evaluate_probes(probes, state);
    for (std::size_t p = 0; p < probes.size(); ++p) out[p].samples[k] = std::move(values[p]);
  }
  return out;
}

std::vector<double> uniform_times(double t_max, double dt) {
  if (!(dt > 0.0) || t_max < 0.0) throw std::invalid_argument("uniform_times: need dt > 0 and t_max >= 0");
  const auto n = static_cast<long>(std::floor(t_max / dt + 1e-9));
  std::vector<double> t(static_cast<std::size_t>(n) + 1);
  for (long k = 0; k <= n; ++k) t[static_cast<std::size_t>(k)] = static_cast<double>(k) * dt;
  return t;
}

}  // namespace easym
