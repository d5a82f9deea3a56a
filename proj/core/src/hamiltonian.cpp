#include "easym/hamiltonian.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <random>
#include <string>

#include "lanczos.hpp"

namespace easym {

namespace {

// i^k for k mod 4
Complex i_power(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

inline double parity_sign(std::uint64_t x) { return (std::popcount(x) & 1) ? -1.0 : 1.0; }

PauliString two_site(double coefficient, int a, int b, PauliAxis axis) {
  return PauliString{coefficient, {{a, axis}, {b, axis}}};
}

}  // namespace

HamiltonianParams h1_params(int num_sites, double gamma) {
  return HamiltonianParams{num_sites, gamma, 0.4, 0.0, true, 1.0};
}

HamiltonianParams h2_params(int num_sites, double gamma) {
  return HamiltonianParams{num_sites, gamma, 0.4, 0.05, true, 1.0};
}

PauliSum::PauliSum(int num_sites, std::vector<PauliString> terms)
    : num_sites_(num_sites), terms_(std::move(terms)) {
  if (num_sites < 1 || num_sites > 30) throw std::invalid_argument("PauliSum: bad number of sites");
  std::map<std::uint64_t, std::map<std::uint64_t, Complex>> grouped;
  for (const auto& t : terms_) {
    if (!std::isfinite(t.coefficient)) throw std::invalid_argument("PauliSum: non-finite coefficient");
    std::uint64_t flip = 0, sign = 0, seen = 0;
    int ny = 0;
    for (const auto& f : t.factors) {
      if (f.site < 0 || f.site >= num_sites) throw std::out_of_range("PauliSum: site out of range");
      if (seen & bit(f.site)) throw std::invalid_argument("PauliSum: repeated site in a Pauli string");
      seen |= bit(f.site);
      switch (f.axis) {
        case PauliAxis::X: flip |= bit(f.site); break;
        case PauliAxis::Y: flip |= bit(f.site); sign |= bit(f.site); ++ny; break;
        case PauliAxis::Z: sign |= bit(f.site); break;
      }
    }
    grouped[flip][sign] += t.coefficient * i_power(ny);
  }
  for (const auto& [flip, by_sign] : grouped) {
    FlipGroup g{flip, {}};
    for (const auto& [sign, c] : by_sign) {
      if (c != Complex{0.0, 0.0}) g.phases.emplace_back(c, sign);
    }
    if (!g.phases.empty()) groups_.push_back(std::move(g));
  }
}

PauliSum PauliSum::scaled(double factor) const {
  auto t = terms_;
  for (auto& s : t) s.coefficient *= factor;
  return PauliSum(num_sites_, std::move(t));
}

PauliSum operator+(const PauliSum& a, const PauliSum& b) {
  if (a.num_sites_ != b.num_sites_) throw std::invalid_argument("PauliSum +: site count mismatch");
  auto t = a.terms_;
  t.insert(t.end(), b.terms_.begin(), b.terms_.end());
  return PauliSum(a.num_sites_, std::move(t));
}

PauliSum build_hamiltonian(const HamiltonianParams& p) {
  const int n = p.num_sites;
  if (p.periodic && n < 3) {
    throw std::invalid_argument("periodic chain needs at least 3 sites (L=2 would double-count the bond)");
  }
  if (n < 2) throw std::invalid_argument("chain needs at least 2 sites");

  std::vector<PauliString> terms;
  const int bonds = p.periodic ? n : n - 1;
  for (int j = 0; j < bonds; ++j) {
    const int k = (j + 1) % n;
    terms.push_back(two_site(-0.25, j, k, PauliAxis::X));
    terms.push_back(two_site(-0.25 * p.gamma, j, k, PauliAxis::Y));
    terms.push_back(two_site(-0.25 * p.delta1, j, k, PauliAxis::Z));
  }
  if (p.delta2 != 0.0) {
    const int nnn = p.periodic ? n : n - 2;
    const double c = -p.delta2 * p.delta2_scale;
    for (int j = 0; j < nnn; ++j) {
      const int k = (j + 2) % n;
      if (k == j) continue;
      terms.push_back(two_site(c, j, k, PauliAxis::X));
      terms.push_back(two_site(c, j, k, PauliAxis::Y));
      terms.push_back(two_site(c, j, k, PauliAxis::Z));
    }
  }
  return PauliSum(n, std::move(terms));
}

PauliSum build_charge_operator(int num_sites, const Region& region) {
  if (region.num_sites() != num_sites) throw std::invalid_argument("charge operator: region size mismatch");
  std::vector<PauliString> terms;
  for (int s : region.sites()) terms.push_back(PauliString{1.0, {{s, PauliAxis::Z}}});
  return PauliSum(num_sites, std::move(terms));
}

void apply_into(const PauliSum& op, std::span<const Complex> in, std::span<Complex> out) {
  const std::size_t dim = std::size_t{1} << op.num_sites();
  if (in.size() != dim || out.size() != dim) throw std::invalid_argument("apply: dimension mismatch");
  std::fill(out.begin(), out.end(), Complex{0.0, 0.0});
  for (const auto& g : op.groups()) {
    const auto f = g.flip_mask;
    if (g.phases.size() == 1) {
      const auto [c, m] = g.phases.front();
      for (std::uint64_t y = 0; y < dim; ++y) {
        const std::uint64_t x = y ^ f;
        out[y] += c * parity_sign(x & m) * in[x];
      }
      continue;
    }
    for (std::uint64_t y = 0; y < dim; ++y) {
      const std::uint64_t x = y ^ f;
      Complex amp{0.0, 0.0};
      for (const auto& [c, m] : g.phases) amp += c * parity_sign(x & m);
      out[y] += amp * in[x];
    }
  }
}

std::vector<Complex> apply(const PauliSum& op, const StateVector& state) {
  if (state.num_sites() != op.num_sites()) throw std::invalid_argument("apply: dimension mismatch");
  std::vector<Complex> out(state.dimension());
  apply_into(op, state.amplitudes(), out);
  return out;
}

Complex expectation(const PauliSum& op, const StateVector& state) {
  const auto h = apply(op, state);
  Complex acc{0.0, 0.0};
  for (std::size_t k = 0; k < h.size(); ++k) acc += std::conj(state[k]) * h[k];
  return acc;
}

Eigen::MatrixXcd materialize_dense(const PauliSum& op, int max_sites) {
  if (op.num_sites() > max_sites) {
    throw std::invalid_argument("materialize_dense: L=" + std::to_string(op.num_sites()) +
                                " exceeds dense cap " + std::to_string(max_sites));
  }
  const Eigen::Index dim = Eigen::Index{1} << op.num_sites();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& g : op.groups()) {
    for (Eigen::Index x = 0; x < dim; ++x) {
      const auto y = static_cast<Eigen::Index>(static_cast<std::uint64_t>(x) ^ g.flip_mask);
      for (const auto& [c, mask] : g.phases) {
        m(y, x) += c * parity_sign(static_cast<std::uint64_t>(x) & mask);
      }
    }
  }
  return m;
}

double commutator_frobenius(const PauliSum& a, const PauliSum& b, int max_sites) {
  if (a.num_sites() != b.num_sites()) throw std::invalid_argument("commutator: site count mismatch");
  const Eigen::MatrixXcd ma = materialize_dense(a, max_sites);
  const Eigen::MatrixXcd mb = materialize_dense(b, max_sites);
  return (ma * mb - mb * ma).norm();
}

namespace detail {

LanczosBasis lanczos(const PauliSum& op, const Eigen::VectorXcd& start, int max_dim) {
  const Eigen::Index dim = start.size();
  const int m = static_cast<int>(std::min<Eigen::Index>(max_dim, dim));
  LanczosBasis basis;
  basis.vectors.reserve(static_cast<std::size_t>(m));
  basis.alpha.resize(m);
  basis.beta.resize(m);

  Eigen::VectorXcd w(dim);
  basis.vectors.push_back(start);
  int k = 0;
  for (; k < m; ++k) {
    const auto& v = basis.vectors[static_cast<std::size_t>(k)];
    apply_into(op, std::span<const Complex>(v.data(), static_cast<std::size_t>(dim)),
               std::span<Complex>(w.data(), static_cast<std::size_t>(dim)));
    const double a = v.dot(w).real();
    basis.alpha(k) = a;
    w -= a * v;
    if (k > 0) w -= basis.beta(k - 1) * basis.vectors[static_cast<std::size_t>(k - 1)];
    // full reorthogonalization, two passes
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& u : basis.vectors) w -= u.dot(w) * u;
    }
    const double b = w.norm();
    basis.beta(k) = b;
    if (b <= 1e-12 * std::max(1.0, std::abs(a))) {
      basis.invariant = true;
      basis.beta(k) = 0.0;
      ++k;
      break;
    }
    if (k + 1 < m) basis.vectors.push_back(w / b);
  }
  basis.alpha.conservativeResize(k);
  basis.beta.conservativeResize(k);
  if (k == dim) basis.invariant = true;
  return basis;
}

}  // namespace detail

GroundState ground_state(const PauliSum& op, const GroundStateOptions& options) {
  const Eigen::Index dim = Eigen::Index{1} << op.num_sites();
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;
  Eigen::VectorXcd v(dim);
  for (Eigen::Index k = 0; k < dim; ++k) v(k) = Complex(normal(rng), normal(rng));
  v.normalize();

  Eigen::VectorXcd hv(dim);
  int iterations = 0;
  double energy = 0.0;
  double residual = std::numeric_limits<double>::infinity();
  while (true) {
    const auto basis = detail::lanczos(op, v, options.subspace_dim);
    const auto m = basis.alpha.size();
    iterations += static_cast<int>(m);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    tri.computeFromTridiagonal(basis.alpha, basis.beta.head(std::max<Eigen::Index>(m - 1, 0)),
                               Eigen::ComputeEigenvectors);
    energy = tri.eigenvalues()(0);
    const Eigen::VectorXd y = tri.eigenvectors().col(0);
    v.setZero();
    for (Eigen::Index k = 0; k < m; ++k) v += y(k) * basis.vectors[static_cast<std::size_t>(k)];
    v.normalize();

    apply_into(op, std::span<const Complex>(v.data(), static_cast<std::size_t>(dim)),
               std::span<Complex>(hv.data(), static_cast<std::size_t>(dim)));
    ++iterations;
    energy = v.dot(hv).real();
    residual = (hv - energy * v).norm();
    if (residual < options.residual_tolerance) break;
    if (iterations >= options.max_iterations) {
      throw NumericalError("ground_state: no convergence after " + std::to_string(iterations) +
                           " iterations (residual " + std::to_string(residual) + ")");
    }
  }

  std::vector<Complex> amps(v.data(), v.data() + dim);
  return GroundState{energy, StateVector(op.num_sites(), std::move(amps)), residual, iterations};
}

}  // namespace easym
