#include "easym/observables.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace easym {

namespace {

constexpr double kEigenFloor = 1e-12;
constexpr double kNegativeEigenvalueLimit = 1e-8;
constexpr double kAsymmetryClamp = 1e-9;

// Gathers the bits of x at `positions` into a compact integer.
inline std::uint64_t gather(std::uint64_t x, const std::vector<int>& positions) {
  std::uint64_t r = 0;
  for (std::size_t k = 0; k < positions.size(); ++k) r |= ((x >> positions[k]) & 1U) << k;
  return r;
}

inline int sector_label(std::uint64_t local, SymmetryProbe probe) {
  const int w = std::popcount(local);
  return probe == SymmetryProbe::U1 ? w : (w & 1);
}

}  // namespace

void DensityMatrix::validate(double tolerance) const {
  if (entries.rows() != (Eigen::Index{1} << n_sites) || entries.cols() != entries.rows()) {
    throw NumericalError("density matrix has wrong shape");
  }
  if ((entries - entries.adjoint()).cwiseAbs().maxCoeff() > tolerance) {
    throw NumericalError("density matrix is not Hermitian");
  }
  if (std::abs(entries.trace() - Complex{1.0, 0.0}) > tolerance) {
    throw NumericalError("density matrix trace differs from 1");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(entries, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tolerance) {
    throw NumericalError("density matrix has a negative eigenvalue");
  }
}

DensityMatrix reduced_density_matrix(const StateVector& state, const Region& region) {
  const int n = state.num_sites();
  if (region.num_sites() != n) throw std::invalid_argument("region belongs to a different chain length");

  std::vector<int> env;
  for (int s = 0; s < n; ++s) {
    if (!(region.mask() & bit(s))) env.push_back(s);
  }
  const Eigen::Index rows = Eigen::Index{1} << region.size();
  const Eigen::Index cols = Eigen::Index{1} << env.size();

  // psi reshaped to (region index, environment index); rho = M M^dagger
  Eigen::MatrixXcd m(rows, cols);
  const auto amps = state.amplitudes();
  for (std::uint64_t x = 0; x < amps.size(); ++x) {
    m(static_cast<Eigen::Index>(gather(x, region.sites())),
      static_cast<Eigen::Index>(gather(x, env))) = amps[x];
  }
  DensityMatrix rho{region.size(), Eigen::MatrixXcd(rows, rows)};
  rho.entries.noalias() = m * m.adjoint();
  return rho;
}

double von_neumann_entropy(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.entries, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("entropy: eigensolver failed");
  double s = 0.0;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const double lambda = es.eigenvalues()(k);
    if (lambda < -kNegativeEigenvalueLimit) {
      throw NumericalError("invalid density matrix: eigenvalue " + std::to_string(lambda));
    }
    if (lambda > kEigenFloor) s -= lambda * std::log(lambda);
  }
  return std::max(s, 0.0);
}

DensityMatrix sector_project(const DensityMatrix& rho, SymmetryProbe probe) {
  DensityMatrix out = rho;
  const Eigen::Index dim = rho.entries.rows();
  for (Eigen::Index c = 0; c < dim; ++c) {
    const int qc = sector_label(static_cast<std::uint64_t>(c), probe);
    for (Eigen::Index r = 0; r < dim; ++r) {
      if (sector_label(static_cast<std::uint64_t>(r), probe) != qc) out.entries(r, c) = 0.0;
    }
  }
  return out;
}

double entanglement_asymmetry(const DensityMatrix& rho, SymmetryProbe probe) {
  const Eigen::Index dim = rho.entries.rows();
  bool block_diagonal = true;
  for (Eigen::Index c = 0; c < dim && block_diagonal; ++c) {
    const int qc = sector_label(static_cast<std::uint64_t>(c), probe);
    for (Eigen::Index r = 0; r < dim; ++r) {
      if (sector_label(static_cast<std::uint64_t>(r), probe) != qc &&
          rho.entries(r, c) != Complex{0.0, 0.0}) {
        block_diagonal = false;
        break;
      }
    }
  }
  if (block_diagonal) return 0.0;

  const double ea = von_neumann_entropy(sector_project(rho, probe)) - von_neumann_entropy(rho);
  if (ea < -kAsymmetryClamp) {
    throw NumericalError("entanglement asymmetry negative beyond tolerance: " + std::to_string(ea));
  }
  return std::max(ea, 0.0);
}

double entanglement_asymmetry(const StateVector& state, const Region& region, SymmetryProbe probe) {
  return entanglement_asymmetry(reduced_density_matrix(state, region), probe);
}

ChargeMoments charge_moments(const StateVector& state, const Region& region) {
  if (region.num_sites() != state.num_sites()) throw std::invalid_argument("region belongs to a different chain length");
  const auto amps = state.amplitudes();
  const int n = region.size();
  const std::uint64_t mask = region.mask();
  // probability mass per region Hamming weight, then moments of Q = n - 2w
  std::vector<double> weight_mass(static_cast<std::size_t>(n) + 1, 0.0);
  for (std::uint64_t x = 0; x < amps.size(); ++x) {
    weight_mass[static_cast<std::size_t>(std::popcount(x & mask))] += std::norm(amps[x]);
  }
  double total = 0.0, mean = 0.0;
  for (int w = 0; w <= n; ++w) {
    total += weight_mass[static_cast<std::size_t>(w)];
    mean += weight_mass[static_cast<std::size_t>(w)] * (n - 2 * w);
  }
  mean /= total;
  double var = 0.0;
  for (int w = 0; w <= n; ++w) {
    const double d = (n - 2 * w) - mean;
    var += weight_mass[static_cast<std::size_t>(w)] * d * d;
  }
  return {mean, var / total};
}

std::map<int, double> charge_distribution(const StateVector& state) {
  const int n = state.num_sites();
  std::map<int, double> dist;
  for (int w = 0; w <= n; ++w) dist[n - 2 * w] = 0.0;
  const auto amps = state.amplitudes();
  for (std::uint64_t x = 0; x < amps.size(); ++x) dist[n - 2 * std::popcount(x)] += std::norm(amps[x]);
  return dist;
}

std::string_view probe_name(ProbeKind kind) {
  switch (kind) {
    case ProbeKind::AsymmetryU1: return "EA-U1";
    case ProbeKind::AsymmetryZ2: return "EA-Z2";
    case ProbeKind::ChargeVariance: return "CV";
    case ProbeKind::ChargeMean: return "Qmean";
    case ProbeKind::ChargeDistribution: return "PQ";
    case ProbeKind::Entropy: return "EE";
    case ProbeKind::SymmetrizedEntropy: return "EEQ";
  }
  return "?";
}

ProbeKind parse_probe(std::string_view name) {
  for (auto k : {ProbeKind::AsymmetryU1, ProbeKind::AsymmetryZ2, ProbeKind::ChargeVariance,
                 ProbeKind::ChargeMean, ProbeKind::ChargeDistribution, ProbeKind::Entropy,
                 ProbeKind::SymmetrizedEntropy}) {
    if (probe_name(k) == name) return k;
  }
  throw std::invalid_argument("unknown probe '" + std::string(name) + "'");
}

int probe_width(ProbeKind kind, int num_sites) {
  return kind == ProbeKind::ChargeDistribution ? num_sites + 1 : 1;
}

namespace {

bool needs_rdm(ProbeKind k) {
  return k == ProbeKind::AsymmetryU1 || k == ProbeKind::AsymmetryZ2 || k == ProbeKind::Entropy ||
         k == ProbeKind::SymmetrizedEntropy;
}

std::vector<double> evaluate_with(const ProbeRequest& req, const StateVector& state,
                                  const DensityMatrix* rho) {
  switch (req.kind) {
    case ProbeKind::AsymmetryU1: return {entanglement_asymmetry(*rho, SymmetryProbe::U1)};
    case ProbeKind::AsymmetryZ2: return {entanglement_asymmetry(*rho, SymmetryProbe::Z2)};
    case ProbeKind::Entropy: return {von_neumann_entropy(*rho)};
    case ProbeKind::SymmetrizedEntropy:
      return {von_neumann_entropy(sector_project(*rho, SymmetryProbe::U1))};
    case ProbeKind::ChargeVariance:
      return {charge_moments(state, Region::full(state.num_sites())).variance};
    case ProbeKind::ChargeMean:
      return {charge_moments(state, Region::full(state.num_sites())).mean};
    case ProbeKind::ChargeDistribution: {
      std::vector<double> out;
      for (const auto& [q, p] : charge_distribution(state)) out.push_back(p);
      return out;
    }
  }
  return {};
}

}  // namespace

std::vector<double> evaluate_probe(const ProbeRequest& request, const StateVector& state) {
  if (needs_rdm(request.kind)) {
    const auto rho = reduced_density_matrix(state, request.region);
    return evaluate_with(request, state, &rho);
  }
  return evaluate_with(request, state, nullptr);
}

std::vector<std::vector<double>> evaluate_probes(const std::vector<ProbeRequest>& requests,
                                                 const StateVector& state) {
  std::vector<std::vector<double>> out;
  out.reserve(requests.size());
  std::vector<std::pair<Region, DensityMatrix>> cache;
  for (const auto& req : requests) {
    if (!needs_rdm(req.kind)) {
      out.push_back(evaluate_with(req, state, nullptr));
      continue;
    }
    const DensityMatrix* rho = nullptr;
    for (const auto& [r, m] : cache) {
      if (r == req.region) rho = &m;
    }
    if (rho == nullptr) {
      cache.emplace_back(req.region, reduced_density_matrix(state, req.region));
      rho = &cache.back().second;
    }
    out.push_back(evaluate_with(req, state, rho));
  }
  return out;
}

}  // namespace easym
