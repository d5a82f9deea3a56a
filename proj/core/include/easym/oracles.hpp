#pragma once

namespace easym::oracles {

/// Second-order short-time expansion of the full-chain charge variance for a
/// tilted ferromagnet under the nearest-neighbour chain (delta2 = 0):
///
///   L [ sin^2 th + t^2/2 (1-g) ((1-g) + (1-d1)(3 sin^2 th cos^2 th - sin^2 th)) ]
///
/// Extensive form (the per-site expression multiplied by L).
double early_time_cv(double theta, double gamma, double delta1, int num_sites, double t);

/// Entanglement asymmetry of n sites of an untouched tilted product state:
/// the Shannon entropy (nats) of Binomial(n, sin^2(theta/2)).
double tilted_product_ea(int n, double theta);

}  // namespace easym::oracles
