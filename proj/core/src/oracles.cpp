#include "easym/oracles.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace easym::oracles {

double early_time_cv(double theta, double gamma, double delta1, int num_sites, double t) {
  if (t < 0.0) throw std::invalid_argument("early_time_cv: t must be >= 0");
  const double s2 = std::sin(theta) * std::sin(theta);
  const double c2 = std::cos(theta) * std::cos(theta);
  const double g = 1.0 - gamma;
  const double per_site = s2 + 0.5 * t * t * g * (g + (1.0 - delta1) * (3.0 * s2 * c2 - s2));
  return num_sites * per_site;
}

double tilted_product_ea(int n, double theta) {
  if (n < 1) throw std::invalid_argument("tilted_product_ea: n must be >= 1");
  if (!(theta >= 0.0 && theta <= std::numbers::pi / 2 + 1e-12)) {
    throw std::invalid_argument("tilted_product_ea: theta must lie in [0, pi/2]");
  }
  const double p = std::sin(theta / 2) * std::sin(theta / 2);
  const double q = 1.0 - p;
  double h = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double log_binom = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    const double pk = std::exp(log_binom) * std::pow(q, n - k) * std::pow(p, k);
    if (pk > 0.0) h -= pk * std::log(pk);
  }
  return h;
}

}  // namespace easym::oracles
