#pragma once

#include <random>

#include "easym/state.hpp"
#include "../oracle/dense_reference.hpp"

namespace testing_util {

inline ref::Vec to_vec(const easym::StateVector& s) {
  ref::Vec v(static_cast<Eigen::Index>(s.dimension()));
  for (std::size_t i = 0; i < s.dimension(); ++i) v(static_cast<Eigen::Index>(i)) = s[i];
  return v;
}

inline easym::StateVector from_vec(int L, const ref::Vec& v) {
  return easym::StateVector(L, std::vector<easym::Complex>(v.data(), v.data() + v.size()));
}

inline easym::StateVector random_state(int L, std::mt19937_64& rng) { return from_vec(L, ref::random_state(L, rng)); }

inline double distance(const easym::StateVector& a, const easym::StateVector& b) {
  return (to_vec(a) - to_vec(b)).norm();
}

inline easym::Gate random_unitary4(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::Matrix4cd z;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) z(i, j) = {g(rng), g(rng)};
  Eigen::HouseholderQR<Eigen::Matrix4cd> qr(z);
  return qr.householderQ();
}

}  // namespace testing_util
