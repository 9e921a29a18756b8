#pragma once

#include <vector>

#include "lrv/chain_oracle.hpp"
#include "lrv/rng.hpp"

namespace lrv::test {

inline std::vector<double> gaussian_series(std::size_t n, std::uint64_t seed,
                                           std::uint64_t stream = 0) {
  RngStream rng(seed, stream);
  std::vector<double> x(n);
  for (auto& v : x) v = rng.normal();
  return x;
}

// AR(1) with coefficient phi, started at zero.
inline std::vector<double> ar1_series(std::size_t n, double phi, std::uint64_t seed) {
  RngStream rng(seed, 0);
  std::vector<double> x(n);
  double prev = 0.0;
  for (auto& v : x) {
    v = phi * prev + rng.normal();
    prev = v;
  }
  return x;
}

// Dense random chain with entries bounded away from zero so it is primitive.
inline oracle::Matrix random_stochastic(int states, RngStream& rng) {
  oracle::Matrix P(states, states);
  for (int i = 0; i < states; ++i) {
    for (int j = 0; j < states; ++j) P(i, j) = 0.05 + rng.uniform();
    P.row(i) /= P.row(i).sum();
  }
  return P;
}

inline oracle::Matrix random_symmetric(int states, RngStream& rng) {
  oracle::Matrix h(states, states);
  for (int i = 0; i < states; ++i) {
    for (int j = 0; j <= i; ++j) h(i, j) = h(j, i) = rng.normal();
  }
  return h;
}

inline oracle::Matrix two_state_P() {
  oracle::Matrix P(2, 2);
  P << 0.9, 0.1, 0.2, 0.8;
  return P;
}

inline oracle::Vector indicator_last() {
  oracle::Vector f(2);
  f << 0.0, 1.0;
  return f;
}

}  // namespace lrv::test
