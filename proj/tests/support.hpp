#pragma once

#include <random>

#include "tqst/core.hpp"
#include "tqst/random.hpp"

namespace tqst::testing {

inline Vector random_ket(Index dim, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vector v(dim);
  for (Index k = 0; k < dim; ++k) v(k) = Complex(g(rng), g(rng));
  return v / v.norm();
}

/// Ginibre-style mixed state G G^dag / tr, of rank `rank`.
inline Matrix random_density(Index dim, Rng& rng, Index rank = -1) {
  if (rank < 0) rank = dim;
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix a(dim, rank);
  for (Index r = 0; r < dim; ++r)
    for (Index c = 0; c < rank; ++c) a(r, c) = Complex(g(rng), g(rng));
  Matrix rho = a * a.adjoint();
  return rho / rho.trace().real();
}

inline Matrix random_unitary(Index dim, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix a(dim, dim);
  for (Index r = 0; r < dim; ++r)
    for (Index c = 0; c < dim; ++c) a(r, c) = Complex(g(rng), g(rng));
  Eigen::HouseholderQR<Matrix> qr(a);
  return qr.householderQ();
}

}  // namespace tqst::testing
