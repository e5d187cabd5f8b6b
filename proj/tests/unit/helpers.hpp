#pragma once

#include <cstdint>
#include <random>

#include "fdsec/linalg.hpp"

namespace testutil {

using fdsec::ComplexMatrix;
using fdsec::ComplexVector;
using fdsec::RealMatrix;

inline ComplexVector random_vector(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::normal_distribution<double> d(0.0, scale);
  ComplexVector v(n);
  for (int i = 0; i < n; ++i) v(i) = {d(rng), d(rng)};
  return v;
}

inline ComplexMatrix random_matrix(std::mt19937_64& rng, int r, int c) {
  std::normal_distribution<double> d;
  ComplexMatrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = {d(rng), d(rng)};
  return m;
}

inline ComplexMatrix random_hermitian(std::mt19937_64& rng, int n) {
  const ComplexMatrix a = random_matrix(rng, n, n);
  return (a + a.adjoint()) / 2.0;
}

inline ComplexMatrix random_psd(std::mt19937_64& rng, int n, int rank) {
  const ComplexMatrix a = random_matrix(rng, n, rank);
  return a * a.adjoint();
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1e-300, std::max(std::abs(a), std::abs(b))); }

}  // namespace testutil
