#pragma once

#include <random>

#include "pmorkit/linalg.hpp"

namespace pmk::test {

inline Matrix random_matrix(int rows, int cols, std::mt19937_64& rng,
                            double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = dist(rng);
  return m;
}

inline Vector random_vector(int n, std::mt19937_64& rng, double lo = -1.0,
                            double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = dist(rng);
  return v;
}

inline Matrix random_orthonormal(int rows, int cols, std::mt19937_64& rng) {
  return orthonormalize(random_matrix(rows, cols, rng));
}

}  // namespace pmk::test
