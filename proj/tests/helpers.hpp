// Copyright 2026 The rfom2 Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <random>

#include "rfom/core.hpp"
#include "rfom/operator.hpp"

namespace rfom::test {

inline DenseMatrix random_matrix(Index rows, Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  DenseMatrix m(rows, cols);
  for (Index c = 0; c < cols; ++c) {
    for (Index r = 0; r < rows; ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(r, c) = Scalar(re, im);
    }
  }
  return m;
}

inline Vector random_vector(Index n, std::uint64_t seed) { return random_matrix(n, 1, seed).col(0); }

inline DenseMatrix random_hermitian(Index n, std::uint64_t seed) {
  const DenseMatrix g = random_matrix(n, n, seed);
  return 0.5 * (g + g.adjoint());
}

// Hermitian matrix with the given spectrum and a random eigenbasis.
inline DenseMatrix hermitian_with_spectrum(const RealVector& lambda, std::uint64_t seed) {
  const Index n = lambda.size();
  Eigen::HouseholderQR<DenseMatrix> qr(random_matrix(n, n, seed));
  const DenseMatrix q = qr.householderQ() * DenseMatrix::Identity(n, n);
  DenseMatrix a = q * lambda.cast<Scalar>().asDiagonal() * q.adjoint();
  return 0.5 * (a + a.adjoint());
}

inline double rel_diff(const Vector& a, const Vector& b) { return (a - b).norm() / b.norm(); }

}  // namespace rfom::test
