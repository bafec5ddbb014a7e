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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <utility>

#include "rfom/functions.hpp"
#include "rfom/operator.hpp"

namespace rfom {

// Five-point Dirichlet Laplacian on an m x m grid: 4 on the diagonal, -1 off it.
SparseMatrix gen_laplacian_2d(Index m);

// Laplacian plus a central-difference convection term nu u_x, scaled by h^2
// with h = 1/(m+1): off-diagonals in x are -1 -/+ nu h / 2.
SparseMatrix gen_convection_diffusion_2d(Index m, double convection);

// Q diag(lambda) Q^H with Q a random unitary matrix and
// lambda_i = lo + (hi - lo) (i/(n-1))^grading. Stored densely in sparse form.
SparseMatrix gen_graded_hermitian(Index n, double lo, double hi, double grading, std::uint64_t seed);

// Coordinate format only; hermitian and symmetric storage is expanded.
SparseMatrix load_matrix_market(const std::filesystem::path& path);
// Writes every stored entry in general coordinate format, exactly round-trippable.
void write_matrix_market(const std::filesystem::path& path, const SparseMatrix& a);

enum class RhsPolicy { RandomEach, Fixed };

struct ProblemSequence {
  SparseMatrix base;
  Index length = 1;
  double epsilon = 0.0;
  RhsPolicy rhs = RhsPolicy::RandomEach;
  std::uint64_t seed = 0;
  bool hermitian = false;
};

// A^{(i+1)} = A^{(i)} + eps E^{(i)}, where E^{(i)} is Gaussian on the sparsity
// pattern of A^{(1)}, Hermitian-symmetrized when requested, with
// ||E||_F = ||A^{(1)}||_F. Right-hand sides are Gaussian, real when A^{(1)} is.
class PerturbationSequence {
 public:
  explicit PerturbationSequence(ProblemSequence seq);

  // Returns nullopt once `length` problems have been produced.
  std::optional<std::pair<SparseMatrix, Vector>> next();

 private:
  Vector random_vector();
  SparseMatrix perturbation();

  ProblemSequence seq_;
  Index produced_ = 0;
  SparseMatrix current_;
  Vector fixed_rhs_;
  bool real_ = true;
  std::mt19937_64 matrix_rng_;
  std::mt19937_64 rhs_rng_;
};

// Eigendecomposition of an oracle matrix, reusable across right-hand sides.
struct Spectral {
  bool hermitian = false;
  Vector values;
  DenseMatrix vectors;
  // LU of the eigenvector matrix on the general path.
  std::optional<LuFactor> inverse;
};

// Throws IllConditionedEigenbasis on the general path when cond(vectors) > 1e8.
Spectral spectral_decomposition(const DenseMatrix& a, bool hermitian);

Vector oracle_apply(const Spectral& s, const FunctionSpec& fun, const Vector& b);

Vector oracle_funm(const DenseMatrix& a, const FunctionSpec& fun, const Vector& b, bool hermitian);

// Eigenvectors of the k eigenvalues of smallest modulus.
DenseMatrix smallest_eigenvectors(const Spectral& s, Index k);

}  // namespace rfom
