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

// Dense complex linear algebra shared by every other module. Storage is
// Eigen (column-major); factorizations and eigensolvers go through LAPACK.

#include <complex>

#include <Eigen/Dense>

#include "rfom/error.hpp"

namespace rfom {

using Scalar = std::complex<double>;
using Index = Eigen::Index;
using DenseMatrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Largest entry magnitude.
double max_abs(const DenseMatrix& m);

/// True when ||M - M^H||_F <= tol * ||M||_F.
bool is_hermitian(const DenseMatrix& m, double tol = 1e-10);

/// LU factorization with partial pivoting. Throws SingularMatrix when a
/// pivot falls below 1e-14 * max|M_ij|.
class LuFactor {
 public:
  explicit LuFactor(const DenseMatrix& m);

  DenseMatrix solve(const DenseMatrix& rhs) const;
  Vector solve(const Vector& rhs) const;
  /// Solves X * M = rhs.
  DenseMatrix solve_right(const DenseMatrix& rhs) const;

  Index size() const { return lu_.rows(); }

 private:
  Eigen::PartialPivLU<DenseMatrix> lu_;
};

DenseMatrix lu_solve(const DenseMatrix& m, const DenseMatrix& rhs);
Vector lu_solve(const DenseMatrix& m, const Vector& rhs);

struct QrFactors {
  DenseMatrix q;  // rows x cols, orthonormal columns
  DenseMatrix r;  // cols x cols, upper triangular
};

/// Thin Householder QR. Throws RankDeficient when |R_ii| < 1e-12 * ||M||_F.
QrFactors qr_orthonormalize(const DenseMatrix& m);

struct EigenPairs {
  Vector values;
  DenseMatrix vectors;  // unit-norm columns
};

struct HermitianEigenPairs {
  RealVector values;    // ascending
  DenseMatrix vectors;  // unitary
};

/// Hermitian eigendecomposition (LAPACK zheevd).
HermitianEigenPairs eig_hermitian(const DenseMatrix& m);

/// Standard eigenproblem. With `hermitian` set the values are real and
/// ascending and the vectors unitary; otherwise LAPACK zgeev is used.
EigenPairs eig_dense(const DenseMatrix& m, bool hermitian);

/// Generalized eigenproblem A g = theta B g. Reduces to B^{-1} A when B is
/// well conditioned (kappa <= 1e10) and falls back to QZ otherwise. Throws
/// SingularPencil when sigma_min(B) < 1e-12 * sigma_max(B).
EigenPairs generalized_eig(const DenseMatrix& a, const DenseMatrix& b);

/// Singular values, descending.
RealVector svd_values(const DenseMatrix& m);

}  // namespace rfom
