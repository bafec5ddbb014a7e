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

#include "rfom/arnoldi.hpp"
#include "rfom/functions.hpp"
#include "rfom/operator.hpp"
#include "rfom/quadrature.hpp"

namespace rfom {

// U and C = A U, plus the diagonal of D. An empty subspace has k = 0.
struct RecycleSubspace {
  DenseMatrix U;
  DenseMatrix C;
  RealVector d;

  Index k() const { return U.cols(); }
  bool empty() const { return U.cols() == 0; }
  DenseMatrix D() const { return d.cast<Scalar>().asDiagonal(); }
  // U with D already applied.
  DenseMatrix scaled_U() const { return U * d.cast<Scalar>().asDiagonal(); }

  static RecycleSubspace none(Index n) { return {DenseMatrix(n, 0), DenseMatrix(n, 0), RealVector(0)}; }
  // D = I.
  static RecycleSubspace from(DenseMatrix u, DenseMatrix c);
};

enum class DPolicy { Identity, UnitColumns };

DenseMatrix choose_D(const DenseMatrix& U, DPolicy policy);

// Vhat = [U D, V_j], What = [C, V_j], G = blockdiag(D, H_j). Satisfies
// (sigma I - A) Vhat = What (sigma I - G) + R_sigma with
// R_sigma = [sigma (U D - C), -h_{j+1,j} v_{j+1} e_j^T].
struct AugmentedQuantities {
  DenseMatrix Vhat;
  DenseMatrix What;
  DenseMatrix G;     // (k+j) x (k+j)
  DenseMatrix Gbar;  // (k+j+1) x (k+j)
  DenseMatrix VW;    // Vhat^H What
  DenseMatrix VUmC;  // Vhat^H (U D - C)
  Vector Vv;         // -h_{j+1,j} Vhat^H v_{j+1}
  Vector Vb;         // Vhat^H b
  Index k = 0;
  Index j = 0;

  DenseMatrix R(Scalar sigma, const Vector& v_next) const;
  // Vhat^H R_sigma, assembled from the cached blocks.
  DenseMatrix VR(Scalar sigma) const;
};

AugmentedQuantities augment(const ArnoldiDecomposition& dec, const RecycleSubspace& rec);

// Coefficient multiplying the resolvent at node l: w_l f(z_l) on a contour,
// w_l alone for a Stieltjes rule.
Scalar node_coefficient(const FunctionSpec& fun, const QuadratureRule& rule, Index l);

Vector arnoldi_direct(const ArnoldiDecomposition& dec, const FunctionSpec& fun);
Vector arnoldi_quad(const ArnoldiDecomposition& dec, const FunctionSpec& fun, const QuadratureRule& rule);

Vector rfom_v1(const ArnoldiDecomposition& dec, const RecycleSubspace& rec, const FunctionSpec& fun,
               const QuadratureRule& rule);
Vector rfom_v2(const ArnoldiDecomposition& dec, const RecycleSubspace& rec, const FunctionSpec& fun,
               const QuadratureRule& rule);
Vector rfom_v3(const ArnoldiDecomposition& dec, const RecycleSubspace& rec, const FunctionSpec& fun,
               const QuadratureRule& rule);

// Replaces U by an orthonormal basis of its component orthogonal to span(V_j).
// span([U V_j]) is unchanged, so every engine returns the same approximation,
// but Vhat^H What stays well conditioned when U nearly lies in the Krylov space.
// Directions of U inside span(V_j) are dropped. C is recomputed with fresh
// operator applications and D is reset to I.
RecycleSubspace orthogonalize_against_krylov(const ArnoldiDecomposition& dec, const RecycleSubspace& rec,
                                             const LinearOperator& op);

}  // namespace rfom
