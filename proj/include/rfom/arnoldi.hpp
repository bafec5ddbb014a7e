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

#include "rfom/core.hpp"
#include "rfom/operator.hpp"

namespace rfom {

// A V_j = V_{j+1} Hbar_j. After a breakdown j is the truncated dimension, the
// last row of Hbar is zero and so is the trailing column of V.
struct ArnoldiDecomposition {
  DenseMatrix V;     // n x (j+1)
  DenseMatrix Hbar;  // (j+1) x j
  Index j = 0;
  double beta = 0.0;
  bool breakdown = false;

  auto Vj() const { return V.leftCols(j); }
  auto Hj() const { return Hbar.topRows(j); }
  Scalar h_next() const { return Hbar(j, j - 1); }
  auto v_next() const { return V.col(j); }
};

// Classical Gram-Schmidt; with reorth a second full pass is made for every new vector.
ArnoldiDecomposition arnoldi(const LinearOperator& op, const Vector& b, Index j, bool reorth = true);

// FOM iterate for (sigma I - A) x = b: beta V_j (sigma I - H_j)^{-1} e_1.
Vector shifted_fom_solve(const ArnoldiDecomposition& dec, Scalar sigma);

}  // namespace rfom
