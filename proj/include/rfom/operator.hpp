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

#include <functional>
#include <memory>

#include <Eigen/SparseCore>

#include "rfom/core.hpp"

namespace rfom {

using SparseMatrix = Eigen::SparseMatrix<Scalar, Eigen::RowMajor>;

// A square operator known only through its action on vectors.
struct LinearOperator {
  Index dim = 0;
  std::function<Vector(const Vector&)> apply;

  Vector operator()(const Vector& x) const { return apply(x); }
  // Column-by-column application.
  DenseMatrix apply_block(const DenseMatrix& x) const;
};

// The operator keeps its own copy of the matrix.
LinearOperator make_operator(const SparseMatrix& a);
LinearOperator make_operator(const DenseMatrix& a);

bool is_real(const SparseMatrix& a);
bool is_hermitian(const SparseMatrix& a, double tol = 1e-12);

}  // namespace rfom
