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

#include "rfom/operator.hpp"

#include <cmath>

namespace rfom {

DenseMatrix LinearOperator::apply_block(const DenseMatrix& x) const {
  if (x.rows() != dim) throw Error(ErrorKind::InvalidArgument, "operator block size mismatch");
  DenseMatrix out(dim, x.cols());
  for (Index c = 0; c < x.cols(); ++c) out.col(c) = apply(x.col(c));
  return out;
}

LinearOperator make_operator(const SparseMatrix& a) {
  if (a.rows() != a.cols()) throw Error(ErrorKind::InvalidArgument, "operator must be square");
  auto held = std::make_shared<const SparseMatrix>(a);
  return LinearOperator{a.rows(), [held](const Vector& x) -> Vector {
                          if (x.size() != held->cols()) {
                            throw Error(ErrorKind::InvalidArgument, "operator applied to a vector of wrong length");
                          }
                          return *held * x;
                        }};
}

LinearOperator make_operator(const DenseMatrix& a) {
  if (a.rows() != a.cols()) throw Error(ErrorKind::InvalidArgument, "operator must be square");
  auto held = std::make_shared<const DenseMatrix>(a);
  return LinearOperator{a.rows(), [held](const Vector& x) -> Vector {
                          if (x.size() != held->cols()) {
                            throw Error(ErrorKind::InvalidArgument, "operator applied to a vector of wrong length");
                          }
                          return *held * x;
                        }};
}

bool is_real(const SparseMatrix& a) {
  for (Index r = 0; r < a.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(a, r); it; ++it) {
      if (it.value().imag() != 0.0) return false;
    }
  }
  return true;
}

bool is_hermitian(const SparseMatrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  const SparseMatrix diff = a - SparseMatrix(a.adjoint());
  return diff.norm() <= tol * a.norm();
}

}  // namespace rfom
