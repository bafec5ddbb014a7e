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

#include "rfom/arnoldi.hpp"

namespace rfom {

ArnoldiDecomposition arnoldi(const LinearOperator& op, const Vector& b, Index j, bool reorth) {
  const Index n = op.dim;
  if (b.size() != n) throw Error(ErrorKind::InvalidArgument, "rhs length differs from operator dimension");
  if (j < 1 || j >= n) throw Error(ErrorKind::InvalidArgument, "Arnoldi needs 1 <= j < n");
  const double beta = b.norm();
  if (beta == 0.0) throw Error(ErrorKind::ZeroRhs, "right-hand side is zero");

  ArnoldiDecomposition dec;
  dec.beta = beta;
  dec.V = DenseMatrix::Zero(n, j + 1);
  dec.Hbar = DenseMatrix::Zero(j + 1, j);
  dec.V.col(0) = b / beta;

  double hmax = 0.0;
  Index steps = j;
  for (Index l = 0; l < j; ++l) {
    Vector w = op(dec.V.col(l));
    const auto basis = dec.V.leftCols(l + 1);
    for (int pass = 0; pass < (reorth ? 2 : 1); ++pass) {
      const Vector h = basis.adjoint() * w;
      w.noalias() -= basis * h;
      dec.Hbar.col(l).head(l + 1) += h;
    }
    hmax = std::max(hmax, dec.Hbar.col(l).head(l + 1).cwiseAbs().maxCoeff());
    const double hnext = w.norm();
    hmax = std::max(hmax, hnext);
    if (!(hnext > 1e-12 * hmax)) {
      dec.breakdown = true;
      steps = l + 1;
      break;
    }
    dec.Hbar(l + 1, l) = hnext;
    dec.V.col(l + 1) = w / hnext;
  }

  if (dec.breakdown) {
    dec.V.conservativeResize(Eigen::NoChange, steps + 1);
    dec.V.col(steps).setZero();
    dec.Hbar.conservativeResize(steps + 1, steps);
    dec.Hbar.row(steps).setZero();
  }
  dec.j = steps;
  return dec;
}

Vector shifted_fom_solve(const ArnoldiDecomposition& dec, Scalar sigma) {
  const Index j = dec.j;
  DenseMatrix shifted = -dec.Hj();
  shifted.diagonal().array() += sigma;
  Vector e1 = Vector::Zero(j);
  e1(0) = dec.beta;
  try {
    return dec.Vj() * LuFactor(shifted).solve(e1);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SingularMatrix) throw;
    throw Error(ErrorKind::SingularShift, "shift is an eigenvalue of H_j");
  }
}

}  // namespace rfom
