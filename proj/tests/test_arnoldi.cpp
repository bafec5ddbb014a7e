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

#include "doctest.h"
#include "helpers.hpp"
#include "rfom/arnoldi.hpp"

using namespace rfom;
using rfom::test::random_matrix;
using rfom::test::random_vector;

namespace {

double relation_residual(const DenseMatrix& a, const ArnoldiDecomposition& dec) {
  return (a * dec.Vj() - dec.V * dec.Hbar).norm();
}

DenseMatrix diagonal(const std::vector<double>& d) {
  DenseMatrix m = DenseMatrix::Zero(static_cast<Index>(d.size()), static_cast<Index>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) m(static_cast<Index>(i), static_cast<Index>(i)) = d[i];
  return m;
}

}  // namespace

TEST_CASE("arnoldi: identity operator breaks down after one step") {
  const DenseMatrix id = DenseMatrix::Identity(5, 5);
  const ArnoldiDecomposition dec = arnoldi(make_operator(id), random_vector(5, 1), 3);
  CHECK(dec.breakdown);
  CHECK(dec.j == 1);
  CHECK(std::abs(dec.Hj()(0, 0) - 1.0) < 1e-14);
  CHECK(dec.h_next() == Scalar(0.0));
  CHECK(dec.V.cols() == 2);
  CHECK(dec.V.col(1).norm() == 0.0);
}

TEST_CASE("arnoldi: Hermitian operator gives a real symmetric tridiagonal H") {
  const DenseMatrix a = diagonal({1, 2, 3, 4});
  const Vector b = Vector::Constant(4, 0.5);
  const ArnoldiDecomposition dec = arnoldi(make_operator(a), b, 3);
  const DenseMatrix h = dec.Hj();
  CHECK(h.imag().norm() < 1e-12);
  CHECK((h - h.transpose()).norm() < 1e-12);
  for (Index r = 0; r < 3; ++r) {
    for (Index c = 0; c < 3; ++c) {
      if (std::abs(r - c) > 1) CHECK(std::abs(h(r, c)) < 1e-12);
    }
  }
}

TEST_CASE("arnoldi: relation, orthonormality, first vector, Hessenberg structure") {
  const DenseMatrix a = random_matrix(100, 100, 3);
  const Vector b = random_vector(100, 4);
  const ArnoldiDecomposition dec = arnoldi(make_operator(a), b, 30);
  CHECK_FALSE(dec.breakdown);
  CHECK(relation_residual(a, dec) <= 1e-10 * dec.Hbar.norm());
  CHECK((dec.V.adjoint() * dec.V - DenseMatrix::Identity(31, 31)).norm() <= 1e-10);
  CHECK((dec.V.col(0) - b / b.norm()).norm() < 1e-14);
  CHECK(std::abs(dec.beta - b.norm()) < 1e-12 * b.norm());
  for (Index r = 0; r < 31; ++r) {
    for (Index c = 0; c < 30; ++c) {
      if (r > c + 1) CHECK(dec.Hbar(r, c) == Scalar(0.0));
    }
  }
}

TEST_CASE("arnoldi: reorthogonalization keeps orthogonality on a graded spectrum") {
  const Index n = 400;
  RealVector lambda(n);
  for (Index i = 0; i < n; ++i) lambda(i) = std::pow(10.0, 12.0 * static_cast<double>(i) / static_cast<double>(n - 1));
  const DenseMatrix a = rfom::test::hermitian_with_spectrum(lambda, 5);
  const Vector b = random_vector(n, 6);
  const ArnoldiDecomposition twice = arnoldi(make_operator(a), b, 100, true);
  const ArnoldiDecomposition once = arnoldi(make_operator(a), b, 100, false);
  const Index jt = twice.j + 1;
  const Index jo = once.j + 1;
  const double loss_twice = (twice.V.adjoint() * twice.V - DenseMatrix::Identity(jt, jt)).norm();
  const double loss_once = (once.V.adjoint() * once.V - DenseMatrix::Identity(jo, jo)).norm();
  CHECK(loss_twice <= 1e-12);
  CHECK(loss_once > 1e3 * loss_twice);
}

TEST_CASE("arnoldi: zero right-hand side and bad sizes") {
  const DenseMatrix a = random_matrix(6, 6, 1);
  try {
    arnoldi(make_operator(a), Vector::Zero(6), 2);
    FAIL("expected ZeroRhs");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ZeroRhs);
  }
  CHECK_THROWS_AS(arnoldi(make_operator(a), random_vector(6, 2), 6), Error);
  CHECK_THROWS_AS(arnoldi(make_operator(a), random_vector(6, 2), 0), Error);
}

TEST_CASE("shifted_fom_solve: full Krylov space reproduces the dense solve") {
  // j = n - 1 with an invariant subspace reached; use n = 12 and j = 11 plus breakdown tolerance.
  const Index n = 12;
  DenseMatrix a = random_matrix(n, n, 7);
  a.diagonal().array() += 8.0;
  const Vector b = random_vector(n, 8);
  // Embed in a larger operator so that j = n is admissible: blockdiag(A, 1) with rhs [b; 0].
  DenseMatrix big = DenseMatrix::Identity(n + 1, n + 1);
  big.topLeftCorner(n, n) = a;
  Vector bb = Vector::Zero(n + 1);
  bb.head(n) = b;
  const ArnoldiDecomposition dec = arnoldi(make_operator(big), bb, n);
  const Vector x = shifted_fom_solve(dec, 0.0);
  const Vector oracle = -lu_solve(big, bb);
  CHECK(rfom::test::rel_diff(x, oracle) <= 1e-8);
}

TEST_CASE("shifted_fom_solve: Galerkin orthogonality for a real shift outside the spectrum") {
  const DenseMatrix a = rfom::test::random_hermitian(60, 9);
  const double top = eig_hermitian(a).values.maxCoeff();
  const Vector b = random_vector(60, 10);
  const ArnoldiDecomposition dec = arnoldi(make_operator(a), b, 20);
  const Scalar sigma = top + 1.0;
  const Vector x = shifted_fom_solve(dec, sigma);
  const Vector r = b - (sigma * x - a * x);
  CHECK((dec.Vj().adjoint() * r).norm() <= 1e-10 * b.norm());
}

TEST_CASE("shifted_fom_solve: large shift behaves like b / sigma") {
  const DenseMatrix a = random_matrix(30, 30, 11);
  const Vector b = random_vector(30, 12);
  const ArnoldiDecomposition dec = arnoldi(make_operator(a), b, 10);
  const Vector x = shifted_fom_solve(dec, 1e8);
  CHECK(std::abs(x.norm() * 1e8 / b.norm() - 1.0) < 1e-6);
}

TEST_CASE("shifted_fom_solve: shift at an eigenvalue of H_j") {
  DenseMatrix a = DenseMatrix::Zero(4, 4);
  for (Index i = 0; i < 4; ++i) a(i, i) = static_cast<double>(i + 1);
  const ArnoldiDecomposition dec = arnoldi(make_operator(a), Vector::Constant(4, 0.5), 1);
  try {
    shifted_fom_solve(dec, dec.Hj()(0, 0));
    FAIL("expected SingularShift");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SingularShift);
  }
}

TEST_CASE("shift invariance: one basis serves every shifted operator") {
  const DenseMatrix a = random_matrix(50, 50, 13);
  const Vector b = random_vector(50, 14);
  const Index j = 15;
  const ArnoldiDecomposition dec = arnoldi(make_operator(a), b, j);
  for (Scalar sigma : {Scalar(3.0, 1.0), Scalar(-2.5, 0.0), Scalar(0.0, 7.0)}) {
    DenseMatrix shifted = -a;
    shifted.diagonal().array() += sigma;
    const ArnoldiDecomposition direct = arnoldi(make_operator(shifted), b, j);
    Vector e1 = Vector::Zero(j);
    e1(0) = direct.beta;
    const Vector fom = direct.Vj() * lu_solve(DenseMatrix(direct.Hj()), e1);
    CHECK(rfom::test::rel_diff(shifted_fom_solve(dec, sigma), fom) <= 1e-8);
  }
}
