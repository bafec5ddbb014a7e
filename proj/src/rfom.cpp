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

#include "rfom/rfom.hpp"

#include <Eigen/SVD>

namespace rfom {

namespace {

// LU that reports a singular factor as the given error kind.
LuFactor factor(const DenseMatrix& m, ErrorKind kind, const char* what, Scalar node) {
  try {
    return LuFactor(m);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SingularMatrix) throw;
    throw Error(kind, std::string(what) + " singular at node (" + std::to_string(node.real()) + ", " +
                          std::to_string(node.imag()) + ")");
  }
}

void check_inputs(const ArnoldiDecomposition& dec, const RecycleSubspace& rec) {
  if (rec.U.rows() != dec.V.rows() || rec.C.rows() != dec.V.rows() || rec.C.cols() != rec.U.cols() ||
      rec.d.size() != rec.U.cols()) {
    throw Error(ErrorKind::InvalidArgument, "recycle subspace does not match the Krylov basis");
  }
}

DenseMatrix shifted_hessenberg(const ArnoldiDecomposition& dec, Scalar z) {
  DenseMatrix m = -dec.Hj();
  m.diagonal().array() += z;
  return m;
}

}  // namespace

RecycleSubspace RecycleSubspace::from(DenseMatrix u, DenseMatrix c) {
  const Index k = u.cols();
  return {std::move(u), std::move(c), RealVector::Ones(k)};
}

DenseMatrix choose_D(const DenseMatrix& U, DPolicy policy) {
  const Index k = U.cols();
  if (policy == DPolicy::Identity) return DenseMatrix::Identity(k, k);
  DenseMatrix d = DenseMatrix::Zero(k, k);
  const double largest = k == 0 ? 0.0 : U.colwise().norm().maxCoeff();
  for (Index i = 0; i < k; ++i) {
    const double nrm = U.col(i).norm();
    if (!(nrm > 1e-12 * largest)) throw Error(ErrorKind::RankDeficient, "column " + std::to_string(i) + " is zero");
    d(i, i) = 1.0 / nrm;
  }
  return d;
}

AugmentedQuantities augment(const ArnoldiDecomposition& dec, const RecycleSubspace& rec) {
  check_inputs(dec, rec);
  AugmentedQuantities aq;
  const Index n = dec.V.rows();
  const Index k = rec.k();
  const Index j = dec.j;
  aq.k = k;
  aq.j = j;
  const DenseMatrix us = rec.scaled_U();
  aq.Vhat.resize(n, k + j);
  aq.Vhat << us, dec.Vj();
  aq.What.resize(n, k + j);
  aq.What << rec.C, dec.Vj();
  aq.G = DenseMatrix::Zero(k + j, k + j);
  aq.G.topLeftCorner(k, k) = rec.D();
  aq.G.bottomRightCorner(j, j) = dec.Hj();
  aq.Gbar = DenseMatrix::Zero(k + j + 1, k + j);
  aq.Gbar.topLeftCorner(k, k) = rec.D();
  aq.Gbar.bottomRightCorner(j + 1, j) = dec.Hbar;
  aq.VW = aq.Vhat.adjoint() * aq.What;
  aq.VUmC = aq.Vhat.adjoint() * (us - rec.C);
  aq.Vv = -dec.h_next() * (aq.Vhat.adjoint() * dec.v_next());
  aq.Vb = dec.beta * (aq.Vhat.adjoint() * dec.V.col(0));
  return aq;
}

DenseMatrix AugmentedQuantities::R(Scalar sigma, const Vector& v_next) const {
  const Index n = Vhat.rows();
  DenseMatrix r = DenseMatrix::Zero(n, k + j);
  r.leftCols(k) = sigma * (Vhat.leftCols(k) - What.leftCols(k));
  r.col(k + j - 1) += -Gbar(k + j, k + j - 1) * v_next;
  return r;
}

DenseMatrix AugmentedQuantities::VR(Scalar sigma) const {
  DenseMatrix r = DenseMatrix::Zero(k + j, k + j);
  r.leftCols(k) = sigma * VUmC;
  r.col(k + j - 1) += Vv;
  return r;
}

Scalar node_coefficient(const FunctionSpec& fun, const QuadratureRule& rule, Index l) {
  const Scalar w = rule.weights[static_cast<std::size_t>(l)];
  if (rule.kind == QuadratureKind::Stieltjes) return w;
  return w * fun.scalar_f(rule.nodes[static_cast<std::size_t>(l)]);
}

Vector arnoldi_direct(const ArnoldiDecomposition& dec, const FunctionSpec& fun) {
  const DenseMatrix fh = fun.dense_f(dec.Hj());
  return dec.beta * (dec.Vj() * fh.col(0));
}

Vector arnoldi_quad(const ArnoldiDecomposition& dec, const FunctionSpec& fun, const QuadratureRule& rule) {
  const Index j = dec.j;
  Vector e1 = Vector::Zero(j);
  e1(0) = dec.beta;
  Vector t = Vector::Zero(j);
  for (Index l = 0; l < rule.size(); ++l) {
    const Scalar z = rule.nodes[static_cast<std::size_t>(l)];
    const Scalar mu = node_coefficient(fun, rule, l);
    t += mu * factor(shifted_hessenberg(dec, z), ErrorKind::SingularShift, "z I - H_j", z).solve(e1);
  }
  return dec.Vj() * t;
}

Vector rfom_v1(const ArnoldiDecomposition& dec, const RecycleSubspace& rec, const FunctionSpec& fun,
               const QuadratureRule& rule) {
  check_inputs(dec, rec);
  const Index j = dec.j;
  const Index k = rec.k();
  const auto vj = dec.Vj();
  const auto vj1 = dec.V.leftCols(j + 1);

  // One-time products.
  const DenseMatrix uu = rec.U.adjoint() * rec.U;
  const DenseMatrix uc = rec.U.adjoint() * rec.C;
  const DenseMatrix vu = vj.adjoint() * rec.U;
  const DenseMatrix vc = vj.adjoint() * rec.C;
  const DenseMatrix m = rec.U.adjoint() * vj1;
  const Vector ub = dec.beta * m.col(0);

  Vector e1 = Vector::Zero(j);
  e1(0) = dec.beta;
  const DenseMatrix ibar = DenseMatrix::Identity(j + 1, j);
  Vector t1 = Vector::Zero(j);
  Vector t2 = Vector::Zero(k);

  for (Index l = 0; l < rule.size(); ++l) {
    const Scalar z = rule.nodes[static_cast<std::size_t>(l)];
    const Scalar mu = node_coefficient(fun, rule, l);
    if (k == 0) {
      t1 += mu * factor(shifted_hessenberg(dec, z), ErrorKind::SingularShift, "z I - H_j", z).solve(e1);
      continue;
    }
    const LuFactor lz = factor(z * uu - uc, ErrorKind::SingularProjector, "U^H (z I - A) U", z);
    const DenseMatrix kz = z * vu - vc;
    const DenseMatrix rz = m * (z * ibar - dec.Hbar);
    const DenseMatrix s = lz.solve(rz);
    const DenseMatrix tz = shifted_hessenberg(dec, z) - kz * s;
    const Vector rhs = e1 - kz * lz.solve(ub);
    const Vector y = factor(tz, ErrorKind::SingularShift, "projected shifted system", z).solve(rhs);
    t1 += mu * y;
    t2 += mu * lz.solve(Vector(ub - rz * y));
  }
  Vector out = vj * t1;
  if (k > 0) out += rec.U * t2;
  return out;
}

Vector rfom_v2(const ArnoldiDecomposition& dec, const RecycleSubspace& rec, const FunctionSpec& fun,
               const QuadratureRule& rule) {
  const AugmentedQuantities aq = augment(dec, rec);
  const Index s = aq.k + aq.j;
  const DenseMatrix vwg = aq.VW * aq.G;
  Vector t = Vector::Zero(s);
  for (Index l = 0; l < rule.size(); ++l) {
    const Scalar z = rule.nodes[static_cast<std::size_t>(l)];
    const Scalar mu = node_coefficient(fun, rule, l);
    const DenseMatrix sys = z * aq.VW - vwg + aq.VR(z);
    t += mu * factor(sys, ErrorKind::SingularSystem, "augmented shifted system", z).solve(aq.Vb);
  }
  return aq.Vhat * t;
}

Vector rfom_v3(const ArnoldiDecomposition& dec, const RecycleSubspace& rec, const FunctionSpec& fun,
               const QuadratureRule& rule) {
  const AugmentedQuantities aq = augment(dec, rec);
  const Index s = aq.k + aq.j;

  // f(G) blockwise, since G = blockdiag(D, H_j).
  DenseMatrix fg = DenseMatrix::Zero(s, s);
  if (aq.k > 0) fg.topLeftCorner(aq.k, aq.k) = fun.dense_f(aq.G.topLeftCorner(aq.k, aq.k));
  fg.bottomRightCorner(aq.j, aq.j) = fun.dense_f(aq.G.bottomRightCorner(aq.j, aq.j));

  const Scalar zero{0.0, 0.0};
  const LuFactor vw = factor(aq.VW, ErrorKind::SingularSystem, "Vhat^H What", zero);
  Vector out = aq.Vhat * (fg * vw.solve(aq.Vb));

  // R_z has nonzero columns only at S = {0..k-1, s-1}. With R_S those columns
  // and Z = Gz^{-1} R_S, the correction Gz^{-1} (I + R Gz^{-1})^{-1} R Gz^{-1} Vb
  // collapses to Z (I + Z_S)^{-1} x_S, where x = Gz^{-1} Vb and Z_S, x_S are
  // the rows in S. I + Z_S is singular exactly when I + R Gz^{-1} is.
  const Index m = aq.k + 1;
  const DenseMatrix vwg = aq.VW * aq.G;
  DenseMatrix rs = DenseMatrix::Zero(s, m);
  rs.rightCols(1) = aq.Vv;
  auto rows_s = [&](const auto& a) {
    DenseMatrix out(m, a.cols());
    out.topRows(aq.k) = a.topRows(aq.k);
    out.bottomRows(1) = a.bottomRows(1);
    return out;
  };
  Vector t = Vector::Zero(s);
  for (Index l = 0; l < rule.size(); ++l) {
    const Scalar z = rule.nodes[static_cast<std::size_t>(l)];
    const Scalar mu = node_coefficient(fun, rule, l);
    const LuFactor gz = factor(z * aq.VW - vwg, ErrorKind::SingularSystem, "Vhat^H What (z I - G)", z);
    rs.leftCols(aq.k) = z * aq.VUmC;
    const Vector x = gz.solve(aq.Vb);
    const DenseMatrix zs = gz.solve(rs);
    const DenseMatrix small = DenseMatrix::Identity(m, m) + rows_s(zs);
    const Vector xs = rows_s(x);
    t += mu * (zs * factor(small, ErrorKind::SingularSystem, "I + R G_z^{-1}", z).solve(xs));
  }
  out -= aq.Vhat * t;
  return out;
}

RecycleSubspace orthogonalize_against_krylov(const ArnoldiDecomposition& dec, const RecycleSubspace& rec,
                                             const LinearOperator& op) {
  check_inputs(dec, rec);
  const Index n = dec.V.rows();
  if (rec.empty()) return RecycleSubspace::none(n);
  const auto vj = dec.Vj();
  DenseMatrix perp = rec.U;
  for (int pass = 0; pass < 2; ++pass) perp -= vj * (vj.adjoint() * perp);
  Eigen::JacobiSVD<DenseMatrix> svd(perp, Eigen::ComputeThinU);
  const RealVector sv = svd.singularValues();
  const double scale = rec.U.colwise().norm().maxCoeff();
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > 1e-12 * scale) ++rank;
  DenseMatrix u = svd.matrixU().leftCols(rank);
  // One more pass keeps u orthogonal to V_j at machine precision.
  u -= vj * (vj.adjoint() * u);
  u = qr_orthonormalize(u).q;
  DenseMatrix c = op.apply_block(u);
  return RecycleSubspace::from(std::move(u), std::move(c));
}

}  // namespace rfom
