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

#include "rfom/recycling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <Eigen/QR>

namespace rfom {

HarmonicPencil harmonic_pencil(const ArnoldiDecomposition& dec, const RecycleSubspace& rec) {
  const AugmentedQuantities aq = augment(dec, rec);
  const Index n = dec.V.rows();
  DenseMatrix av(n, aq.k + aq.j);
  av << rec.C * rec.D(), dec.V * dec.Hbar;
  return {av.adjoint() * av, av.adjoint() * aq.Vhat, aq.Vhat};
}

std::vector<HarmonicRitzPair> harmonic_ritz_pairs(const HarmonicPencil& pencil) {
  const EigenPairs eig = generalized_eig(pencil.P, pencil.Q);
  std::vector<Index> order(static_cast<std::size_t>(eig.values.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return std::abs(eig.values(a)) < std::abs(eig.values(b)); });
  std::vector<HarmonicRitzPair> pairs;
  pairs.reserve(order.size());
  for (Index i : order) pairs.push_back({eig.values(i), eig.vectors.col(i)});
  return pairs;
}

RecycleSubspace harmonic_ritz_update(const ArnoldiDecomposition& dec, const RecycleSubspace& rec,
                                     const LinearOperator& op, Index k, std::vector<HarmonicRitzPair>* selected) {
  const Index n = dec.V.rows();
  if (k < 0 || k > rec.k() + dec.j) throw Error(ErrorKind::InvalidArgument, "k must lie in [0, k_old + j]");
  if (selected) selected->clear();
  if (k == 0) return RecycleSubspace::none(n);

  const HarmonicPencil pencil = harmonic_pencil(dec, rec);
  std::vector<HarmonicRitzPair> pairs = harmonic_ritz_pairs(pencil);
  pairs.resize(static_cast<std::size_t>(k));

  DenseMatrix u(n, k);
  for (Index i = 0; i < k; ++i) {
    u.col(i) = pencil.Vhat * pairs[static_cast<std::size_t>(i)].g;
    u.col(i) /= u.col(i).norm();
  }

  // Drop columns that are numerically dependent on earlier ones.
  Eigen::ColPivHouseholderQR<DenseMatrix> qr(u);
  qr.setThreshold(1e-10);
  const Index rank = qr.rank();
  if (rank < k) {
    std::vector<Index> keep;
    for (Index i = 0; i < rank; ++i) keep.push_back(qr.colsPermutation().indices()(i));
    std::sort(keep.begin(), keep.end());
    DenseMatrix kept(n, rank);
    std::vector<HarmonicRitzPair> kept_pairs;
    for (Index i = 0; i < rank; ++i) {
      kept.col(i) = u.col(keep[static_cast<std::size_t>(i)]);
      kept_pairs.push_back(pairs[static_cast<std::size_t>(keep[static_cast<std::size_t>(i)])]);
    }
    u = std::move(kept);
    pairs = std::move(kept_pairs);
  }

  DenseMatrix c = op.apply_block(u);
  if (selected) *selected = std::move(pairs);
  return RecycleSubspace::from(std::move(u), std::move(c));
}

double subspace_angle(const DenseMatrix& U, const DenseMatrix& Z) {
  if (U.rows() != Z.rows()) throw Error(ErrorKind::InvalidArgument, "subspaces live in different spaces");
  const DenseMatrix qu = qr_orthonormalize(U).q;
  const DenseMatrix qz = qr_orthonormalize(Z).q;
  const RealVector cosines = svd_values(qz.adjoint() * qu);
  const double cmin = std::clamp(cosines(cosines.size() - 1), 0.0, 1.0);
  // acos loses all accuracy for tiny angles; use the sine of the part of U
  // outside span(Z) there instead.
  if (cmin > 0.9) {
    const DenseMatrix outside = qu - qz * (qz.adjoint() * qu);
    const double smax = std::clamp(svd_values(outside)(0), 0.0, 1.0);
    return std::asin(smax);
  }
  return std::acos(cmin);
}

}  // namespace rfom
