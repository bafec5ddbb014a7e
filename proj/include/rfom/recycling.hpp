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

#include <vector>

#include "rfom/rfom.hpp"

namespace rfom {

struct HarmonicRitzPair {
  Scalar theta;
  Vector g;  // coefficients in Vhat, length k + j
};

// The pencil P g = theta Q g with AV = [C D, V_{j+1} Hbar] = A Vhat,
// P = AV^H AV and Q = AV^H Vhat.
struct HarmonicPencil {
  DenseMatrix P;
  DenseMatrix Q;
  DenseMatrix Vhat;
};

HarmonicPencil harmonic_pencil(const ArnoldiDecomposition& dec, const RecycleSubspace& rec);

// All pairs, ordered by increasing |theta|.
std::vector<HarmonicRitzPair> harmonic_ritz_pairs(const HarmonicPencil& pencil);

// New subspace from the k harmonic Ritz vectors of smallest |theta|. Columns
// are normalized; numerically dependent columns are dropped, so the result
// may have fewer than k columns. If `selected` is given it receives the pairs used.
RecycleSubspace harmonic_ritz_update(const ArnoldiDecomposition& dec, const RecycleSubspace& rec,
                                     const LinearOperator& op, Index k,
                                     std::vector<HarmonicRitzPair>* selected = nullptr);

// Largest principal angle between span(U) and span(Z), in [0, pi/2].
double subspace_angle(const DenseMatrix& U, const DenseMatrix& Z);

}  // namespace rfom
