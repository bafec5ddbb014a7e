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

#include "rfom/core.hpp"

namespace rfom {

struct CircleContour {
  Scalar center;
  double radius = 1.0;
};

enum class QuadratureKind { Contour, Stieltjes };

// sum_l weights[l] * g(nodes[l]) approximates the integral. Contour weights
// include 1/(2 pi i) and the Jacobian; Stieltjes weights already carry the
// density of the integral representation, so the integrand is only the resolvent.
struct QuadratureRule {
  std::vector<Scalar> nodes;
  std::vector<Scalar> weights;
  QuadratureKind kind = QuadratureKind::Contour;

  Index size() const { return static_cast<Index>(nodes.size()); }
};

QuadratureRule trapezoid_contour(const CircleContour& contour, Index n_quad);

// Nodes on the negative real axis with sum_l w_l / (s_l - z) ~ z^{-1/2}.
QuadratureRule stieltjes_invsqrt(Index n_quad);

// Gauss-Legendre nodes and weights on [-1, 1], nodes ascending.
struct GaussLegendre {
  RealVector nodes;
  RealVector weights;
};
GaussLegendre gauss_legendre(Index n);

// Centroid-centred circle through the farthest estimate, inflated by (1 + margin).
CircleContour suggest_contour(const std::vector<Scalar>& estimates, double margin);

// Circle around the estimates' bounding box midpoint c whose radius is the
// geometric mean of the enclosing radius R and the distance d from c to the
// singularity, so both gaps shrink at the same rate. R is first inflated by
// (1 + margin). Throws InvalidArgument if the singularity cannot be avoided.
CircleContour balanced_contour(const std::vector<Scalar>& estimates, Scalar singularity, double margin = 0.0);

}  // namespace rfom
