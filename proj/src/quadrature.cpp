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

#include "rfom/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

namespace rfom {

QuadratureRule trapezoid_contour(const CircleContour& contour, Index n_quad) {
  if (n_quad < 1) throw Error(ErrorKind::InvalidArgument, "n_quad must be positive");
  if (!(contour.radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "contour radius must be positive");
  QuadratureRule rule;
  rule.kind = QuadratureKind::Contour;
  rule.nodes.reserve(n_quad);
  rule.weights.reserve(n_quad);
  for (Index l = 0; l < n_quad; ++l) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(l) / static_cast<double>(n_quad);
    const Scalar arm = contour.radius * std::polar(1.0, theta);
    rule.nodes.push_back(contour.center + arm);
    rule.weights.push_back(arm / static_cast<double>(n_quad));
  }
  return rule;
}

namespace {

// Value of P_n and its derivative at x, by the three-term recurrence.
std::pair<double, double> legendre(Index n, double x) {
  double p0 = 1.0;
  double p1 = x;
  for (Index k = 2; k <= n; ++k) {
    const double kd = static_cast<double>(k);
    const double p2 = ((2.0 * kd - 1.0) * x * p1 - (kd - 1.0) * p0) / kd;
    p0 = p1;
    p1 = p2;
  }
  const double nd = static_cast<double>(n);
  return {p1, nd * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace

GaussLegendre gauss_legendre(Index n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "Gauss-Legendre needs n >= 1");
  GaussLegendre gl{RealVector(n), RealVector(n)};
  const double nd = static_cast<double>(n);
  for (Index i = 0; i < (n + 1) / 2; ++i) {
    // Tricomi's initial guess, then Newton.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (nd + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(n, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    gl.nodes(i) = -x;
    gl.nodes(n - 1 - i) = x;
    gl.weights(i) = w;
    gl.weights(n - 1 - i) = w;
  }
  if (n % 2 == 1) gl.nodes(n / 2) = 0.0;
  return gl;
}

QuadratureRule stieltjes_invsqrt(Index n_quad) {
  if (n_quad < 1) throw Error(ErrorKind::InvalidArgument, "n_quad must be positive");
  const GaussLegendre gl = gauss_legendre(n_quad);
  QuadratureRule rule;
  rule.kind = QuadratureKind::Stieltjes;
  for (Index l = 0; l < n_quad; ++l) {
    const double u = gl.nodes(l);
    const double t = (1.0 - u) / (1.0 + u);
    rule.nodes.emplace_back(-t * t, 0.0);
    rule.weights.emplace_back(-(2.0 / std::numbers::pi) * gl.weights(l) * 2.0 / ((1.0 + u) * (1.0 + u)), 0.0);
  }
  return rule;
}

CircleContour suggest_contour(const std::vector<Scalar>& estimates, double margin) {
  if (estimates.empty()) throw Error(ErrorKind::InvalidArgument, "no spectrum estimates");
  Scalar center{0.0, 0.0};
  for (const Scalar& z : estimates) center += z;
  center /= static_cast<double>(estimates.size());
  double reach = 0.0;
  for (const Scalar& z : estimates) reach = std::max(reach, std::abs(z - center));
  if (reach == 0.0) return {center, margin * std::max(std::abs(center), 1.0)};
  return {center, (1.0 + margin) * reach};
}

CircleContour balanced_contour(const std::vector<Scalar>& estimates, Scalar singularity, double margin) {
  if (estimates.empty()) throw Error(ErrorKind::InvalidArgument, "no spectrum estimates");
  double re_lo = estimates.front().real(), re_hi = re_lo;
  double im_lo = estimates.front().imag(), im_hi = im_lo;
  for (const Scalar& z : estimates) {
    re_lo = std::min(re_lo, z.real());
    re_hi = std::max(re_hi, z.real());
    im_lo = std::min(im_lo, z.imag());
    im_hi = std::max(im_hi, z.imag());
  }
  const Scalar center{0.5 * (re_lo + re_hi), 0.5 * (im_lo + im_hi)};
  double reach = 0.0;
  for (const Scalar& z : estimates) reach = std::max(reach, std::abs(z - center));
  reach *= 1.0 + margin;
  const double gap = std::abs(center - singularity);
  if (!(reach < gap)) {
    throw Error(ErrorKind::InvalidArgument, "no circle around the estimates avoids the singularity");
  }
  if (reach == 0.0) return {center, 0.5 * gap};
  return {center, std::sqrt(reach * gap)};
}

}  // namespace rfom
