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

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "rfom/quadrature.hpp"

using namespace rfom;

namespace {

template <class F>
Scalar integrate(const QuadratureRule& rule, F g) {
  Scalar sum{0.0, 0.0};
  for (Index l = 0; l < rule.size(); ++l) sum += rule.weights[l] * g(rule.nodes[l]);
  return sum;
}

}  // namespace

TEST_CASE("trapezoid: resolvent at the center integrates to one") {
  const CircleContour c{Scalar(1.5, -0.5), 2.0};
  for (Index n : {1, 2, 3, 7, 64}) {
    const QuadratureRule rule = trapezoid_contour(c, n);
    const Scalar v = integrate(rule, [&](Scalar z) { return 1.0 / (z - c.center); });
    CHECK(std::abs(v - 1.0) < 1e-15);
  }
}

TEST_CASE("trapezoid: node placement") {
  const QuadratureRule rule = trapezoid_contour({Scalar(2.0, 0.0), 3.0}, 4);
  CHECK(rule.kind == QuadratureKind::Contour);
  CHECK(std::abs(rule.nodes[0] - Scalar(5.0, 0.0)) < 1e-15);
  CHECK(std::abs(rule.nodes[1] - Scalar(2.0, 3.0)) < 1e-15);
  CHECK(std::abs(rule.weights[1] - Scalar(0.0, 0.75)) < 1e-15);
}

TEST_CASE("trapezoid: exp(z)/z converges geometrically to 1") {
  const CircleContour unit{Scalar(0.0, 0.0), 1.0};
  double previous = 1.0;
  for (Index n : {4, 8, 16, 32}) {
    const QuadratureRule rule = trapezoid_contour(unit, n);
    const double err = std::abs(integrate(rule, [](Scalar z) { return std::exp(z) / z; }) - 1.0);
    if (previous > 1e-13) CHECK(err <= previous / 10.0);
    previous = err;
  }
  CHECK(previous <= 1e-13);
}

TEST_CASE("trapezoid: pole outside the circle gives zero") {
  const QuadratureRule rule = trapezoid_contour({Scalar(0.0, 0.0), 1.0}, 64);
  CHECK(std::abs(integrate(rule, [](Scalar z) { return 1.0 / (z - 3.0); })) < 1e-15);
}

TEST_CASE("trapezoid: weights sum to zero") {
  for (Index n : {2, 5, 100}) {
    const QuadratureRule rule = trapezoid_contour({Scalar(4.0, 1.0), 0.7}, n);
    Scalar sum{0.0, 0.0};
    for (const Scalar& w : rule.weights) sum += w;
    CHECK(std::abs(sum) < 1e-15);
  }
}

TEST_CASE("trapezoid: invalid arguments") {
  CHECK_THROWS_AS(trapezoid_contour({Scalar(0.0), 0.0}, 4), Error);
  CHECK_THROWS_AS(trapezoid_contour({Scalar(0.0), 1.0}, 0), Error);
}

TEST_CASE("gauss_legendre: integrates polynomials of degree 2n-1 exactly") {
  for (Index n : {1, 2, 5, 20, 64}) {
    const GaussLegendre gl = gauss_legendre(n);
    CHECK(std::abs(gl.weights.sum() - 2.0) < 1e-13);
    for (Index p = 0; p <= 2 * n - 1; ++p) {
      double q = 0.0;
      for (Index i = 0; i < n; ++i) q += gl.weights(i) * std::pow(gl.nodes(i), static_cast<double>(p));
      const double exact = p % 2 == 1 ? 0.0 : 2.0 / static_cast<double>(p + 1);
      CHECK(std::abs(q - exact) < 1e-13);
    }
    for (Index i = 1; i < n; ++i) CHECK(gl.nodes(i) > gl.nodes(i - 1));
  }
}

TEST_CASE("stieltjes: scalar inverse square roots at 64 nodes") {
  const QuadratureRule rule = stieltjes_invsqrt(64);
  CHECK(rule.kind == QuadratureKind::Stieltjes);
  for (const Scalar& s : rule.nodes) CHECK(s.real() < 0.0);
  for (auto [z, expected] : {std::pair<double, double>{1.0, 1.0}, {4.0, 0.5}, {2.0, 0.7071067811865476}}) {
    const Scalar v = integrate(rule, [&](Scalar s) { return 1.0 / (s - z); });
    CHECK(std::abs(v - expected) / expected <= 1e-8);
  }
}

TEST_CASE("stieltjes: complex argument off the cut") {
  const QuadratureRule rule = stieltjes_invsqrt(64);
  const Scalar z(3.0, 2.0);
  const Scalar v = integrate(rule, [&](Scalar s) { return 1.0 / (s - z); });
  CHECK(std::abs(v - 1.0 / std::sqrt(z)) <= 1e-8);
}

TEST_CASE("suggest_contour: examples") {
  const CircleContour single = suggest_contour({Scalar(5.0, 0.0)}, 0.2);
  CHECK(std::abs(single.center - 5.0) < 1e-15);
  CHECK(std::abs(single.radius - 1.0) < 1e-15);
  const CircleContour tiny = suggest_contour({Scalar(0.1, 0.0)}, 0.2);
  CHECK(std::abs(tiny.radius - 0.2) < 1e-15);

  const CircleContour pair = suggest_contour({Scalar(1.0), Scalar(3.0)}, 0.1);
  CHECK(std::abs(pair.center - 2.0) < 1e-15);
  CHECK(std::abs(pair.radius - 1.1) < 1e-15);
}

TEST_CASE("balanced_contour: real interval with singularity at zero") {
  const CircleContour c = balanced_contour({Scalar(1.0), Scalar(3.0), Scalar(40.0)}, Scalar(0.0));
  CHECK(std::abs(c.center - 20.5) < 1e-14);
  CHECK(std::abs(c.radius - std::sqrt(20.5 * 19.5)) < 1e-12);
  CHECK(c.center.real() - c.radius > 0.0);
  CHECK(c.center.real() - c.radius < 1.0);
  CHECK_THROWS_AS(balanced_contour({Scalar(-1.0), Scalar(1.0)}, Scalar(0.0)), Error);
}
