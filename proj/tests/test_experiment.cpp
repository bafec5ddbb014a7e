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
#include <filesystem>
#include <fstream>
#include <regex>

#include "doctest.h"
#include "rfom/experiment.hpp"

using namespace rfom;

namespace {

ExperimentConfig small_laplacian() {
  return parse_config(R"(
    # 64 x 64 Laplacian, inverse
    problem = laplacian2d
    m = 8
    function = inverse
    j = 30
    k = 0
    n_quad = 500
    engines = arnoldi, arnoldi_q
    sequence_length = 3
    seed = 5
  )");
}

std::string strip_wall_time(const std::string& csv) {
  // wall_ms is the ninth column.
  return std::regex_replace(csv, std::regex(R"(,[0-9.]+,(ok|ok_gap|[A-Za-z]+)\n)"), ",_,$1\n");
}

}  // namespace

TEST_CASE("config: parsing, comments, overrides, and errors") {
  ExperimentConfig cfg = small_laplacian();
  CHECK(cfg.m == 8);
  CHECK(cfg.engines == std::vector<std::string>{"arnoldi", "arnoldi_q"});
  apply_setting(cfg, "contour_center", "2.5, -1");
  apply_setting(cfg, "contour_radius", "3");
  CHECK(*cfg.contour_center == Scalar(2.5, -1.0));
  CHECK(*cfg.contour_radius == 3.0);
  apply_setting(cfg, "quadrature", "stieltjes");
  CHECK_THROWS_AS(validate(cfg), Error);  // inverse has no Stieltjes rule here

  for (const char* bad : {"colour = red", "j = many", "engines = v9", "no equals sign", "function = cosh"}) {
    try {
      ExperimentConfig c = parse_config(bad);
      validate(c);
      FAIL("expected a configuration error for: " << bad);
    } catch (const Error& e) {
      CHECK((e.kind() == ErrorKind::ConfigError || e.kind() == ErrorKind::UnknownFunction));
    }
  }
}

TEST_CASE("run: direct and quadrature Arnoldi agree on a fixed Laplacian") {
  // A circle that separates 0 from [0.24, 7.76] converges like 0.97^n: 500
  // nodes give about 2e-7, so the 1e-10 agreement is checked at 2000 nodes.
  ExperimentConfig cfg = small_laplacian();
  const RunReport coarse = run_experiment(cfg);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(std::abs(coarse.rows_for("arnoldi")[i].rel_error - coarse.rows_for("arnoldi_q")[i].rel_error) <= 1e-6);
  }
  apply_setting(cfg, "n_quad", "2000");
  const RunReport report = run_experiment(cfg);
  REQUIRE(report.rows.size() == 6);
  CHECK_FALSE(report.has_failures());
  const auto a = report.rows_for("arnoldi");
  const auto q = report.rows_for("arnoldi_q");
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(a[i].problem_index == static_cast<Index>(i + 1));
    CHECK(a[i].status == "ok");
    CHECK(std::abs(a[i].rel_error - q[i].rel_error) <= 1e-10);
    // Real problem: the imaginary part is pure quadrature noise.
    CHECK(q[i].imag_residue < 1e-10);
    CHECK(std::isnan(a[i].subspace_angle));
  }
}

TEST_CASE("run: a single problem without recycling yields one row per engine") {
  ExperimentConfig cfg = small_laplacian();
  apply_setting(cfg, "sequence_length", "1");
  apply_setting(cfg, "engines", "arnoldi,arnoldi_q,v1,v2,v3");
  const RunReport report = run_experiment(cfg);
  CHECK(report.rows.size() == 5);
  for (const auto& r : report.rows) CHECK(r.k == 0);
}

TEST_CASE("run: CSV is deterministic apart from wall time") {
  ExperimentConfig cfg = small_laplacian();
  apply_setting(cfg, "k", "5");
  apply_setting(cfg, "engines", "arnoldi,v1,v2");
  apply_setting(cfg, "epsilon", "1e-3");
  apply_setting(cfg, "track_angle", "true");
  const std::string a = to_csv(run_experiment(cfg));
  const std::string b = to_csv(run_experiment(cfg));
  CHECK(a.rfind(kCsvHeader, 0) == 0);
  CHECK(strip_wall_time(a) == strip_wall_time(b));
  CHECK(strip_wall_time(a) != a);
}

TEST_CASE("run: recycling rows carry k and the subspace angle") {
  ExperimentConfig cfg = small_laplacian();
  apply_setting(cfg, "k", "4");
  apply_setting(cfg, "engines", "arnoldi,v2");
  apply_setting(cfg, "track_angle", "yes");
  const RunReport report = run_experiment(cfg);
  const auto v2 = report.rows_for("v2");
  REQUIRE(v2.size() == 3);
  CHECK(v2[0].k == 0);
  CHECK(v2[1].k == 4);
  for (const auto& r : v2) CHECK(r.subspace_angle >= 0.0);
}

TEST_CASE("run: an engine failure leaves the other rows intact") {
  // A one-node "contour" at z = -2 puts log on its branch cut, so every
  // quadrature engine fails while the direct engine succeeds.
  ExperimentConfig cfg = small_laplacian();
  apply_setting(cfg, "function", "log");
  apply_setting(cfg, "n_quad", "1");
  apply_setting(cfg, "contour_center", "-3");
  apply_setting(cfg, "contour_radius", "1");
  apply_setting(cfg, "engines", "arnoldi_q,arnoldi,v2");
  const RunReport report = run_experiment(cfg);
  REQUIRE(report.rows.size() == 9);
  CHECK(report.has_failures());
  for (const auto& r : report.rows_for("arnoldi")) {
    CHECK(r.status == "ok");
    CHECK(r.rel_error < 1e-3);
  }
  for (const auto& r : report.rows_for("arnoldi_q")) {
    CHECK(r.status == "FunctionUndefined");
    CHECK(std::isnan(r.rel_error));
  }
  CHECK(report.rows_for("v2").size() == 3);
}

TEST_CASE("run: oracle failures become rows and the sequence continues") {
  ExperimentConfig cfg = parse_config(R"(
    problem = laplacian2d
    m = 6
    shift = -1.0        # lambda_min of the 36-point Laplacian is about 0.40
    function = invsqrt
    quadrature = stieltjes
    n_quad = 20
    j = 10
    engines = arnoldi, v2
    sequence_length = 2
  )");
  const RunReport report = run_experiment(cfg);
  const auto oracle = report.rows_for("oracle");
  REQUIRE(oracle.size() == 2);
  CHECK(oracle[0].status == "FunctionUndefined");
  CHECK(std::isnan(oracle[0].rel_error));
  CHECK(report.has_failures());
  // Engines still produced rows for both problems.
  CHECK(report.rows_for("v2").size() == 2);
}

TEST_CASE("run: without an oracle errors are gaps to the first engine") {
  ExperimentConfig cfg = small_laplacian();
  apply_setting(cfg, "oracle", "off");
  apply_setting(cfg, "sequence_length", "1");
  apply_setting(cfg, "n_quad", "2000");
  const RunReport report = run_experiment(cfg);
  REQUIRE(report.rows.size() == 2);
  CHECK(report.rows[0].status == "ok_gap");
  CHECK(report.rows[0].rel_error == 0.0);
  CHECK(report.rows[1].rel_error <= 1e-10);
}

TEST_CASE("sweep: one row per (n_quad, engine) and stagnation at the Arnoldi error") {
  ExperimentConfig cfg = small_laplacian();
  apply_setting(cfg, "function", "exp");
  const RunReport report = sweep_quadrature(cfg, {8, 16, 32, 64, 128});
  REQUIRE(report.rows.size() == 10);
  const auto q = report.rows_for("arnoldi_q");
  const auto a = report.rows_for("arnoldi");
  for (std::size_t i = 0; i < q.size(); ++i) CHECK(q[i].n_quad == a[i].n_quad);
  CHECK(q.front().rel_error > q.back().rel_error);
  CHECK(std::abs(q.back().rel_error - a.back().rel_error) <= 1e-12);
}

TEST_CASE("sign via the inverse square root of A^2") {
  ExperimentConfig cfg = parse_config(R"(
    problem = laplacian2d
    m = 6
    shift = -2.0
    function = sign_via_invsqrt
    quadrature = stieltjes
    n_quad = 80
    j = 30
    engines = arnoldi, arnoldi_q
  )");
  const RunReport report = run_experiment(cfg);
  REQUIRE(report.rows.size() == 2);
  for (const auto& r : report.rows) {
    CHECK(r.status == "ok");
    CHECK(r.rel_error < 1e-3);
  }
}

TEST_CASE("CSV file output") {
  ExperimentConfig cfg = small_laplacian();
  const auto path = std::filesystem::temp_directory_path() / "rfom_test_report.csv";
  cfg.output = path.string();
  run_experiment(cfg);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "problem_index,engine,j,k,n_quad,rel_error,imag_residue,subspace_angle,wall_ms,status");
}
