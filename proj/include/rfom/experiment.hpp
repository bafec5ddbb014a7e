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

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rfom/problems.hpp"
#include "rfom/quadrature.hpp"
#include "rfom/recycling.hpp"
#include "rfom/rfom.hpp"

namespace rfom {

enum class RecycleInit { Harmonic, OracleEigenvectors };
enum class BasisMode { Raw, Orthogonalized };

struct ExperimentConfig {
  // Problem.
  std::string problem = "laplacian2d";  // laplacian2d | convdiff2d | graded_hermitian | matrix_market
  Index m = 20;
  double convection = 0.0;
  double shift = 0.0;
  Index n = 400;
  double lambda_min = 1.0;
  double lambda_max = 40.0;
  double grading = 1.0;
  std::string matrix_file;  // relative paths resolve against $RFOM_DATA_DIR

  // Function and approximation.
  std::string function = "inverse";
  Index j = 30;
  Index k = 0;
  Index n_quad = 100;
  QuadratureKind quadrature = QuadratureKind::Contour;
  std::optional<Scalar> contour_center;  // nullopt: automatic
  std::optional<double> contour_radius;  // nullopt: automatic
  // Automatic contours: around the Ritz values of H_j (and the diagonal of D).
  // With a singularity the circle balances the distances to the estimates and
  // to the singularity, after inflating the estimates' radius by (1 + margin).
  // Otherwise it is the centroid circle of twice (plus margin) the radius.
  double contour_margin = 0.0;
  std::vector<std::string> engines = {"arnoldi", "arnoldi_q", "v1", "v2", "v3"};
  bool reorth = true;

  // Sequence.
  Index sequence_length = 1;
  double epsilon = 0.0;
  std::uint64_t seed = 1;
  RhsPolicy rhs = RhsPolicy::RandomEach;

  // Recycling.
  DPolicy d_policy = DPolicy::Identity;
  RecycleInit recycle_init = RecycleInit::Harmonic;
  BasisMode basis = BasisMode::Orthogonalized;
  bool track_angle = false;

  // Oracle.
  bool oracle = true;
  Index oracle_max_hermitian = 3100;
  Index oracle_max_general = 2000;

  std::string output;  // CSV path; empty means no file
};

// key = value lines, '#' starts a comment. Unknown keys are a ConfigError.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);
void validate(const ExperimentConfig& cfg);

struct ReportRow {
  Index problem_index = 0;
  std::string engine;
  Index j = 0;
  Index k = 0;
  Index n_quad = 0;
  double rel_error = 0.0;
  double imag_residue = 0.0;
  double subspace_angle = 0.0;
  double wall_ms = 0.0;
  std::string status;  // ok, ok_gap, or an error kind name

  bool failed() const { return status != "ok" && status != "ok_gap"; }
};

struct RunReport {
  std::vector<ReportRow> rows;

  bool has_failures() const;
  std::vector<ReportRow> rows_for(const std::string& engine) const;
};

// Everything an observer may want to inspect after one problem has been
// solved by all engines.
struct ProblemRecord {
  Index index = 0;
  const SparseMatrix* op = nullptr;
  const Vector* rhs = nullptr;
  const ArnoldiDecomposition* dec = nullptr;
  const RecycleSubspace* rec = nullptr;  // subspace the engines used
  const QuadratureRule* rule = nullptr;
  const Vector* exact = nullptr;         // null when no oracle value exists
  std::map<std::string, Vector> outputs; // successful engines only
};

using ProblemObserver = std::function<void(const ProblemRecord&)>;

// Relative error is the Euclidean norm of the difference divided by that of
// the oracle value. Engine failures become rows and do not stop the sequence.
RunReport run_experiment(const ExperimentConfig& cfg, const ProblemObserver& observer = {});

// First problem only, one row per (n_quad, engine).
RunReport sweep_quadrature(const ExperimentConfig& cfg, const std::vector<Index>& n_list,
                           const ProblemObserver& observer = {});

extern const char* const kCsvHeader;
std::string to_csv(const RunReport& report);
void write_csv(const RunReport& report, const std::filesystem::path& path);

// Base operator of the configured problem.
SparseMatrix build_problem(const ExperimentConfig& cfg);

}  // namespace rfom
