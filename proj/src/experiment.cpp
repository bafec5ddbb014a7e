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

#include "rfom/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

namespace rfom {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

[[noreturn]] void config_error(const std::string& key, const std::string& what) {
  throw Error(ErrorKind::ConfigError, key + ": " + what);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) config_error(key, "trailing characters in '" + v + "'");
    return x;
  } catch (const std::logic_error&) {
    config_error(key, "not a number: '" + v + "'");
  }
}

Index parse_index(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long x = std::stoll(v, &used);
    if (used != v.size()) config_error(key, "trailing characters in '" + v + "'");
    return static_cast<Index>(x);
  } catch (const std::logic_error&) {
    config_error(key, "not an integer: '" + v + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "on" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "off" || v == "no" || v == "0") return false;
  config_error(key, "expected a boolean, got '" + v + "'");
}

std::filesystem::path resolve_data_path(const std::string& file) {
  std::filesystem::path p(file);
  if (p.is_absolute()) return p;
  if (const char* dir = std::getenv("RFOM_DATA_DIR")) return std::filesystem::path(dir) / p;
  return p;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

bool is_real_vector(const Vector& v) { return v.imag().cwiseAbs().maxCoeff() == 0.0; }

// Keeps the eigendecomposition of the most recent oracle matrix; sequences
// with epsilon = 0 reuse it for every problem.
class OracleCache {
 public:
  const Spectral& get(const SparseMatrix& a, bool hermitian) {
    const bool same = key_ && key_->rows() == a.rows() && key_->nonZeros() == a.nonZeros() &&
                      hermitian_ == hermitian && SparseMatrix(*key_ - a).norm() == 0.0;
    if (!same) {
      key_ = a;
      hermitian_ = hermitian;
      spectral_.reset();
      failure_.reset();
      try {
        spectral_ = spectral_decomposition(DenseMatrix(a), hermitian);
      } catch (const Error& e) {
        failure_ = e;
      }
    }
    if (failure_) throw *failure_;
    return *spectral_;
  }

 private:
  std::optional<SparseMatrix> key_;
  bool hermitian_ = false;
  std::optional<Spectral> spectral_;
  std::optional<Error> failure_;
};

struct Setup {
  FunctionSpec engine_fun;
  FunctionSpec exact_fun;
  bool squared = false;  // engines see A^2 and A b
};

Setup make_setup(const ExperimentConfig& cfg) {
  Setup s;
  s.exact_fun = function_catalog(cfg.function);
  if (cfg.function == "sign_via_invsqrt") {
    s.engine_fun = function_catalog("invsqrt");
    s.squared = true;
  } else {
    s.engine_fun = s.exact_fun;
  }
  return s;
}

QuadratureRule make_rule(const ExperimentConfig& cfg, const ArnoldiDecomposition& dec, const RecycleSubspace& rec,
                         const FunctionSpec& fun, Index n_quad) {
  if (cfg.quadrature == QuadratureKind::Stieltjes) return stieltjes_invsqrt(n_quad);
  if (cfg.contour_center && cfg.contour_radius) {
    return trapezoid_contour({*cfg.contour_center, *cfg.contour_radius}, n_quad);
  }
  // Ritz values of H_j and the diagonal of D: the contour has to enclose the spectrum of G_j.
  const DenseMatrix hj = dec.Hj();
  const Vector ritz = eig_dense(hj, is_hermitian(hj, 1e-12)).values;
  std::vector<Scalar> est(ritz.data(), ritz.data() + ritz.size());
  for (Index i = 0; i < rec.d.size(); ++i) est.emplace_back(rec.d(i), 0.0);
  if (!fun.has_singularity) return trapezoid_contour(suggest_contour(est, 1.0 + cfg.contour_margin), n_quad);
  return trapezoid_contour(balanced_contour(est, fun.singularity, cfg.contour_margin), n_quad);
}

Vector evaluate(const std::string& engine, const ArnoldiDecomposition& dec, const RecycleSubspace& rec,
                const FunctionSpec& fun, const QuadratureRule& rule) {
  if (engine == "arnoldi") return arnoldi_direct(dec, fun);
  if (engine == "arnoldi_q") return arnoldi_quad(dec, fun, rule);
  if (engine == "v1") return rfom_v1(dec, rec, fun, rule);
  if (engine == "v2") return rfom_v2(dec, rec, fun, rule);
  if (engine == "v3") return rfom_v3(dec, rec, fun, rule);
  throw Error(ErrorKind::ConfigError, "unknown engine '" + engine + "'");
}

bool uses_recycling(const std::string& engine) { return engine == "v1" || engine == "v2" || engine == "v3"; }
bool uses_quadrature(const std::string& engine) { return engine != "arnoldi"; }

// Runs every configured engine on one problem and appends its rows.
void run_engines(const ExperimentConfig& cfg, Index index, const Setup& setup, const ArnoldiDecomposition& dec,
                 const RecycleSubspace& rec, const QuadratureRule& rule, const Vector* exact, bool real_problem,
                 ProblemRecord& record, std::vector<ReportRow>& rows) {
  const std::size_t first = rows.size();
  const Vector* reference = nullptr;
  for (const std::string& engine : cfg.engines) {
    ReportRow row;
    row.problem_index = index;
    row.engine = engine;
    row.j = dec.j;
    row.k = uses_recycling(engine) ? rec.k() : 0;
    row.n_quad = uses_quadrature(engine) ? rule.size() : 0;
    row.subspace_angle = kNaN;
    const auto start = std::chrono::steady_clock::now();
    try {
      Vector x = evaluate(engine, dec, rec, setup.engine_fun, rule);
      row.wall_ms = elapsed_ms(start);
      const double xn = x.norm();
      row.imag_residue = real_problem && xn > 0.0 ? x.imag().norm() / xn : kNaN;
      if (exact) {
        row.rel_error = (x - *exact).norm() / exact->norm();
        row.status = "ok";
      } else {
        row.status = "ok_gap";
      }
      auto [it, inserted] = record.outputs.insert_or_assign(engine, std::move(x));
      if (!reference) reference = &it->second;
    } catch (const Error& e) {
      row.wall_ms = elapsed_ms(start);
      row.rel_error = kNaN;
      row.imag_residue = kNaN;
      row.status = std::string(to_string(e.kind()));
    }
    rows.push_back(row);
  }
  if (!exact) {
    // Without an oracle the error column holds the gap to the first successful engine.
    for (std::size_t r = first; r < rows.size(); ++r) {
      if (rows[r].failed()) continue;
      const Vector& x = record.outputs.at(rows[r].engine);
      const double rn = reference->norm();
      rows[r].rel_error = rn > 0.0 ? (x - *reference).norm() / rn : (x - *reference).norm();
    }
  }
}

ReportRow special_row(Index index, const std::string& engine, Index j, const Error& e) {
  ReportRow row;
  row.problem_index = index;
  row.engine = engine;
  row.j = j;
  row.rel_error = kNaN;
  row.imag_residue = kNaN;
  row.subspace_angle = kNaN;
  row.status = std::string(to_string(e.kind()));
  return row;
}

std::string format_double(double x, const char* fmt) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, x);
  return buf;
}

// State shared by run_experiment and sweep_quadrature.
struct Driver {
  const ExperimentConfig& cfg;
  Setup setup;
  OracleCache oracle;
  bool hermitian = false;
  bool oracle_allowed = false;

  explicit Driver(const ExperimentConfig& c) : cfg(c), setup(make_setup(c)) {}

  void prepare(const SparseMatrix& base) {
    hermitian = is_hermitian(base);
    const Index cap = hermitian ? cfg.oracle_max_hermitian : cfg.oracle_max_general;
    oracle_allowed = cfg.oracle && base.rows() <= cap;
    if (cfg.recycle_init == RecycleInit::OracleEigenvectors && !oracle_allowed && cfg.k > 0) {
      throw Error(ErrorKind::ConfigError, "recycle_init = oracle_eigenvectors needs the oracle for this size");
    }
  }

  SparseMatrix engine_operator(const SparseMatrix& a) const {
    if (!setup.squared) return a;
    SparseMatrix sq = a * a;
    sq.makeCompressed();
    return sq;
  }
};

}  // namespace

const char* const kCsvHeader =
    "problem_index,engine,j,k,n_quad,rel_error,imag_residue,subspace_angle,wall_ms,status";

void apply_setting(ExperimentConfig& cfg, const std::string& key_in, const std::string& value_in) {
  const std::string key = trim(key_in);
  const std::string v = trim(value_in);
  if (key == "problem") {
    if (v != "laplacian2d" && v != "convdiff2d" && v != "graded_hermitian" && v != "matrix_market") {
      config_error(key, "unknown problem '" + v + "'");
    }
    cfg.problem = v;
  } else if (key == "m") {
    cfg.m = parse_index(key, v);
  } else if (key == "convection") {
    cfg.convection = parse_double(key, v);
  } else if (key == "shift") {
    cfg.shift = parse_double(key, v);
  } else if (key == "n") {
    cfg.n = parse_index(key, v);
  } else if (key == "lambda_min") {
    cfg.lambda_min = parse_double(key, v);
  } else if (key == "lambda_max") {
    cfg.lambda_max = parse_double(key, v);
  } else if (key == "grading") {
    cfg.grading = parse_double(key, v);
  } else if (key == "matrix_file") {
    cfg.matrix_file = v;
  } else if (key == "function") {
    function_catalog(v);
    cfg.function = v;
  } else if (key == "j") {
    cfg.j = parse_index(key, v);
  } else if (key == "k") {
    cfg.k = parse_index(key, v);
  } else if (key == "n_quad") {
    cfg.n_quad = parse_index(key, v);
  } else if (key == "quadrature") {
    if (v == "contour") {
      cfg.quadrature = QuadratureKind::Contour;
    } else if (v == "stieltjes") {
      cfg.quadrature = QuadratureKind::Stieltjes;
    } else {
      config_error(key, "expected contour or stieltjes");
    }
  } else if (key == "contour_center") {
    if (v == "auto") {
      cfg.contour_center.reset();
    } else {
      const auto parts = split(v, ',');
      if (parts.empty() || parts.size() > 2) config_error(key, "expected re or re,im");
      cfg.contour_center = Scalar(parse_double(key, parts[0]), parts.size() == 2 ? parse_double(key, parts[1]) : 0.0);
    }
  } else if (key == "contour_radius") {
    if (v == "auto") {
      cfg.contour_radius.reset();
    } else {
      cfg.contour_radius = parse_double(key, v);
    }
  } else if (key == "contour_margin") {
    cfg.contour_margin = parse_double(key, v);
  } else if (key == "engines") {
    cfg.engines = split(v, ',');
  } else if (key == "reorth") {
    cfg.reorth = parse_bool(key, v);
  } else if (key == "sequence_length") {
    cfg.sequence_length = parse_index(key, v);
  } else if (key == "epsilon") {
    cfg.epsilon = parse_double(key, v);
  } else if (key == "seed") {
    cfg.seed = static_cast<std::uint64_t>(parse_index(key, v));
  } else if (key == "rhs") {
    if (v == "random_each") {
      cfg.rhs = RhsPolicy::RandomEach;
    } else if (v == "fixed") {
      cfg.rhs = RhsPolicy::Fixed;
    } else {
      config_error(key, "expected random_each or fixed");
    }
  } else if (key == "d_policy") {
    if (v == "identity") {
      cfg.d_policy = DPolicy::Identity;
    } else if (v == "unit_columns") {
      cfg.d_policy = DPolicy::UnitColumns;
    } else {
      config_error(key, "expected identity or unit_columns");
    }
  } else if (key == "recycle_init") {
    if (v == "harmonic") {
      cfg.recycle_init = RecycleInit::Harmonic;
    } else if (v == "oracle_eigenvectors") {
      cfg.recycle_init = RecycleInit::OracleEigenvectors;
    } else {
      config_error(key, "expected harmonic or oracle_eigenvectors");
    }
  } else if (key == "basis") {
    if (v == "raw") {
      cfg.basis = BasisMode::Raw;
    } else if (v == "orthogonalized") {
      cfg.basis = BasisMode::Orthogonalized;
    } else {
      config_error(key, "expected raw or orthogonalized");
    }
  } else if (key == "track_angle") {
    cfg.track_angle = parse_bool(key, v);
  } else if (key == "oracle") {
    cfg.oracle = parse_bool(key, v);
  } else if (key == "oracle_max_hermitian") {
    cfg.oracle_max_hermitian = parse_index(key, v);
  } else if (key == "oracle_max_general") {
    cfg.oracle_max_general = parse_index(key, v);
  } else if (key == "output") {
    cfg.output = v;
  } else {
    config_error(key, "unknown key");
  }
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.j < 1) config_error("j", "must be at least 1");
  if (cfg.k < 0) config_error("k", "must be nonnegative");
  if (cfg.n_quad < 1) config_error("n_quad", "must be at least 1");
  if (cfg.engines.empty()) config_error("engines", "must not be empty");
  for (const auto& e : cfg.engines) {
    if (e != "arnoldi" && e != "arnoldi_q" && e != "v1" && e != "v2" && e != "v3") {
      config_error("engines", "unknown engine '" + e + "'");
    }
  }
  if (cfg.sequence_length < 1) config_error("sequence_length", "must be at least 1");
  if (cfg.epsilon < 0.0) config_error("epsilon", "must be nonnegative");
  if (cfg.quadrature == QuadratureKind::Stieltjes && cfg.function != "invsqrt" &&
      cfg.function != "sign_via_invsqrt") {
    config_error("quadrature", "the Stieltjes rule represents the inverse square root only");
  }
  if (cfg.contour_center.has_value() != cfg.contour_radius.has_value()) {
    config_error("contour_center", "set both contour_center and contour_radius, or neither");
  }
  if (cfg.contour_radius && !(*cfg.contour_radius > 0.0)) config_error("contour_radius", "must be positive");
  if (cfg.contour_margin < 0.0) config_error("contour_margin", "must be nonnegative");
  if (cfg.problem == "matrix_market" && cfg.matrix_file.empty()) config_error("matrix_file", "required");
  if (cfg.m < 1) config_error("m", "must be positive");
  if (cfg.n < 2) config_error("n", "must be at least 2");
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  Index lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::ConfigError, "line " + std::to_string(lineno) + ": expected key = value");
    }
    apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

SparseMatrix build_problem(const ExperimentConfig& cfg) {
  SparseMatrix a;
  if (cfg.problem == "laplacian2d") {
    a = gen_laplacian_2d(cfg.m);
  } else if (cfg.problem == "convdiff2d") {
    a = gen_convection_diffusion_2d(cfg.m, cfg.convection);
  } else if (cfg.problem == "graded_hermitian") {
    a = gen_graded_hermitian(cfg.n, cfg.lambda_min, cfg.lambda_max, cfg.grading, cfg.seed);
  } else if (cfg.problem == "matrix_market") {
    a = load_matrix_market(resolve_data_path(cfg.matrix_file));
  } else {
    config_error("problem", "unknown problem '" + cfg.problem + "'");
  }
  if (cfg.shift != 0.0) {
    SparseMatrix id(a.rows(), a.cols());
    id.setIdentity();
    a = a + cfg.shift * id;
    a.makeCompressed();
  }
  return a;
}

bool RunReport::has_failures() const {
  return std::any_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.failed(); });
}

std::vector<ReportRow> RunReport::rows_for(const std::string& engine) const {
  std::vector<ReportRow> out;
  std::copy_if(rows.begin(), rows.end(), std::back_inserter(out),
               [&](const ReportRow& r) { return r.engine == engine; });
  return out;
}

RunReport run_experiment(const ExperimentConfig& cfg, const ProblemObserver& observer) {
  validate(cfg);
  Driver driver(cfg);
  const SparseMatrix base = build_problem(cfg);
  driver.prepare(base);

  ProblemSequence seq;
  seq.base = base;
  seq.length = cfg.sequence_length;
  seq.epsilon = cfg.epsilon;
  seq.rhs = cfg.rhs;
  seq.seed = cfg.seed;
  seq.hermitian = driver.hermitian;
  PerturbationSequence problems(seq);

  RunReport report;
  RecycleSubspace rec = RecycleSubspace::none(base.rows());
  Index index = 0;
  while (auto next = problems.next()) {
    ++index;
    const SparseMatrix& a = next->first;
    const Vector& b = next->second;
    const SparseMatrix op_matrix = driver.engine_operator(a);
    const Vector rhs = driver.setup.squared ? Vector(a * b) : b;
    const LinearOperator op = make_operator(op_matrix);
    const bool real_problem = is_real(op_matrix) && is_real_vector(rhs);
    const std::size_t first_row = report.rows.size();

    // Oracle value and, when asked for, the comparison eigenvectors.
    std::optional<Vector> exact;
    const Spectral* spectral = nullptr;
    if (driver.oracle_allowed) {
      try {
        spectral = &driver.oracle.get(a, driver.hermitian);
        exact = oracle_apply(*spectral, driver.setup.exact_fun, b);
      } catch (const Error& e) {
        report.rows.push_back(special_row(index, "oracle", cfg.j, e));
      }
    }

    if (index == 1 && cfg.k > 0 && cfg.recycle_init == RecycleInit::OracleEigenvectors) {
      if (!spectral) throw Error(ErrorKind::ConfigError, "oracle eigenvectors unavailable for recycle_init");
      DenseMatrix u = smallest_eigenvectors(*spectral, cfg.k);
      DenseMatrix c = op.apply_block(u);
      rec = RecycleSubspace::from(std::move(u), std::move(c));
    }

    ArnoldiDecomposition dec;
    try {
      dec = arnoldi(op, rhs, std::min<Index>(cfg.j, op.dim - 1), cfg.reorth);
    } catch (const Error& e) {
      for (const auto& engine : cfg.engines) report.rows.push_back(special_row(index, engine, cfg.j, e));
      continue;
    }

    RecycleSubspace used = rec;
    try {
      if (cfg.basis == BasisMode::Orthogonalized && !used.empty()) used = orthogonalize_against_krylov(dec, used, op);
      if (!used.empty()) used.d = choose_D(used.U, cfg.d_policy).diagonal().real();
    } catch (const Error& e) {
      report.rows.push_back(special_row(index, "recycle", dec.j, e));
      used = RecycleSubspace::none(op.dim);
    }

    ProblemRecord record;
    QuadratureRule rule;
    try {
      rule = make_rule(cfg, dec, used, driver.setup.engine_fun, cfg.n_quad);
    } catch (const Error& e) {
      for (const auto& engine : cfg.engines) report.rows.push_back(special_row(index, engine, dec.j, e));
      continue;
    }
    run_engines(cfg, index, driver.setup, dec, used, rule, exact ? &*exact : nullptr, real_problem, record,
                report.rows);

    // Update the subspace for the next problem.
    if (cfg.k > 0) {
      try {
        rec = harmonic_ritz_update(dec, used, op, std::min(cfg.k, used.k() + dec.j));
      } catch (const Error& e) {
        report.rows.push_back(special_row(index, "recycle", dec.j, e));
        rec = used;
      }
    }

    if (cfg.track_angle && cfg.k > 0 && spectral && driver.hermitian && !rec.empty()) {
      try {
        const double angle = subspace_angle(rec.U, smallest_eigenvectors(*spectral, cfg.k));
        for (std::size_t r = first_row; r < report.rows.size(); ++r) report.rows[r].subspace_angle = angle;
      } catch (const Error& e) {
        report.rows.push_back(special_row(index, "angle", dec.j, e));
      }
    }

    if (observer) {
      record.index = index;
      record.op = &op_matrix;
      record.rhs = &rhs;
      record.dec = &dec;
      record.rec = &used;
      record.rule = &rule;
      record.exact = exact ? &*exact : nullptr;
      observer(record);
    }
  }

  if (!cfg.output.empty()) write_csv(report, cfg.output);
  return report;
}

RunReport sweep_quadrature(const ExperimentConfig& cfg, const std::vector<Index>& n_list,
                           const ProblemObserver& observer) {
  validate(cfg);
  if (n_list.empty()) throw Error(ErrorKind::ConfigError, "empty n_quad list");
  for (Index nq : n_list) {
    if (nq < 1) throw Error(ErrorKind::ConfigError, "n_quad values must be positive");
  }
  Driver driver(cfg);
  const SparseMatrix base = build_problem(cfg);
  driver.prepare(base);

  ProblemSequence seq;
  seq.base = base;
  seq.length = 1;
  seq.rhs = cfg.rhs;
  seq.seed = cfg.seed;
  seq.hermitian = driver.hermitian;
  PerturbationSequence problems(seq);
  auto first = problems.next();
  const SparseMatrix& a = first->first;
  const Vector& b = first->second;
  const SparseMatrix op_matrix = driver.engine_operator(a);
  const Vector rhs = driver.setup.squared ? Vector(a * b) : b;
  const LinearOperator op = make_operator(op_matrix);
  const bool real_problem = is_real(op_matrix) && is_real_vector(rhs);

  RunReport report;
  std::optional<Vector> exact;
  const Spectral* spectral = nullptr;
  if (driver.oracle_allowed) {
    try {
      spectral = &driver.oracle.get(a, driver.hermitian);
      exact = oracle_apply(*spectral, driver.setup.exact_fun, b);
    } catch (const Error& e) {
      report.rows.push_back(special_row(1, "oracle", cfg.j, e));
    }
  }

  RecycleSubspace rec = RecycleSubspace::none(op.dim);
  if (cfg.k > 0 && cfg.recycle_init == RecycleInit::OracleEigenvectors) {
    if (!spectral) throw Error(ErrorKind::ConfigError, "oracle eigenvectors unavailable for recycle_init");
    DenseMatrix u = smallest_eigenvectors(*spectral, cfg.k);
    DenseMatrix c = op.apply_block(u);
    rec = RecycleSubspace::from(std::move(u), std::move(c));
  }

  const ArnoldiDecomposition dec = arnoldi(op, rhs, std::min<Index>(cfg.j, op.dim - 1), cfg.reorth);
  if (cfg.basis == BasisMode::Orthogonalized && !rec.empty()) rec = orthogonalize_against_krylov(dec, rec, op);
  if (!rec.empty()) rec.d = choose_D(rec.U, cfg.d_policy).diagonal().real();

  for (Index nq : n_list) {
    ProblemRecord record;
    QuadratureRule rule;
    try {
      rule = make_rule(cfg, dec, rec, driver.setup.engine_fun, nq);
    } catch (const Error& e) {
      for (const auto& engine : cfg.engines) report.rows.push_back(special_row(1, engine, dec.j, e));
      continue;
    }
    const std::size_t start = report.rows.size();
    run_engines(cfg, 1, driver.setup, dec, rec, rule, exact ? &*exact : nullptr, real_problem, record,
                report.rows);
    // The direct engine has no quadrature; label its rows with the sweep value.
    for (std::size_t r = start; r < report.rows.size(); ++r) report.rows[r].n_quad = nq;
    if (observer) {
      record.index = 1;
      record.op = &op_matrix;
      record.rhs = &rhs;
      record.dec = &dec;
      record.rec = &rec;
      record.rule = &rule;
      record.exact = exact ? &*exact : nullptr;
      observer(record);
    }
  }

  if (!cfg.output.empty()) write_csv(report, cfg.output);
  return report;
}

std::string to_csv(const RunReport& report) {
  std::ostringstream out;
  out << kCsvHeader << '\n';
  for (const ReportRow& r : report.rows) {
    out << r.problem_index << ',' << r.engine << ',' << r.j << ',' << r.k << ',' << r.n_quad << ','
        << format_double(r.rel_error, "%.6e") << ',' << format_double(r.imag_residue, "%.6e") << ','
        << format_double(r.subspace_angle, "%.6f") << ',' << format_double(r.wall_ms, "%.3f") << ',' << r.status
        << '\n';
  }
  return out.str();
}

void write_csv(const RunReport& report, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << to_csv(report);
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

}  // namespace rfom
