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

#include "rfom/problems.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

namespace rfom {

namespace {

using Triplet = Eigen::Triplet<Scalar>;

SparseMatrix from_triplets(Index rows, Index cols, const std::vector<Triplet>& t) {
  SparseMatrix a(rows, cols);
  a.setFromTriplets(t.begin(), t.end());
  a.makeCompressed();
  return a;
}

Vector gaussian_vector(std::mt19937_64& rng, Index n, bool real) {
  std::normal_distribution<double> normal;
  Vector v(n);
  for (Index i = 0; i < n; ++i) {
    if (real) {
      v(i) = Scalar(normal(rng), 0.0);
    } else {
      const double re = normal(rng);
      const double im = normal(rng);
      v(i) = Scalar(re, im) / std::sqrt(2.0);
    }
  }
  return v;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

SparseMatrix gen_laplacian_2d(Index m) { return gen_convection_diffusion_2d(m, 0.0); }

SparseMatrix gen_convection_diffusion_2d(Index m, double convection) {
  if (m < 1) throw Error(ErrorKind::InvalidArgument, "mesh size must be positive");
  const double half = 0.5 * convection / static_cast<double>(m + 1);
  const Index n = m * m;
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(5 * n));
  for (Index y = 0; y < m; ++y) {
    for (Index x = 0; x < m; ++x) {
      const Index i = y * m + x;
      t.emplace_back(i, i, 4.0);
      if (x > 0) t.emplace_back(i, i - 1, -1.0 - half);
      if (x + 1 < m) t.emplace_back(i, i + 1, -1.0 + half);
      if (y > 0) t.emplace_back(i, i - m, -1.0);
      if (y + 1 < m) t.emplace_back(i, i + m, -1.0);
    }
  }
  return from_triplets(n, n, t);
}

SparseMatrix gen_graded_hermitian(Index n, double lo, double hi, double grading, std::uint64_t seed) {
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "graded matrix needs n >= 2");
  std::mt19937_64 rng(seed);
  DenseMatrix g(n, n);
  for (Index c = 0; c < n; ++c) g.col(c) = gaussian_vector(rng, n, false);
  const DenseMatrix q = qr_orthonormalize(g).q;
  RealVector lambda(n);
  for (Index i = 0; i < n; ++i) {
    lambda(i) = lo + (hi - lo) * std::pow(static_cast<double>(i) / static_cast<double>(n - 1), grading);
  }
  DenseMatrix a = q * lambda.cast<Scalar>().asDiagonal() * q.adjoint();
  a = 0.5 * (a + a.adjoint()).eval();
  return a.sparseView();
}

SparseMatrix load_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::string line;
  Index lineno = 0;
  auto fail = [&](const std::string& what) {
    throw Error(ErrorKind::ParseError, path.string() + ":" + std::to_string(lineno) + ": " + what);
  };

  if (!std::getline(in, line)) fail("empty file");
  ++lineno;
  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket") fail("missing %%MatrixMarket banner");
  object = lower(object);
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (object != "matrix") throw Error(ErrorKind::UnsupportedFormat, "object '" + object + "'");
  if (format != "coordinate") throw Error(ErrorKind::UnsupportedFormat, "format '" + format + "'");
  if (field == "pattern") throw Error(ErrorKind::UnsupportedFormat, "pattern matrices carry no values");
  const bool complex_field = field == "complex";
  if (!complex_field && field != "real" && field != "integer" && field != "double") {
    throw Error(ErrorKind::UnsupportedFormat, "field '" + field + "'");
  }
  if (symmetry != "general" && symmetry != "symmetric" && symmetry != "hermitian" && symmetry != "skew-symmetric") {
    throw Error(ErrorKind::UnsupportedFormat, "symmetry '" + symmetry + "'");
  }

  // Skip comments to the size line.
  Index rows = -1, cols = -1, nnz = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '%') continue;
    std::istringstream sz(line);
    if (!(sz >> rows >> cols >> nnz) || rows < 0 || cols < 0 || nnz < 0) fail("bad size line");
    break;
  }
  if (rows < 0) fail("missing size line");

  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(symmetry == "general" ? nnz : 2 * nnz));
  Index seen = 0;
  while (seen < nnz && std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '%') continue;
    std::istringstream entry(line);
    Index r = 0, c = 0;
    double re = 0.0, im = 0.0;
    if (!(entry >> r >> c >> re)) fail("bad entry");
    if (complex_field && !(entry >> im)) fail("missing imaginary part");
    if (r < 1 || r > rows || c < 1 || c > cols) fail("index out of range");
    const Scalar v(re, im);
    t.emplace_back(r - 1, c - 1, v);
    if (r != c) {
      if (symmetry == "symmetric") t.emplace_back(c - 1, r - 1, v);
      if (symmetry == "hermitian") t.emplace_back(c - 1, r - 1, std::conj(v));
      if (symmetry == "skew-symmetric") t.emplace_back(c - 1, r - 1, -v);
    }
    ++seen;
  }
  if (seen < nnz) fail("expected " + std::to_string(nnz) + " entries, found " + std::to_string(seen));
  return from_triplets(rows, cols, t);
}

void write_matrix_market(const std::filesystem::path& path, const SparseMatrix& a) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  const bool real = is_real(a);
  out << "%%MatrixMarket matrix coordinate " << (real ? "real" : "complex") << " general\n";
  out << a.rows() << ' ' << a.cols() << ' ' << a.nonZeros() << '\n';
  out << std::setprecision(17);
  for (Index r = 0; r < a.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(a, r); it; ++it) {
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value().real();
      if (!real) out << ' ' << it.value().imag();
      out << '\n';
    }
  }
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

PerturbationSequence::PerturbationSequence(ProblemSequence seq)
    : seq_(std::move(seq)), matrix_rng_(seq_.seed), rhs_rng_(seq_.seed ^ 0x9e3779b97f4a7c15ULL) {
  if (seq_.base.rows() != seq_.base.cols() || seq_.base.rows() == 0) {
    throw Error(ErrorKind::InvalidArgument, "base operator must be square and nonempty");
  }
  if (seq_.length < 1) throw Error(ErrorKind::InvalidArgument, "sequence length must be positive");
  if (seq_.epsilon < 0.0) throw Error(ErrorKind::InvalidArgument, "epsilon must be nonnegative");
  current_ = seq_.base;
  real_ = is_real(seq_.base);
}

Vector PerturbationSequence::random_vector() { return gaussian_vector(rhs_rng_, seq_.base.rows(), real_); }

SparseMatrix PerturbationSequence::perturbation() {
  std::normal_distribution<double> normal;
  SparseMatrix e = seq_.base;
  for (Index r = 0; r < e.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(e, r); it; ++it) {
      const double re = normal(matrix_rng_);
      const double im = real_ ? 0.0 : normal(matrix_rng_);
      it.valueRef() = Scalar(re, im);
    }
  }
  if (seq_.hermitian) e = 0.5 * (e + SparseMatrix(e.adjoint()));
  const double en = e.norm();
  if (en > 0.0) e *= seq_.base.norm() / en;
  return e;
}

std::optional<std::pair<SparseMatrix, Vector>> PerturbationSequence::next() {
  if (produced_ >= seq_.length) return std::nullopt;
  if (produced_ > 0 && seq_.epsilon > 0.0) {
    current_ = current_ + seq_.epsilon * perturbation();
    if (seq_.hermitian) current_ = 0.5 * (current_ + SparseMatrix(current_.adjoint()));
  }
  Vector b;
  if (seq_.rhs == RhsPolicy::Fixed) {
    if (produced_ == 0) fixed_rhs_ = random_vector();
    b = fixed_rhs_;
  } else {
    b = random_vector();
  }
  ++produced_;
  return std::make_pair(current_, b);
}

Spectral spectral_decomposition(const DenseMatrix& a, bool hermitian) {
  Spectral s;
  s.hermitian = hermitian;
  if (hermitian) {
    HermitianEigenPairs h = eig_hermitian(a);
    s.values = h.values.cast<Scalar>();
    s.vectors = std::move(h.vectors);
    return s;
  }
  EigenPairs e = eig_dense(a, false);
  const RealVector sv = svd_values(e.vectors);
  const double cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : INFINITY;
  if (!(cond <= 1e8)) {
    throw Error(ErrorKind::IllConditionedEigenbasis, "eigenvector condition number " + std::to_string(cond));
  }
  s.values = std::move(e.values);
  s.vectors = std::move(e.vectors);
  s.inverse.emplace(s.vectors);
  return s;
}

Vector oracle_apply(const Spectral& s, const FunctionSpec& fun, const Vector& b) {
  check_domain(fun.name, s.values);
  Vector fl(s.values.size());
  for (Index i = 0; i < fl.size(); ++i) fl(i) = fun.scalar_f(s.values(i));
  if (s.hermitian) return s.vectors * (fl.asDiagonal() * (s.vectors.adjoint() * b));
  return s.vectors * (fl.asDiagonal() * s.inverse->solve(b));
}

Vector oracle_funm(const DenseMatrix& a, const FunctionSpec& fun, const Vector& b, bool hermitian) {
  if (a.rows() != a.cols() || b.size() != a.rows()) throw Error(ErrorKind::InvalidArgument, "oracle size mismatch");
  return oracle_apply(spectral_decomposition(a, hermitian), fun, b);
}

DenseMatrix smallest_eigenvectors(const Spectral& s, Index k) {
  const Index n = s.values.size();
  if (k < 0 || k > n) throw Error(ErrorKind::InvalidArgument, "k out of range");
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index x, Index y) { return std::abs(s.values(x)) < std::abs(s.values(y)); });
  DenseMatrix z(s.vectors.rows(), k);
  for (Index i = 0; i < k; ++i) z.col(i) = s.vectors.col(order[static_cast<std::size_t>(i)]);
  return z;
}

}  // namespace rfom
