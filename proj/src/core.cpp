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

#include "rfom/core.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace rfom {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::SingularPencil: return "SingularPencil";
    case ErrorKind::ZeroRhs: return "ZeroRhs";
    case ErrorKind::SingularShift: return "SingularShift";
    case ErrorKind::SingularProjector: return "SingularProjector";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::FunctionUndefined: return "FunctionUndefined";
    case ErrorKind::IllConditionedEigenbasis: return "IllConditionedEigenbasis";
    case ErrorKind::UnknownFunction: return "UnknownFunction";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

double max_abs(const DenseMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool is_hermitian(const DenseMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).norm() <= tol * m.norm();
}

LuFactor::LuFactor(const DenseMatrix& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorKind::InvalidArgument, "LU of a non-square matrix");
  }
  if (m.size() == 0) return;
  lu_.compute(m);
  const double scale = max_abs(m);
  const auto pivots = lu_.matrixLU().diagonal().cwiseAbs();
  const double smallest = pivots.minCoeff();
  if (!(smallest >= 1e-14 * scale) || scale == 0.0) {
    throw Error(ErrorKind::SingularMatrix,
                "pivot " + std::to_string(smallest) + " below 1e-14 * " + std::to_string(scale));
  }
}

DenseMatrix LuFactor::solve(const DenseMatrix& rhs) const {
  if (rhs.rows() != size()) throw Error(ErrorKind::InvalidArgument, "LU solve: row mismatch");
  if (size() == 0) return DenseMatrix(0, rhs.cols());
  return lu_.solve(rhs);
}

Vector LuFactor::solve(const Vector& rhs) const {
  if (rhs.size() != size()) throw Error(ErrorKind::InvalidArgument, "LU solve: length mismatch");
  if (size() == 0) return Vector(0);
  return lu_.solve(rhs);
}

DenseMatrix LuFactor::solve_right(const DenseMatrix& rhs) const {
  if (rhs.cols() != size()) throw Error(ErrorKind::InvalidArgument, "LU right solve: column mismatch");
  if (size() == 0) return DenseMatrix(rhs.rows(), 0);
  // M = P^T L U, so X = B U^{-1} L^{-1} P.
  const DenseMatrix& lu = lu_.matrixLU();
  DenseMatrix y = lu.triangularView<Eigen::Upper>().solve<Eigen::OnTheRight>(rhs);
  lu.triangularView<Eigen::UnitLower>().solveInPlace<Eigen::OnTheRight>(y);
  return y * lu_.permutationP();
}

DenseMatrix lu_solve(const DenseMatrix& m, const DenseMatrix& rhs) { return LuFactor(m).solve(rhs); }

Vector lu_solve(const DenseMatrix& m, const Vector& rhs) { return LuFactor(m).solve(rhs); }

QrFactors qr_orthonormalize(const DenseMatrix& m) {
  const Index rows = m.rows();
  const Index cols = m.cols();
  if (cols > rows) throw Error(ErrorKind::InvalidArgument, "QR needs cols <= rows");
  Eigen::HouseholderQR<DenseMatrix> qr(m);
  QrFactors out;
  out.r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  out.q = qr.householderQ() * DenseMatrix::Identity(rows, cols);
  const double tol = 1e-12 * m.norm();
  for (Index i = 0; i < cols; ++i) {
    if (!(std::abs(out.r(i, i)) >= tol) || m.norm() == 0.0) {
      throw Error(ErrorKind::RankDeficient, "QR diagonal " + std::to_string(i) + " is negligible");
    }
  }
  return out;
}

HermitianEigenPairs eig_hermitian(const DenseMatrix& m) {
  const Index n = m.rows();
  if (n != m.cols()) throw Error(ErrorKind::InvalidArgument, "eigendecomposition of a non-square matrix");
  if (!is_hermitian(m)) throw Error(ErrorKind::InvalidArgument, "matrix is not Hermitian");
  HermitianEigenPairs out;
  DenseMatrix work = 0.5 * (m + m.adjoint());
  out.values.resize(n);
  out.vectors.resize(n, n);
  if (n == 0) return out;
  // zheevr rather than zheevd: the divide-and-conquer path in some OpenBLAS
  // builds returns garbage eigenvectors for n >= ~600.
  const auto ln = static_cast<lapack_int>(n);
  lapack_int found = 0;
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
  const lapack_int info = LAPACKE_zheevr(LAPACK_COL_MAJOR, 'V', 'A', 'U', ln, work.data(), ln, 0.0, 0.0, 0, 0, 0.0,
                                         &found, out.values.data(), out.vectors.data(), ln, support.data());
  if (info > 0) throw Error(ErrorKind::NoConvergence, "zheevr failed to converge (info " + std::to_string(info) + ")");
  if (info < 0) throw Error(ErrorKind::InvalidArgument, "zheevr argument " + std::to_string(-info));
  if (found != ln) throw Error(ErrorKind::NoConvergence, "zheevr returned " + std::to_string(found) + " eigenvalues");
  return out;
}

namespace {

EigenPairs eig_general(const DenseMatrix& m) {
  const Index n = m.rows();
  DenseMatrix work = m;
  EigenPairs out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  if (n == 0) return out;
  const lapack_int info =
      LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', static_cast<lapack_int>(n), work.data(), static_cast<lapack_int>(n),
                    out.values.data(), nullptr, static_cast<lapack_int>(n), out.vectors.data(), static_cast<lapack_int>(n));
  if (info > 0) {
    throw Error(ErrorKind::NoConvergence,
                "zgeev QR iteration failed; eigenvalues " + std::to_string(info) + ".. did not converge");
  }
  if (info < 0) throw Error(ErrorKind::InvalidArgument, "zgeev argument " + std::to_string(-info));
  return out;
}

}  // namespace

EigenPairs eig_dense(const DenseMatrix& m, bool hermitian) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::InvalidArgument, "eigendecomposition of a non-square matrix");
  if (!hermitian) return eig_general(m);
  HermitianEigenPairs h = eig_hermitian(m);
  return EigenPairs{h.values.cast<Scalar>(), std::move(h.vectors)};
}

RealVector svd_values(const DenseMatrix& m) {
  if (m.size() == 0) return RealVector(0);
  DenseMatrix work = m;
  const lapack_int rows = static_cast<lapack_int>(m.rows());
  const lapack_int cols = static_cast<lapack_int>(m.cols());
  RealVector s(std::min(m.rows(), m.cols()));
  const lapack_int info =
      LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', rows, cols, work.data(), rows, s.data(), nullptr, 1, nullptr, 1);
  if (info > 0) throw Error(ErrorKind::NoConvergence, "zgesdd did not converge");
  if (info < 0) throw Error(ErrorKind::InvalidArgument, "zgesdd argument " + std::to_string(-info));
  return s;
}

EigenPairs generalized_eig(const DenseMatrix& a, const DenseMatrix& b) {
  const Index n = a.rows();
  if (a.cols() != n || b.rows() != n || b.cols() != n) {
    throw Error(ErrorKind::InvalidArgument, "generalized eigenproblem needs square matrices of equal size");
  }
  if (n == 0) return EigenPairs{Vector(0), DenseMatrix(0, 0)};
  const RealVector sv = svd_values(b);
  const double smax = sv(0);
  const double smin = sv(n - 1);
  if (!(smin >= 1e-12 * smax) || smax == 0.0) {
    throw Error(ErrorKind::SingularPencil, "right-hand matrix is numerically singular");
  }
  if (smax / smin <= 1e10) {
    EigenPairs out = eig_general(lu_solve(b, a));
    return out;
  }
  DenseMatrix aw = a;
  DenseMatrix bw = b;
  Vector alpha(n), beta(n);
  DenseMatrix vr(n, n);
  const lapack_int info = LAPACKE_zggev(LAPACK_COL_MAJOR, 'N', 'V', static_cast<lapack_int>(n), aw.data(),
                                        static_cast<lapack_int>(n), bw.data(), static_cast<lapack_int>(n), alpha.data(),
                                        beta.data(), nullptr, static_cast<lapack_int>(n), vr.data(),
                                        static_cast<lapack_int>(n));
  if (info > 0) throw Error(ErrorKind::NoConvergence, "zggev QZ iteration failed (info " + std::to_string(info) + ")");
  if (info < 0) throw Error(ErrorKind::InvalidArgument, "zggev argument " + std::to_string(-info));
  EigenPairs out;
  out.values.resize(n);
  out.vectors = vr;
  for (Index i = 0; i < n; ++i) {
    if (std::abs(beta(i)) == 0.0) throw Error(ErrorKind::SingularPencil, "infinite eigenvalue in pencil");
    out.values(i) = alpha(i) / beta(i);
    const double nrm = out.vectors.col(i).norm();
    if (nrm > 0.0) out.vectors.col(i) /= nrm;
  }
  return out;
}

}  // namespace rfom
