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

#include "rfom/functions.hpp"

#include <cmath>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

namespace rfom {

namespace {

// Points of the closed negative real axis are off limits for the principal
// branches of log and the square roots.
bool on_branch_cut(Scalar z) { return z.imag() == 0.0 && z.real() <= 0.0; }

std::string describe(Scalar z) {
  std::ostringstream os;
  os << "eigenvalue (" << z.real() << ", " << z.imag() << ")";
  return os.str();
}

void require_off_cut(std::string_view name, Scalar z) {
  if (on_branch_cut(z)) {
    throw Error(ErrorKind::FunctionUndefined, std::string(name) + " undefined at " + describe(z));
  }
}

Scalar scalar_eval(std::string_view name, Scalar z) {
  if (name == "inverse") {
    if (z == Scalar(0.0)) throw Error(ErrorKind::FunctionUndefined, "inverse undefined at 0");
    return 1.0 / z;
  }
  if (name == "invsqrt") {
    require_off_cut(name, z);
    return 1.0 / std::sqrt(z);
  }
  if (name == "sqrt") {
    require_off_cut(name, z);
    return std::sqrt(z);
  }
  if (name == "log") {
    require_off_cut(name, z);
    return std::log(z);
  }
  if (name == "exp") return std::exp(z);
  if (name == "sign_via_invsqrt") {
    const Scalar z2 = z * z;
    require_off_cut(name, z2);
    return z / std::sqrt(z2);
  }
  throw Error(ErrorKind::UnknownFunction, std::string(name));
}

// Hermitian path: eigendecomposition. Otherwise Schur-Parlett style routines.
DenseMatrix dense_eval(const std::string& name, const DenseMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::InvalidArgument, "matrix function of a non-square matrix");
  if (m.size() == 0) return m;
  if (is_hermitian(m, 1e-12)) {
    const HermitianEigenPairs eig = eig_hermitian(m);
    Vector fl(eig.values.size());
    for (Index i = 0; i < fl.size(); ++i) fl(i) = scalar_eval(name, eig.values(i));
    return eig.vectors * fl.asDiagonal() * eig.vectors.adjoint();
  }
  check_domain(name, eig_dense(m, false).values);
  const Index n = m.rows();
  if (name == "inverse") return lu_solve(m, DenseMatrix(DenseMatrix::Identity(n, n)));
  if (name == "exp") return m.exp();
  if (name == "log") return m.log();
  if (name == "sqrt") return m.sqrt();
  if (name == "invsqrt") {
    const DenseMatrix root = m.sqrt();
    return lu_solve(root, DenseMatrix(DenseMatrix::Identity(n, n)));
  }
  if (name == "sign_via_invsqrt") {
    const DenseMatrix root = (m * m).sqrt();
    return lu_solve(root, m);
  }
  throw Error(ErrorKind::UnknownFunction, name);
}

}  // namespace

void check_domain(std::string_view name, const Vector& eigenvalues) {
  for (Index i = 0; i < eigenvalues.size(); ++i) {
    // Eigenvalues of real matrices carry rounding noise in the imaginary part;
    // treat anything within that noise of the cut as on it.
    Scalar z = eigenvalues(i);
    const double scale = std::max(1.0, eigenvalues.cwiseAbs().maxCoeff());
    if (std::abs(z.imag()) <= 1e-14 * scale) z = Scalar(z.real(), 0.0);
    if (name == "sign_via_invsqrt") {
      if (z.real() == 0.0) throw Error(ErrorKind::FunctionUndefined, "sign undefined at " + describe(z));
      continue;
    }
    if (name == "exp") continue;
    if (name == "inverse") {
      if (std::abs(z) <= 1e-14 * scale) throw Error(ErrorKind::FunctionUndefined, "inverse undefined at " + describe(z));
      continue;
    }
    if (name == "invsqrt" || name == "sqrt" || name == "log") {
      require_off_cut(name, z);
      continue;
    }
    throw Error(ErrorKind::UnknownFunction, std::string(name));
  }
}

std::vector<std::string> function_names() {
  return {"inverse", "invsqrt", "sqrt", "log", "exp", "sign_via_invsqrt"};
}

FunctionSpec function_catalog(std::string_view name) {
  bool known = false;
  for (const auto& n : function_names()) known = known || n == name;
  if (!known) throw Error(ErrorKind::UnknownFunction, "no function named '" + std::string(name) + "'");
  const std::string label(name);
  FunctionSpec spec;
  spec.name = label;
  spec.scalar_f = [label](Scalar z) { return scalar_eval(label, z); };
  spec.dense_f = [label](const DenseMatrix& m) { return dense_eval(label, m); };
  spec.singularity = Scalar(0.0, 0.0);
  spec.has_singularity = label != "exp";
  return spec;
}

}  // namespace rfom
