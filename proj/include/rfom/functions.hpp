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

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "rfom/core.hpp"

namespace rfom {

struct FunctionSpec {
  std::string name;
  std::function<Scalar(Scalar)> scalar_f;
  std::function<DenseMatrix(const DenseMatrix&)> dense_f;
  Scalar singularity{0.0, 0.0};
  // False for entire functions such as exp; contours then need not avoid anything.
  bool has_singularity = true;
};

// inverse, invsqrt, sqrt, log, exp, sign_via_invsqrt. The last one evaluates
// sign(z) = z (z^2)^{-1/2}; drivers realize it as invsqrt of A^2 applied to A b.
FunctionSpec function_catalog(std::string_view name);

std::vector<std::string> function_names();

// Throws FunctionUndefined when some eigenvalue sits where f is not analytic.
void check_domain(std::string_view name, const Vector& eigenvalues);

}  // namespace rfom
