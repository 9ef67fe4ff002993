// Copyright 2026 The ganlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "ganlab/tensor.hpp"

namespace ganlab::linalg {

Tensor matmul(const Tensor& a, const Tensor& b, bool trans_a = false,
              bool trans_b = false);
Tensor transpose(const Tensor& a);
double trace(const Tensor& a);
double frobenius_norm(const Tensor& a);
double max_abs_asymmetry(const Tensor& a);

struct SymEigen {
  Tensor values;   // [d], descending
  Tensor vectors;  // [d,d], column k pairs with values[k]
};

// Cyclic Jacobi eigendecomposition of a symmetric matrix. Plenty for the
// small, dense covariances this project works with (d <= 64 or so).
SymEigen sym_eigen(const Tensor& m);

}  // namespace ganlab::linalg
