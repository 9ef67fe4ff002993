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

#include "ganlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ganlab::linalg {

Tensor matmul(const Tensor& a, const Tensor& b, bool trans_a, bool trans_b) {
  const Tensor& ae = trans_a ? transpose(a) : a;
  const Tensor& be = trans_b ? transpose(b) : b;
  if (ae.cols() != be.rows()) {
    throw std::invalid_argument("matmul: inner dimensions do not match");
  }
  Tensor out = Tensor::zeros({ae.rows(), be.cols()});
  for (std::size_t i = 0; i < ae.rows(); ++i) {
    for (std::size_t k = 0; k < ae.cols(); ++k) {
      double av = ae.at(i, k);
      if (av == 0.0) continue;
      for (std::size_t j = 0; j < be.cols(); ++j) {
        out.at(i, j) += av * be.at(k, j);
      }
    }
  }
  return out;
}

Tensor transpose(const Tensor& a) {
  Tensor out = Tensor::zeros({a.cols(), a.rows()});
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out.at(j, i) = a.at(i, j);
  }
  return out;
}

double trace(const Tensor& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("trace: not square");
  double t = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) t += a.at(i, i);
  return t;
}

double frobenius_norm(const Tensor& a) {
  double acc = 0.0;
  for (double v : a.data) acc += v * v;
  return std::sqrt(acc);
}

double max_abs_asymmetry(const Tensor& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("asymmetry: not square");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = i + 1; j < a.cols(); ++j) {
      worst = std::max(worst, std::abs(a.at(i, j) - a.at(j, i)));
    }
  }
  return worst;
}

SymEigen sym_eigen(const Tensor& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("sym_eigen: not square");
  const std::size_t d = m.rows();
  Tensor a = m;
  Tensor v = Tensor::zeros({d, d});
  for (std::size_t i = 0; i < d; ++i) v.at(i, i) = 1.0;

  // Sweep until all off-diagonal mass is negligible relative to the matrix.
  double scale = frobenius_norm(m);
  if (scale == 0.0) scale = 1.0;
  const double tol = 1e-15 * scale;
  for (int sweep = 0; sweep < 128; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) off += a.at(p, q) * a.at(p, q);
    }
    if (std::sqrt(2.0 * off) <= tol) break;
    for (std::size_t p = 0; p < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) {
        double apq = a.at(p, q);
        if (std::abs(apq) <= tol / static_cast<double>(d * d)) continue;
        double app = a.at(p, p), aqq = a.at(q, q);
        double theta = 0.5 * (aqq - app) / apq;
        double t = (theta >= 0.0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (std::size_t k = 0; k < d; ++k) {
          double akp = a.at(k, p), akq = a.at(k, q);
          a.at(k, p) = c * akp - s * akq;
          a.at(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < d; ++k) {
          double apk = a.at(p, k), aqk = a.at(q, k);
          a.at(p, k) = c * apk - s * aqk;
          a.at(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < d; ++k) {
          double vkp = v.at(k, p), vkq = v.at(k, q);
          v.at(k, p) = c * vkp - s * vkq;
          v.at(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return a.at(x, x) > a.at(y, y); });

  SymEigen out;
  out.values = Tensor::zeros({d});
  out.vectors = Tensor::zeros({d, d});
  for (std::size_t k = 0; k < d; ++k) {
    out.values.data[k] = a.at(order[k], order[k]);
    for (std::size_t i = 0; i < d; ++i) out.vectors.at(i, k) = v.at(i, order[k]);
  }
  return out;
}

}  // namespace ganlab::linalg
