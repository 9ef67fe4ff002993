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

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ganlab/tensor.hpp"

namespace ganlab::ad {

using NodeId = std::int32_t;
inline constexpr NodeId kNoNode = -1;

enum class Op : std::uint8_t {
  kConstant,
  kAdd,
  kSub,
  kMul,   // elementwise
  kDiv,   // elementwise; denominator magnitude clamped to >= 1e-150
  kMatMul,
  kRelu,
  kReluMask,  // 1 where input > 0 else 0; carries no gradient
  kLogistic,
  kLog,   // true log; throws on non-positive input (call clamp_min first)
  kSum,   // all elements -> scalar
  kMean,  // all elements -> scalar
  kRowSum,  // [m,n] -> [m,1]
  kColSum,  // [m,n] -> [1,n]
  kSquare,
  kSqrt,  // forward sqrt(max(x,0))
  kScale,
  kBroadcastRow,     // [1,n] -> [m,n]
  kBroadcastCol,     // [m,1] -> [m,n]
  kBroadcastScalar,  // scalar -> arbitrary shape
};

struct Node {
  Op op = Op::kConstant;
  NodeId a = kNoNode;
  NodeId b = kNoNode;
  bool trans_a = false;  // matmul only
  bool trans_b = false;
  double scalar = 0.0;  // scale factor
  std::size_t aux = 0;  // broadcast target rows/cols
  std::vector<std::size_t> aux_shape;  // broadcast-scalar target shape
  Tensor value;
};

// Result of comparing analytic gradients against central finite differences.
// Coordinates whose perturbed evaluations cross a relu/sqrt/div kink are
// excluded rather than compared.
struct FdReport {
  double max_rel_error = 0.0;
  std::size_t compared = 0;
  std::size_t excluded = 0;
};

// Append-only computation graph with eager forward evaluation.
//
// The distinguishing feature is that gradient() emits its result as new
// graph nodes built from the same primitive set, so a gradient is itself
// differentiable. That is what lets the gradient-norm penalty, which
// contains an input gradient of the discriminator, be differentiated a
// second time with respect to the discriminator parameters.
//
// A tape is single-threaded; concurrent experiments each own their own.
class Tape {
 public:
  NodeId constant(Tensor value);

  NodeId add(NodeId a, NodeId b);
  NodeId sub(NodeId a, NodeId b);
  NodeId mul(NodeId a, NodeId b);
  NodeId div(NodeId a, NodeId b);
  NodeId matmul(NodeId a, NodeId b, bool trans_a = false, bool trans_b = false);
  NodeId relu(NodeId x);
  NodeId relu_mask(NodeId x);
  NodeId logistic(NodeId x);
  NodeId log(NodeId x);
  NodeId sum(NodeId x);
  NodeId mean(NodeId x);
  NodeId row_sum(NodeId x);
  NodeId col_sum(NodeId x);
  NodeId square(NodeId x);
  NodeId sqrt(NodeId x);
  NodeId scale(NodeId x, double c);
  NodeId broadcast_row(NodeId x, std::size_t m);
  NodeId broadcast_col(NodeId x, std::size_t n);
  NodeId broadcast_scalar(NodeId x, std::vector<std::size_t> shape);

  // Composites.
  NodeId clamp_min(NodeId x, double c);  // relu(x - c) + c
  NodeId l2norm_rows(NodeId x);          // sqrt(rowsum(square(x))), [m,n] -> [m,1]
  NodeId affine(NodeId x, NodeId w, NodeId b);  // x*w + b broadcast over rows

  const Tensor& value(NodeId id) const { return nodes_[id].value; }
  const Node& node(NodeId id) const { return nodes_[id]; }
  std::size_t size() const { return nodes_.size(); }
  void clear() { nodes_.clear(); }
  void reserve(std::size_t n) { nodes_.reserve(n); }

  // Reverse-mode gradients of a scalar output with respect to each node in
  // `wrt`. The returned gradients are nodes appended to this tape. Nodes the
  // output does not depend on get zero-valued constants.
  std::vector<NodeId> gradient(NodeId output, std::span<const NodeId> wrt);

  // Gradient of a per-row scalar output [m,1] (or [m]) with respect to the
  // input batch it was computed from; returns an [m,d] node where row i is
  // the gradient of output row i. Valid because row i of the output depends
  // only on row i of the input. Throws if there is no dependence at all.
  NodeId input_gradient(NodeId per_row_output, NodeId input);

  bool depends_on(NodeId node, NodeId target) const;

  // Recomputes every node value from the leaves in id order. Replay is
  // bit-exact: the same code path evaluates each op as at emission time.
  void replay();

  // One byte per nonsmooth decision made during forward evaluation (relu
  // sign, sqrt positivity, div denominator sign). Two evaluations with equal
  // signatures took the same smooth branch everywhere.
  std::vector<std::uint8_t> guard_signature() const;

 private:
  NodeId emit(Node n);
  Tensor eval(const Node& n) const;
  void check_id(NodeId id) const;

  std::vector<Node> nodes_;
};

// Builds a scalar graph from a leaf node bound to `x`; used by
// finite_diff_check to evaluate the same function at perturbed points.
using ScalarGraphFn = std::function<NodeId(Tape&, NodeId)>;

// Compares the tape's analytic gradient of f at x against central finite
// differences with the given step. Relative error per coordinate is
// |analytic - central| / max(|analytic|, 1e-8).
FdReport finite_diff_check(const ScalarGraphFn& f, const Tensor& x, double step);

}  // namespace ganlab::ad
