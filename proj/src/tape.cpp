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

#include "ganlab/tape.hpp"

#include <algorithm>
#include <cmath>

namespace ganlab::ad {

namespace {

// Denominator guard: division never produces a non-finite value from finite
// inputs. The clamp point is far below anything a sane graph produces.
constexpr double kDivGuard = 1e-150;

double guarded_denominator(double b) {
  if (b >= 0.0) return b < kDivGuard ? kDivGuard : b;
  return b > -kDivGuard ? -kDivGuard : b;
}

double logistic_stable(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

void matmul_into(const Tensor& a, const Tensor& b, bool ta, bool tb, Tensor& out) {
  const std::size_t m = ta ? a.cols() : a.rows();
  const std::size_t k = ta ? a.rows() : a.cols();
  const std::size_t kb = tb ? b.cols() : b.rows();
  const std::size_t n = tb ? b.rows() : b.cols();
  if (k != kb) {
    throw std::invalid_argument("matmul: inner dimensions " + a.shape_string() +
                                " x " + b.shape_string() + " do not match");
  }
  out = Tensor::zeros({m, n});
  const double* ap = a.data.data();
  const double* bp = b.data.data();
  double* op = out.data.data();
  if (!ta && !tb) {
    // i-k-j order keeps the inner loop contiguous in both b and out.
    const std::size_t an = a.cols(), bn = b.cols();
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t kk = 0; kk < k; ++kk) {
        const double av = ap[i * an + kk];
        if (av == 0.0) continue;
        const double* brow = bp + kk * bn;
        double* orow = op + i * n;
        for (std::size_t j = 0; j < n; ++j) orow[j] += av * brow[j];
      }
    }
  } else if (ta && !tb) {
    const std::size_t an = a.cols(), bn = b.cols();
    for (std::size_t kk = 0; kk < k; ++kk) {
      const double* arow = ap + kk * an;
      const double* brow = bp + kk * bn;
      for (std::size_t i = 0; i < m; ++i) {
        const double av = arow[i];
        if (av == 0.0) continue;
        double* orow = op + i * n;
        for (std::size_t j = 0; j < n; ++j) orow[j] += av * brow[j];
      }
    }
  } else if (!ta && tb) {
    const std::size_t an = a.cols(), bn = b.cols();
    for (std::size_t i = 0; i < m; ++i) {
      const double* arow = ap + i * an;
      for (std::size_t j = 0; j < n; ++j) {
        const double* brow = bp + j * bn;
        double acc = 0.0;
        for (std::size_t kk = 0; kk < k; ++kk) acc += arow[kk] * brow[kk];
        op[i * n + j] = acc;
      }
    }
  } else {  // ta && tb
    const std::size_t an = a.cols(), bn = b.cols();
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t kk = 0; kk < k; ++kk) {
        const double av = ap[kk * an + i];
        if (av == 0.0) continue;
        double* orow = op + i * n;
        for (std::size_t j = 0; j < n; ++j) orow[j] += av * bp[j * bn + kk];
      }
    }
  }
}

}  // namespace

void Tape::check_id(NodeId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= nodes_.size()) {
    throw std::invalid_argument("Tape: node id out of range");
  }
}

NodeId Tape::emit(Node n) {
  n.value = eval(n);
  nodes_.push_back(std::move(n));
  return static_cast<NodeId>(nodes_.size() - 1);
}

Tensor Tape::eval(const Node& n) const {
  auto bin_same_shape = [&](const char* name) -> std::pair<const Tensor*, const Tensor*> {
    const Tensor& a = nodes_[n.a].value;
    const Tensor& b = nodes_[n.b].value;
    if (!a.same_shape(b)) {
      throw std::invalid_argument(std::string(name) + ": shape mismatch " +
                                  a.shape_string() + " vs " + b.shape_string());
    }
    return {&a, &b};
  };

  switch (n.op) {
    case Op::kConstant:
      return n.value;
    case Op::kAdd: {
      auto [a, b] = bin_same_shape("add");
      Tensor out = *a;
      for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] += b->data[i];
      return out;
    }
    case Op::kSub: {
      auto [a, b] = bin_same_shape("sub");
      Tensor out = *a;
      for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] -= b->data[i];
      return out;
    }
    case Op::kMul: {
      auto [a, b] = bin_same_shape("mul");
      Tensor out = *a;
      for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] *= b->data[i];
      return out;
    }
    case Op::kDiv: {
      auto [a, b] = bin_same_shape("div");
      Tensor out = *a;
      for (std::size_t i = 0; i < out.data.size(); ++i) {
        out.data[i] /= guarded_denominator(b->data[i]);
      }
      return out;
    }
    case Op::kMatMul: {
      Tensor out;
      matmul_into(nodes_[n.a].value, nodes_[n.b].value, n.trans_a, n.trans_b, out);
      return out;
    }
    case Op::kRelu: {
      Tensor out = nodes_[n.a].value;
      for (double& v : out.data) v = v > 0.0 ? v : 0.0;
      return out;
    }
    case Op::kReluMask: {
      Tensor out = nodes_[n.a].value;
      for (double& v : out.data) v = v > 0.0 ? 1.0 : 0.0;
      return out;
    }
    case Op::kLogistic: {
      Tensor out = nodes_[n.a].value;
      for (double& v : out.data) v = logistic_stable(v);
      return out;
    }
    case Op::kLog: {
      Tensor out = nodes_[n.a].value;
      for (double& v : out.data) {
        if (v <= 0.0) throw std::domain_error("log: non-positive input");
        v = std::log(v);
      }
      return out;
    }
    case Op::kSum: {
      double acc = 0.0;
      for (double v : nodes_[n.a].value.data) acc += v;
      return Tensor::scalar(acc);
    }
    case Op::kMean: {
      const Tensor& a = nodes_[n.a].value;
      double acc = 0.0;
      for (double v : a.data) acc += v;
      return Tensor::scalar(acc / static_cast<double>(a.numel()));
    }
    case Op::kRowSum: {
      const Tensor& a = nodes_[n.a].value;
      Tensor out = Tensor::zeros({a.rows(), 1});
      for (std::size_t i = 0; i < a.rows(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) acc += a.at(i, j);
        out.data[i] = acc;
      }
      return out;
    }
    case Op::kColSum: {
      const Tensor& a = nodes_[n.a].value;
      Tensor out = Tensor::zeros({1, a.cols()});
      for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) out.data[j] += a.at(i, j);
      }
      return out;
    }
    case Op::kSquare: {
      Tensor out = nodes_[n.a].value;
      for (double& v : out.data) v *= v;
      return out;
    }
    case Op::kSqrt: {
      Tensor out = nodes_[n.a].value;
      for (double& v : out.data) v = v > 0.0 ? std::sqrt(v) : 0.0;
      return out;
    }
    case Op::kScale: {
      Tensor out = nodes_[n.a].value;
      for (double& v : out.data) v *= n.scalar;
      return out;
    }
    case Op::kBroadcastRow: {
      const Tensor& a = nodes_[n.a].value;
      if (a.rank() != 2 || a.rows() != 1) {
        throw std::invalid_argument("broadcast_row: input must be [1,n]");
      }
      Tensor out = Tensor::zeros({n.aux, a.cols()});
      for (std::size_t i = 0; i < n.aux; ++i) {
        std::copy(a.data.begin(), a.data.end(), out.data.begin() + i * a.cols());
      }
      return out;
    }
    case Op::kBroadcastCol: {
      const Tensor& a = nodes_[n.a].value;
      if (a.rank() != 2 || a.cols() != 1) {
        throw std::invalid_argument("broadcast_col: input must be [m,1]");
      }
      Tensor out = Tensor::zeros({a.rows(), n.aux});
      for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < n.aux; ++j) out.at(i, j) = a.data[i];
      }
      return out;
    }
    case Op::kBroadcastScalar: {
      const Tensor& a = nodes_[n.a].value;
      if (!a.is_scalar()) {
        throw std::invalid_argument("broadcast_scalar: input must be scalar");
      }
      return Tensor::full(n.aux_shape, a.data[0]);
    }
  }
  throw std::logic_error("unreachable op");
}

NodeId Tape::constant(Tensor value) {
  Node n;
  n.op = Op::kConstant;
  n.value = std::move(value);
  nodes_.push_back(std::move(n));
  return static_cast<NodeId>(nodes_.size() - 1);
}

#define GANLAB_BINARY(fn, opcode)               \
  NodeId Tape::fn(NodeId a, NodeId b) {         \
    check_id(a);                                \
    check_id(b);                                \
    Node n;                                     \
    n.op = opcode;                              \
    n.a = a;                                    \
    n.b = b;                                    \
    return emit(std::move(n));                  \
  }

GANLAB_BINARY(add, Op::kAdd)
GANLAB_BINARY(sub, Op::kSub)
GANLAB_BINARY(mul, Op::kMul)
GANLAB_BINARY(div, Op::kDiv)
#undef GANLAB_BINARY

#define GANLAB_UNARY(fn, opcode)   \
  NodeId Tape::fn(NodeId a) {      \
    check_id(a);                   \
    Node n;                        \
    n.op = opcode;                 \
    n.a = a;                       \
    return emit(std::move(n));     \
  }

GANLAB_UNARY(relu, Op::kRelu)
GANLAB_UNARY(relu_mask, Op::kReluMask)
GANLAB_UNARY(logistic, Op::kLogistic)
GANLAB_UNARY(log, Op::kLog)
GANLAB_UNARY(sum, Op::kSum)
GANLAB_UNARY(mean, Op::kMean)
GANLAB_UNARY(row_sum, Op::kRowSum)
GANLAB_UNARY(col_sum, Op::kColSum)
GANLAB_UNARY(square, Op::kSquare)
GANLAB_UNARY(sqrt, Op::kSqrt)
#undef GANLAB_UNARY

NodeId Tape::matmul(NodeId a, NodeId b, bool trans_a, bool trans_b) {
  check_id(a);
  check_id(b);
  Node n;
  n.op = Op::kMatMul;
  n.a = a;
  n.b = b;
  n.trans_a = trans_a;
  n.trans_b = trans_b;
  return emit(std::move(n));
}

NodeId Tape::scale(NodeId x, double c) {
  check_id(x);
  Node n;
  n.op = Op::kScale;
  n.a = x;
  n.scalar = c;
  return emit(std::move(n));
}

NodeId Tape::broadcast_row(NodeId x, std::size_t m) {
  check_id(x);
  Node n;
  n.op = Op::kBroadcastRow;
  n.a = x;
  n.aux = m;
  return emit(std::move(n));
}

NodeId Tape::broadcast_col(NodeId x, std::size_t ncols) {
  check_id(x);
  Node n;
  n.op = Op::kBroadcastCol;
  n.a = x;
  n.aux = ncols;
  return emit(std::move(n));
}

NodeId Tape::broadcast_scalar(NodeId x, std::vector<std::size_t> shape) {
  check_id(x);
  Node n;
  n.op = Op::kBroadcastScalar;
  n.a = x;
  n.aux_shape = std::move(shape);
  return emit(std::move(n));
}

NodeId Tape::clamp_min(NodeId x, double c) {
  NodeId floor = constant(Tensor::full(value(x).shape, c));
  return add(relu(sub(x, floor)), floor);
}

NodeId Tape::l2norm_rows(NodeId x) { return sqrt(row_sum(square(x))); }

NodeId Tape::affine(NodeId x, NodeId w, NodeId b) {
  NodeId prod = matmul(x, w);
  return add(prod, broadcast_row(b, value(prod).rows()));
}

std::vector<NodeId> Tape::gradient(NodeId output, std::span<const NodeId> wrt) {
  check_id(output);
  for (NodeId w : wrt) check_id(w);
  if (!value(output).is_scalar()) {
    throw std::invalid_argument("gradient: output is not a scalar");
  }

  // Descending id order is reverse topological order: inputs always have
  // strictly smaller ids than the nodes that consume them.
  const std::size_t frontier = static_cast<std::size_t>(output) + 1;
  std::vector<NodeId> adj(frontier, kNoNode);
  adj[output] = constant(Tensor::full(value(output).shape, 1.0));

  auto accumulate = [&](NodeId target, NodeId contribution) {
    if (target == kNoNode) return;
    adj[target] = adj[target] == kNoNode ? contribution : add(adj[target], contribution);
  };

  for (NodeId id = output; id >= 0; --id) {
    if (adj[id] == kNoNode) continue;
    // Copy the metadata: emitting backward nodes may reallocate nodes_.
    const Node meta = [&] {
      Node m;
      const Node& src = nodes_[id];
      m.op = src.op;
      m.a = src.a;
      m.b = src.b;
      m.trans_a = src.trans_a;
      m.trans_b = src.trans_b;
      m.scalar = src.scalar;
      m.aux = src.aux;
      return m;
    }();
    const NodeId g = adj[id];

    switch (meta.op) {
      case Op::kConstant:
        break;
      case Op::kAdd:
        accumulate(meta.a, g);
        accumulate(meta.b, g);
        break;
      case Op::kSub:
        accumulate(meta.a, g);
        accumulate(meta.b, scale(g, -1.0));
        break;
      case Op::kMul:
        accumulate(meta.a, mul(g, meta.b));
        accumulate(meta.b, mul(g, meta.a));
        break;
      case Op::kDiv: {
        NodeId da = div(g, meta.b);
        accumulate(meta.a, da);
        // d/db (a/b) = -(a/b)/b
        accumulate(meta.b, scale(div(mul(g, id), meta.b), -1.0));
        break;
      }
      case Op::kMatMul: {
        const bool ta = meta.trans_a, tb = meta.trans_b;
        // With A' = T(A, ta), B' = T(B, tb) and C = A'B':
        //   dA = ta ? B'g^T : g B'^T,  dB = tb ? g^T A' : A'^T g
        NodeId da = ta ? matmul(meta.b, g, tb, true) : matmul(g, meta.b, false, !tb);
        NodeId db = tb ? matmul(g, meta.a, true, ta) : matmul(meta.a, g, !ta, false);
        accumulate(meta.a, da);
        accumulate(meta.b, db);
        break;
      }
      case Op::kRelu:
        accumulate(meta.a, mul(g, relu_mask(meta.a)));
        break;
      case Op::kReluMask:
        // Piecewise constant: zero gradient almost everywhere.
        break;
      case Op::kLogistic: {
        // s(1-s) expressed through the forward output node `id`.
        NodeId ones = constant(Tensor::full(value(id).shape, 1.0));
        accumulate(meta.a, mul(g, mul(id, sub(ones, id))));
        break;
      }
      case Op::kLog:
        accumulate(meta.a, div(g, meta.a));
        break;
      case Op::kSum:
        accumulate(meta.a, broadcast_scalar(g, value(meta.a).shape));
        break;
      case Op::kMean: {
        double inv_n = 1.0 / static_cast<double>(value(meta.a).numel());
        accumulate(meta.a, scale(broadcast_scalar(g, value(meta.a).shape), inv_n));
        break;
      }
      case Op::kRowSum:
        accumulate(meta.a, broadcast_col(g, value(meta.a).cols()));
        break;
      case Op::kColSum:
        accumulate(meta.a, broadcast_row(g, value(meta.a).rows()));
        break;
      case Op::kSquare:
        accumulate(meta.a, mul(g, scale(meta.a, 2.0)));
        break;
      case Op::kSqrt:
        // d sqrt = g / (2 sqrt(x)); the div guard covers the x = 0 kink.
        accumulate(meta.a, div(g, scale(id, 2.0)));
        break;
      case Op::kScale:
        accumulate(meta.a, scale(g, meta.scalar));
        break;
      case Op::kBroadcastRow:
        accumulate(meta.a, col_sum(g));
        break;
      case Op::kBroadcastCol:
        accumulate(meta.a, row_sum(g));
        break;
      case Op::kBroadcastScalar:
        accumulate(meta.a, sum(g));
        break;
    }
  }

  std::vector<NodeId> result;
  result.reserve(wrt.size());
  for (NodeId w : wrt) {
    NodeId gw = static_cast<std::size_t>(w) < frontier ? adj[w] : kNoNode;
    if (gw == kNoNode) gw = constant(Tensor::zeros(value(w).shape));
    result.push_back(gw);
  }
  return result;
}

NodeId Tape::input_gradient(NodeId per_row_output, NodeId input) {
  check_id(per_row_output);
  check_id(input);
  if (!depends_on(per_row_output, input)) {
    throw std::invalid_argument("input_gradient: output does not depend on input");
  }
  NodeId total = sum(per_row_output);
  NodeId wrt[] = {input};
  return gradient(total, wrt)[0];
}

bool Tape::depends_on(NodeId node, NodeId target) const {
  check_id(node);
  check_id(target);
  if (node == target) return true;
  std::vector<NodeId> stack{node};
  std::vector<bool> seen(nodes_.size(), false);
  while (!stack.empty()) {
    NodeId id = stack.back();
    stack.pop_back();
    if (id == kNoNode || id < target || seen[id]) continue;
    seen[id] = true;
    if (id == target) return true;
    stack.push_back(nodes_[id].a);
    stack.push_back(nodes_[id].b);
  }
  return false;
}

void Tape::replay() {
  for (Node& n : nodes_) {
    if (n.op != Op::kConstant) n.value = eval(n);
  }
}

std::vector<std::uint8_t> Tape::guard_signature() const {
  std::vector<std::uint8_t> sig;
  for (const Node& n : nodes_) {
    switch (n.op) {
      case Op::kRelu:
      case Op::kReluMask:
      case Op::kSqrt:
        for (double v : nodes_[n.a].value.data) sig.push_back(v > 0.0 ? 1 : 0);
        break;
      case Op::kDiv:
        for (double v : nodes_[n.b].value.data) sig.push_back(v > 0.0 ? 1 : 0);
        break;
      default:
        break;
    }
  }
  return sig;
}

FdReport finite_diff_check(const ScalarGraphFn& f, const Tensor& x, double step) {
  Tape tape;
  NodeId leaf = tape.constant(x);
  NodeId out = f(tape, leaf);
  if (!tape.value(out).is_scalar()) {
    throw std::invalid_argument("finite_diff_check: f must return a scalar");
  }
  NodeId wrt[] = {leaf};
  Tensor analytic = tape.value(tape.gradient(out, wrt)[0]);

  auto probe = [&](const Tensor& point, std::vector<std::uint8_t>& sig) {
    Tape t;
    NodeId l = t.constant(point);
    NodeId o = f(t, l);
    sig = t.guard_signature();
    return t.value(o).value();
  };

  FdReport report;
  Tensor plus = x, minus = x;
  for (std::size_t i = 0; i < x.numel(); ++i) {
    plus.data[i] = x.data[i] + step;
    minus.data[i] = x.data[i] - step;
    std::vector<std::uint8_t> sig_plus, sig_minus;
    double f_plus = probe(plus, sig_plus);
    double f_minus = probe(minus, sig_minus);
    plus.data[i] = x.data[i];
    minus.data[i] = x.data[i];
    if (sig_plus != sig_minus) {
      // The perturbation crossed a kink; the central difference is invalid.
      ++report.excluded;
      continue;
    }
    double central = (f_plus - f_minus) / (2.0 * step);
    double rel = std::abs(analytic.data[i] - central) /
                 std::max(std::abs(analytic.data[i]), 1e-8);
    report.max_rel_error = std::max(report.max_rel_error, rel);
    ++report.compared;
  }
  return report;
}

}  // namespace ganlab::ad
