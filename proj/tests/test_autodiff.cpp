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

#include <cmath>

#include <gtest/gtest.h>

#include "ganlab/rng.hpp"
#include "ganlab/tape.hpp"

namespace ganlab {
namespace {

using ad::NodeId;
using ad::Tape;

TEST(TapeForward, PointwiseExamples) {
  Tape tape;
  EXPECT_DOUBLE_EQ(tape.value(tape.logistic(tape.constant(Tensor::scalar(0.0)))).value(),
                   0.5);
  EXPECT_DOUBLE_EQ(tape.value(tape.relu(tape.constant(Tensor::scalar(-2.0)))).value(),
                   0.0);
  EXPECT_DOUBLE_EQ(tape.value(tape.log(tape.constant(Tensor::scalar(1.0)))).value(), 0.0);
}

TEST(TapeForward, LogRejectsNonPositive) {
  Tape tape;
  EXPECT_THROW(tape.log(tape.constant(Tensor::scalar(0.0))), std::domain_error);
  EXPECT_THROW(tape.log(tape.constant(Tensor::scalar(-1.0))), std::domain_error);
  // The guarded composite is the loss-side spelling of the same op.
  NodeId guarded = tape.log(tape.clamp_min(tape.constant(Tensor::scalar(0.0)), 1e-12));
  EXPECT_DOUBLE_EQ(tape.value(guarded).value(), std::log(1e-12));
}

TEST(TapeForward, ShapeMismatchThrows) {
  Tape tape;
  NodeId a = tape.constant(Tensor::zeros({2, 3}));
  NodeId b = tape.constant(Tensor::zeros({3, 2}));
  EXPECT_THROW(tape.add(a, b), std::invalid_argument);
  EXPECT_THROW(tape.matmul(a, b, true, false), std::invalid_argument);
}

TEST(TapeGradient, SquareAtThree) {
  Tape tape;
  NodeId x = tape.constant(Tensor::scalar(3.0));
  NodeId y = tape.sum(tape.square(x));
  NodeId wrt[] = {x};
  EXPECT_DOUBLE_EQ(tape.value(tape.gradient(y, wrt)[0]).value(), 6.0);
}

TEST(TapeGradient, LogisticDerivativeAtZero) {
  Tape tape;
  NodeId x = tape.constant(Tensor::scalar(0.0));
  NodeId y = tape.sum(tape.logistic(x));
  NodeId wrt[] = {x};
  EXPECT_DOUBLE_EQ(tape.value(tape.gradient(y, wrt)[0]).value(), 0.25);
}

TEST(TapeGradient, RejectsNonScalarOutput) {
  Tape tape;
  NodeId x = tape.constant(Tensor::zeros({2, 2}));
  NodeId y = tape.square(x);
  NodeId wrt[] = {x};
  EXPECT_THROW(tape.gradient(y, wrt), std::invalid_argument);
}

// Random 2-4-1 ReLU network; gradient with respect to the input checked
// against central differences.
TEST(TapeGradient, SmallReluNetMatchesFiniteDifferences) {
  Rng rng(20260808);
  for (int trial = 0; trial < 10; ++trial) {
    Tensor w1 = rng.normal_tensor({2, 4}, 0.0, 1.0);
    Tensor b1 = rng.normal_tensor({1, 4}, 0.0, 0.5);
    Tensor w2 = rng.normal_tensor({4, 1}, 0.0, 1.0);
    Tensor x = rng.normal_tensor({1, 2}, 0.0, 1.0);
    auto f = [&](Tape& t, NodeId leaf) {
      NodeId hidden = t.relu(t.affine(leaf, t.constant(w1), t.constant(b1)));
      return t.sum(t.matmul(hidden, t.constant(w2)));
    };
    ad::FdReport report = ad::finite_diff_check(f, x, 1e-5);
    EXPECT_GT(report.compared, 0u);
    EXPECT_LT(report.max_rel_error, 1e-5);
  }
}

TEST(TapeGradient, LinearityOnRandomGraphs) {
  Rng rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    Tape tape;
    NodeId x = tape.constant(rng.normal_tensor({3, 2}, 0.0, 1.0));
    NodeId f = tape.mean(tape.square(x));
    NodeId g = tape.sum(tape.mul(x, tape.logistic(x)));
    NodeId combined = tape.add(f, g);
    NodeId wrt[] = {x};
    Tensor grad_combined = tape.value(tape.gradient(combined, wrt)[0]);
    Tensor grad_f = tape.value(tape.gradient(f, wrt)[0]);
    Tensor grad_g = tape.value(tape.gradient(g, wrt)[0]);
    for (std::size_t i = 0; i < grad_combined.numel(); ++i) {
      EXPECT_NEAR(grad_combined.data[i], grad_f.data[i] + grad_g.data[i], 1e-12);
    }
  }
}

TEST(TapeGradient, GradientOfDisconnectedNodeIsZero) {
  Tape tape;
  NodeId x = tape.constant(Tensor::scalar(1.0));
  NodeId unrelated = tape.constant(Tensor::zeros({2, 2}));
  NodeId y = tape.sum(tape.square(x));
  NodeId wrt[] = {unrelated};
  Tensor g = tape.value(tape.gradient(y, wrt)[0]);
  for (double v : g.data) EXPECT_DOUBLE_EQ(v, 0.0);
}

TEST(TapeReplay, BitExact) {
  Rng rng(7);
  Tape tape;
  NodeId x = tape.constant(rng.normal_tensor({4, 3}, 0.0, 1.0));
  NodeId w = tape.constant(rng.normal_tensor({3, 2}, 0.0, 1.0));
  NodeId y = tape.mean(tape.logistic(tape.matmul(tape.relu(x), w)));
  NodeId wrt[] = {x, w};
  tape.gradient(y, wrt);

  std::vector<Tensor> before;
  for (std::size_t i = 0; i < tape.size(); ++i) {
    before.push_back(tape.value(static_cast<NodeId>(i)));
  }
  tape.replay();
  for (std::size_t i = 0; i < tape.size(); ++i) {
    ASSERT_EQ(before[i].data, tape.value(static_cast<NodeId>(i)).data) << "node " << i;
  }
}

TEST(InputGradient, LinearDiscriminatorGradientIsWeights) {
  // D(x) = x w + b: the input gradient is w for every x.
  Tensor w = Tensor::matrix(2, 1, {3.0, 4.0});
  Tensor b = Tensor::matrix(1, 1, {0.7});
  Rng rng(5);
  Tensor x = rng.normal_tensor({5, 2}, 0.0, 2.0);

  Tape tape;
  NodeId leaf = tape.constant(x);
  NodeId out = tape.affine(leaf, tape.constant(w), tape.constant(b));
  NodeId grad = tape.input_gradient(out, leaf);
  const Tensor& g = tape.value(grad);
  ASSERT_EQ(g.shape, (std::vector<std::size_t>{5, 2}));
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_DOUBLE_EQ(g.at(i, 0), 3.0);
    EXPECT_DOUBLE_EQ(g.at(i, 1), 4.0);
  }
}

TEST(InputGradient, ThrowsWhenDisconnected) {
  Tape tape;
  NodeId x = tape.constant(Tensor::zeros({2, 2}));
  NodeId y = tape.row_sum(tape.square(tape.constant(Tensor::zeros({2, 2}))));
  EXPECT_THROW(tape.input_gradient(y, x), std::invalid_argument);
}

// Linear D with w = (3,4): ||grad|| = 5, penalty (5-1)^2 = 16, and the
// penalty's own parameter gradient is 2(||w||-1) w/||w|| = (4.8, 6.4).
TEST(InputGradient, PenaltyParameterGradientLinearCase) {
  Tensor w = Tensor::matrix(2, 1, {3.0, 4.0});
  Tensor x = Tensor::matrix(1, 2, {0.3, -1.2});

  auto penalty_of_w = [&](Tape& t, NodeId w_leaf) {
    NodeId x_hat = t.constant(x);
    NodeId out = t.matmul(x_hat, w_leaf);
    NodeId grad = t.input_gradient(out, x_hat);
    NodeId norms = t.l2norm_rows(grad);
    NodeId ones = t.constant(Tensor::full({1, 1}, 1.0));
    return t.mean(t.square(t.sub(norms, ones)));
  };

  Tape tape;
  NodeId w_leaf = tape.constant(w);
  NodeId penalty = penalty_of_w(tape, w_leaf);
  EXPECT_NEAR(tape.value(penalty).value(), 16.0, 1e-12);

  NodeId wrt[] = {w_leaf};
  Tensor dw = tape.value(tape.gradient(penalty, wrt)[0]);
  EXPECT_NEAR(dw.data[0], 4.8, 1e-12);
  EXPECT_NEAR(dw.data[1], 6.4, 1e-12);

  ad::FdReport report = ad::finite_diff_check(penalty_of_w, w, 1e-6);
  EXPECT_LT(report.max_rel_error, 1e-7);
}

TEST(InputGradient, ConstantDiscriminatorPenaltyIsOne) {
  Tape tape;
  Tensor x = Tensor::matrix(3, 2, {1, 2, 3, 4, 5, 6});
  NodeId leaf = tape.constant(x);
  // Zero weights: the output depends on the input structurally but the
  // gradient vanishes, so the penalty sits at (0 - 1)^2.
  NodeId w = tape.constant(Tensor::zeros({2, 1}));
  NodeId out = tape.matmul(leaf, w);
  NodeId grad = tape.input_gradient(out, leaf);
  for (double v : tape.value(grad).data) EXPECT_DOUBLE_EQ(v, 0.0);
  NodeId norms = tape.l2norm_rows(grad);
  NodeId ones = tape.constant(Tensor::full({3, 1}, 1.0));
  NodeId penalty = tape.mean(tape.square(tape.sub(norms, ones)));
  EXPECT_DOUBLE_EQ(tape.value(penalty).value(), 1.0);
}

TEST(FiniteDiffCheck, CubeAtOne) {
  auto cube = [](Tape& t, NodeId x) { return t.sum(t.mul(t.square(x), x)); };
  ad::FdReport report = ad::finite_diff_check(cube, Tensor::scalar(1.0), 1e-4);
  EXPECT_EQ(report.compared, 1u);
  EXPECT_LT(report.max_rel_error, 1e-6);
}

TEST(FiniteDiffCheck, ConstantFunctionZeroError) {
  auto constant = [](Tape& t, NodeId x) {
    NodeId zero = t.scale(t.sum(x), 0.0);
    return t.add(zero, t.constant(Tensor::scalar(4.0)));
  };
  ad::FdReport report = ad::finite_diff_check(constant, Tensor::vec({1.0, 2.0}), 1e-4);
  EXPECT_EQ(report.compared, 2u);
  EXPECT_DOUBLE_EQ(report.max_rel_error, 0.0);
}

TEST(FiniteDiffCheck, ReluKinkIsExcluded) {
  auto f = [](Tape& t, NodeId x) { return t.sum(t.relu(x)); };
  ad::FdReport report = ad::finite_diff_check(f, Tensor::scalar(0.0), 1e-4);
  EXPECT_EQ(report.excluded, 1u);
  EXPECT_EQ(report.compared, 0u);
}

// Every primitive, checked at random smooth points.
TEST(FiniteDiffCheck, AllPrimitivesMatchFiniteDifferences) {
  Rng rng(31337);
  Tensor w = rng.normal_tensor({2, 3}, 0.0, 1.0);     // x [3,2] * w
  Tensor w_tn = rng.normal_tensor({3, 4}, 0.0, 1.0);  // w_tn^T * x
  Tensor w_nt = rng.normal_tensor({4, 2}, 0.0, 1.0);  // w_nt * x^T

  std::vector<std::pair<const char*, ad::ScalarGraphFn>> cases = {
      {"add", [&](Tape& t, NodeId x) { return t.sum(t.add(x, t.square(x))); }},
      {"sub", [&](Tape& t, NodeId x) { return t.sum(t.sub(t.square(x), x)); }},
      {"mul", [&](Tape& t, NodeId x) { return t.sum(t.mul(x, t.logistic(x))); }},
      {"div",
       [&](Tape& t, NodeId x) {
         NodeId denom = t.clamp_min(t.square(x), 0.5);
         return t.sum(t.div(x, denom));
       }},
      {"matmul", [&](Tape& t, NodeId x) { return t.sum(t.matmul(x, t.constant(w))); }},
      {"matmul_tn",
       [&](Tape& t, NodeId x) {
         return t.sum(t.matmul(t.constant(w_tn), x, true, false));
       }},
      {"matmul_nt",
       [&](Tape& t, NodeId x) {
         return t.sum(t.matmul(t.constant(w_nt), x, false, true));
       }},
      {"relu", [&](Tape& t, NodeId x) { return t.sum(t.relu(x)); }},
      {"logistic", [&](Tape& t, NodeId x) { return t.sum(t.logistic(x)); }},
      {"log",
       [&](Tape& t, NodeId x) { return t.sum(t.log(t.clamp_min(t.square(x), 0.3))); }},
      {"mean", [&](Tape& t, NodeId x) { return t.mean(t.square(x)); }},
      {"row_sum", [&](Tape& t, NodeId x) { return t.sum(t.row_sum(t.square(x))); }},
      {"col_sum", [&](Tape& t, NodeId x) { return t.sum(t.col_sum(t.square(x))); }},
      {"sqrt",
       [&](Tape& t, NodeId x) { return t.sum(t.sqrt(t.clamp_min(t.square(x), 0.2))); }},
      {"scale", [&](Tape& t, NodeId x) { return t.sum(t.scale(x, -2.5)); }},
      {"l2norm_rows", [&](Tape& t, NodeId x) { return t.sum(t.l2norm_rows(x)); }},
      {"broadcast_chain",
       [&](Tape& t, NodeId x) {
         NodeId rows = t.row_sum(x);  // [m,1]
         NodeId cols = t.col_sum(x);  // [1,n]
         NodeId back = t.mul(t.broadcast_col(rows, 2), t.broadcast_row(cols, 3));
         return t.mean(back);
       }},
  };

  for (auto& [name, fn] : cases) {
    int compared = 0;
    double worst = 0.0;
    for (int pt = 0; pt < 100; ++pt) {
      Tensor x = rng.normal_tensor({3, 2}, 0.0, 1.0);
      ad::FdReport report = ad::finite_diff_check(fn, x, 1e-6);
      compared += static_cast<int>(report.compared);
      worst = std::max(worst, report.max_rel_error);
    }
    EXPECT_GT(compared, 400) << name;
    EXPECT_LT(worst, 1e-5) << name;
  }
}

// The double-backprop property the gradient penalty relies on: the
// parameter gradient of a term that itself contains an input gradient
// matches finite differences of that term.
TEST(DoubleBackprop, PenaltyParameterGradientsMatchFiniteDifferences) {
  Rng rng(424242);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t d = 3, h = 5, m = 4;
    Tensor w1 = rng.normal_tensor({d, h}, 0.0, 0.8);
    Tensor b1 = rng.normal_tensor({1, h}, 0.0, 0.3);
    Tensor w2 = rng.normal_tensor({h, 1}, 0.0, 0.8);
    Tensor b2 = rng.normal_tensor({1, 1}, 0.0, 0.3);
    Tensor x_hat = rng.normal_tensor({m, d}, 0.0, 1.0);

    // Penalty as a function of one parameter tensor at a time.
    auto check_param = [&](const Tensor& which, auto rebuild) {
      ad::FdReport report = ad::finite_diff_check(
          [&](Tape& t, NodeId leaf) {
            NodeId x = t.constant(x_hat);
            NodeId out = rebuild(t, leaf, x);
            NodeId prob = t.logistic(out);
            NodeId grad = t.input_gradient(prob, x);
            NodeId norms = t.l2norm_rows(grad);
            NodeId ones = t.constant(Tensor::full({m, 1}, 1.0));
            return t.mean(t.square(t.sub(norms, ones)));
          },
          which, 1e-6);
      EXPECT_GT(report.compared, 0u);
      EXPECT_LT(report.max_rel_error, 1e-4);
    };

    check_param(w1, [&](Tape& t, NodeId leaf, NodeId x) {
      NodeId hidden = t.relu(t.affine(x, leaf, t.constant(b1)));
      return t.affine(hidden, t.constant(w2), t.constant(b2));
    });
    check_param(w2, [&](Tape& t, NodeId leaf, NodeId x) {
      NodeId hidden = t.relu(t.affine(x, t.constant(w1), t.constant(b1)));
      return t.affine(hidden, leaf, t.constant(b2));
    });
    check_param(b1, [&](Tape& t, NodeId leaf, NodeId x) {
      NodeId hidden = t.relu(t.affine(x, t.constant(w1), leaf));
      return t.affine(hidden, t.constant(w2), t.constant(b2));
    });
    check_param(b2, [&](Tape& t, NodeId leaf, NodeId x) {
      NodeId hidden = t.relu(t.affine(x, t.constant(w1), t.constant(b1)));
      return t.affine(hidden, t.constant(w2), leaf);
    });
  }
}

}  // namespace
}  // namespace ganlab
