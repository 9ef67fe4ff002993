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

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "ganlab/linalg.hpp"
#include "ganlab/rng.hpp"
#include "ganlab/synth.hpp"

namespace ganlab {
namespace {

using models::GaussianMoments;
using synth::TaskSpec;

// ---------------------------------------------------------------------------
// Independent oracle path: the same Frechet formula coded against Eigen's
// eigensolver instead of the library's Jacobi routine.

Eigen::MatrixXd to_eigen(const Tensor& t) {
  Eigen::MatrixXd m(t.rows(), t.cols());
  for (std::size_t i = 0; i < t.rows(); ++i) {
    for (std::size_t j = 0; j < t.cols(); ++j) m(i, j) = t.at(i, j);
  }
  return m;
}

Eigen::MatrixXd eigen_psd_sqrt(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  Eigen::VectorXd values = solver.eigenvalues();
  for (int i = 0; i < values.size(); ++i) {
    values(i) = values(i) > 0.0 ? std::sqrt(values(i)) : 0.0;
  }
  return solver.eigenvectors() * values.asDiagonal() * solver.eigenvectors().transpose();
}

double frechet_squared_oracle(const GaussianMoments& p, const GaussianMoments& q) {
  Eigen::MatrixXd cov_p = to_eigen(p.cov), cov_q = to_eigen(q.cov);
  Eigen::VectorXd mu_p(p.mu.numel()), mu_q(q.mu.numel());
  for (std::size_t i = 0; i < p.mu.numel(); ++i) {
    mu_p(i) = p.mu.data[i];
    mu_q(i) = q.mu.data[i];
  }
  Eigen::MatrixXd root_p = eigen_psd_sqrt(cov_p);
  Eigen::MatrixXd cross = eigen_psd_sqrt(root_p * cov_q * root_p);
  double value = (mu_p - mu_q).squaredNorm() +
                 (cov_p + cov_q - 2.0 * cross).trace();
  return value > 0.0 ? value : 0.0;
}

GaussianMoments random_moments(Rng& rng, std::size_t d, std::size_t rank) {
  GaussianMoments m;
  m.mu = rng.normal_tensor({d}, 0.0, 2.0);
  Tensor a = rng.normal_tensor({rank, d}, 0.0, 1.0);
  m.cov = linalg::matmul(a, a, /*trans_a=*/true, /*trans_b=*/false);
  return m;
}

// ---------------------------------------------------------------------------

TEST(MakeTask, DeterministicAndShaped) {
  TaskSpec a = synth::make_task(11, 2, 1.0);
  TaskSpec b = synth::make_task(11, 2, 1.0);
  EXPECT_EQ(a.w_r.data, b.w_r.data);
  EXPECT_EQ(a.b_r.data, b.b_r.data);
  EXPECT_EQ(a.w_r.shape, (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(a.b_r.shape, (std::vector<std::size_t>{1, 2}));
  TaskSpec c = synth::make_task(12, 2, 1.0);
  EXPECT_NE(a.w_r.data, c.w_r.data);
  EXPECT_THROW(synth::make_task(1, 0, 1.0), std::invalid_argument);
  EXPECT_THROW(synth::make_task(1, 2, 0.0), std::invalid_argument);
}

TEST(MakeTask, SampleCovarianceIsRankOne) {
  TaskSpec task = synth::make_task(21, 3, 1.0);
  Rng rng(100);
  const std::size_t n = 100000;
  Tensor x = synth::sample_data(task, n, rng);

  Eigen::VectorXd mean = Eigen::VectorXd::Zero(3);
  for (std::size_t i = 0; i < n; ++i) {
    for (int j = 0; j < 3; ++j) mean(j) += x.at(i, j);
  }
  mean /= static_cast<double>(n);
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(3, 3);
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::VectorXd row(3);
    for (int j = 0; j < 3; ++j) row(j) = x.at(i, j) - mean(j);
    cov += row * row.transpose();
  }
  cov /= static_cast<double>(n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  double largest = solver.eigenvalues()(2);
  EXPECT_GT(largest, 0.0);
  // All rows sit exactly on one line, so the remaining eigenvalues are
  // numerical noise.
  EXPECT_LT(std::abs(solver.eigenvalues()(1)), 1e-10 * largest);
  EXPECT_LT(std::abs(solver.eigenvalues()(0)), 1e-10 * largest);
}

TEST(SampleData, RowsLieOnTheTaskLine) {
  TaskSpec task = synth::make_task(31, 4, 2.0);
  Rng rng(7);
  Tensor x = synth::sample_data(task, 64, rng);
  for (std::size_t i = 0; i < 64; ++i) {
    // (row - b) must be collinear with w_r: cross terms vanish.
    for (std::size_t j = 0; j < 4; ++j) {
      for (std::size_t k = j + 1; k < 4; ++k) {
        double dj = x.at(i, j) - task.b_r.data[j];
        double dk = x.at(i, k) - task.b_r.data[k];
        EXPECT_NEAR(dj * task.w_r.data[k], dk * task.w_r.data[j], 1e-9);
      }
    }
  }
}

TEST(SampleData, EmpiricalMeanNearBias) {
  TaskSpec task = synth::make_task(41, 2, 1.0);
  Rng rng(8);
  const std::size_t n = 1000000;
  Tensor x = synth::sample_data(task, n, rng);
  for (std::size_t j = 0; j < 2; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += x.at(i, j);
    mean /= static_cast<double>(n);
    double se = task.sigma * std::abs(task.w_r.data[j]) / std::sqrt(static_cast<double>(n));
    EXPECT_NEAR(mean, task.b_r.data[j], 3.0 * se + 1e-9);
  }
}

TEST(SampleData, FixedDatasetModeDrawsFromMExamples) {
  TaskSpec task = synth::make_task(51, 2, 1.0, /*m=*/16);
  Rng rng_a(1), rng_b(2);
  Tensor a = synth::sample_data(task, 256, rng_a);
  Tensor b = synth::sample_data(task, 256, rng_b);
  auto distinct_first_coords = [](const Tensor& t) {
    std::vector<double> seen;
    for (std::size_t i = 0; i < t.rows(); ++i) {
      double v = t.at(i, 0);
      bool found = false;
      for (double s : seen) found = found || s == v;
      if (!found) seen.push_back(v);
    }
    return seen.size();
  };
  // Only m distinct support points regardless of the minibatch stream.
  EXPECT_LE(distinct_first_coords(a), 16u);
  EXPECT_LE(distinct_first_coords(b), 16u);
  EXPECT_GT(distinct_first_coords(a), 4u);
}

TEST(TrueMoments, AxisAlignedCase) {
  TaskSpec task;
  task.d = 2;
  task.sigma = 1.0;
  task.w_r = Tensor::matrix(1, 2, {1.0, 0.0});
  task.b_r = Tensor::zeros({1, 2});
  GaussianMoments m = synth::true_moments(task);
  EXPECT_DOUBLE_EQ(m.cov.at(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(m.cov.at(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(m.cov.at(1, 1), 0.0);
  EXPECT_DOUBLE_EQ(m.mu.data[0], 0.0);
}

TEST(TrueMoments, MatchesEmpiricalCovariance) {
  TaskSpec task = synth::make_task(61, 3, 1.5);
  GaussianMoments m = synth::true_moments(task);
  Rng rng(9);
  const std::size_t n = 1000000;
  Tensor x = synth::sample_data(task, n, rng);
  for (std::size_t j = 0; j < 3; ++j) {
    for (std::size_t k = 0; k < 3; ++k) {
      double cov = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        cov += (x.at(i, j) - m.mu.data[j]) * (x.at(i, k) - m.mu.data[k]);
      }
      cov /= static_cast<double>(n);
      double se = std::sqrt(2.0) * std::abs(m.cov.at(j, k)) /
                      std::sqrt(static_cast<double>(n)) +
                  1e-6;
      EXPECT_NEAR(cov, m.cov.at(j, k), 3.0 * se + 1e-4);
    }
  }
}

TEST(PsdSqrt, IdentityAndDiagonal) {
  Tensor eye = Tensor::matrix(2, 2, {1, 0, 0, 1});
  Tensor root = synth::psd_sqrt(eye);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(root.data[i], eye.data[i], 1e-14);

  Tensor diag = Tensor::matrix(2, 2, {4, 0, 0, 9});
  root = synth::psd_sqrt(diag);
  EXPECT_NEAR(root.at(0, 0), 2.0, 1e-12);
  EXPECT_NEAR(root.at(1, 1), 3.0, 1e-12);
  EXPECT_NEAR(root.at(0, 1), 0.0, 1e-12);
}

TEST(PsdSqrt, ReconstructsRandomPsdMatrices) {
  Rng rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    GaussianMoments m = random_moments(rng, 8, 8);
    Tensor root = synth::psd_sqrt(m.cov);
    Tensor back = linalg::matmul(root, root);
    double err = 0.0;
    for (std::size_t i = 0; i < back.numel(); ++i) {
      double d = back.data[i] - m.cov.data[i];
      err += d * d;
    }
    EXPECT_LT(std::sqrt(err), 1e-10 * std::max(1.0, linalg::frobenius_norm(m.cov)));
  }
}

TEST(PsdSqrt, RejectsAsymmetricInput) {
  Tensor bad = Tensor::matrix(2, 2, {1.0, 0.5, -0.5, 1.0});
  EXPECT_THROW(synth::psd_sqrt(bad), std::invalid_argument);
}

TEST(FrechetSquared, IdenticalMomentsGiveExactZero) {
  Rng rng(11);
  for (std::size_t rank : {1ul, 2ul, 4ul}) {
    GaussianMoments m = random_moments(rng, 4, rank);
    EXPECT_DOUBLE_EQ(synth::frechet_squared(m, m), 0.0);
  }
}

TEST(FrechetSquared, PointMassesReduceToSquaredMeanDistance) {
  GaussianMoments p, q;
  p.mu = Tensor::vec({1.0, 2.0, 3.0});
  q.mu = Tensor::vec({0.0, 0.0, 0.0});
  p.cov = Tensor::zeros({3, 3});
  q.cov = Tensor::zeros({3, 3});
  EXPECT_DOUBLE_EQ(synth::frechet_squared(p, q), 14.0);
}

TEST(FrechetSquared, OneDimensionalClosedForm) {
  Rng rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    double mu1 = rng.normal(0.0, 2.0), mu2 = rng.normal(0.0, 2.0);
    double s1 = std::abs(rng.normal(0.0, 1.0)) + 0.1;
    double s2 = std::abs(rng.normal(0.0, 1.0)) + 0.1;
    GaussianMoments p, q;
    p.mu = Tensor::vec({mu1});
    q.mu = Tensor::vec({mu2});
    p.cov = Tensor::matrix(1, 1, {s1 * s1});
    q.cov = Tensor::matrix(1, 1, {s2 * s2});
    double closed = (mu1 - mu2) * (mu1 - mu2) + (s1 - s2) * (s1 - s2);
    EXPECT_NEAR(synth::frechet_squared(p, q), closed, 1e-10);
  }
}

TEST(FrechetSquared, SymmetricInArguments) {
  Rng rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    GaussianMoments p = random_moments(rng, 5, 1 + trial % 5);
    GaussianMoments q = random_moments(rng, 5, 1 + (trial + 2) % 5);
    EXPECT_NEAR(synth::frechet_squared(p, q), synth::frechet_squared(q, p), 1e-9);
  }
}

TEST(FrechetSquared, TranslationInvarianceOfTraceTerm) {
  Rng rng(14);
  GaussianMoments p = random_moments(rng, 4, 2);
  GaussianMoments q = random_moments(rng, 4, 3);
  double before = synth::frechet_squared(p, q);
  Tensor shift = rng.normal_tensor({4}, 0.0, 3.0);
  for (std::size_t i = 0; i < 4; ++i) {
    p.mu.data[i] += shift.data[i];
    q.mu.data[i] += shift.data[i];
  }
  EXPECT_NEAR(synth::frechet_squared(p, q), before, 1e-9);
}

TEST(FrechetSquared, ZeroOnlyWhenMomentsAgree) {
  Rng rng(15);
  GaussianMoments p = random_moments(rng, 3, 2);
  GaussianMoments q = p;
  EXPECT_DOUBLE_EQ(synth::frechet_squared(p, q), 0.0);
  q.mu.data[0] += 0.1;
  EXPECT_GT(synth::frechet_squared(p, q), 1e-4);
  q = p;
  q.cov.at(0, 0) += 0.5;
  EXPECT_GT(synth::frechet_squared(p, q), 1e-4);
}

TEST(FrechetSquared, AgreesWithEigenOracleIncludingRankDeficient) {
  Rng rng(16);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t d = 2 + trial % 7;
    std::size_t rank_p = 1 + rng.next_u64() % d;
    std::size_t rank_q = 1 + rng.next_u64() % d;
    GaussianMoments p = random_moments(rng, d, rank_p);
    GaussianMoments q = random_moments(rng, d, rank_q);
    double ours = synth::frechet_squared(p, q);
    double oracle = frechet_squared_oracle(p, q);
    EXPECT_NEAR(ours, oracle, 1e-8 * std::max(1.0, oracle)) << "trial " << trial;
  }
}

TEST(ParallelInit, ZeroOffsetMatchesDataDistribution) {
  TaskSpec task = synth::make_task(71, 3, 1.0);
  models::GeneratorParams gen = synth::parallel_init(task, Tensor::zeros({1, 3}));
  EXPECT_DOUBLE_EQ(
      synth::frechet_squared(synth::true_moments(task), models::generator_moments(gen)),
      0.0);
}

TEST(ParallelInit, UnitPerpendicularOffsetGivesDistanceOne) {
  TaskSpec task = synth::make_task(72, 4, 1.3);
  Tensor offset = synth::perpendicular_offset(task, 1.0);
  // Offset is orthogonal to w_r and unit length.
  double dot = 0.0, norm = 0.0;
  for (std::size_t j = 0; j < 4; ++j) {
    dot += offset.data[j] * task.w_r.data[j];
    norm += offset.data[j] * offset.data[j];
  }
  EXPECT_NEAR(dot, 0.0, 1e-12);
  EXPECT_NEAR(std::sqrt(norm), 1.0, 1e-12);

  models::GeneratorParams gen = synth::parallel_init(task, offset);
  double distance =
      synth::frechet_squared(synth::true_moments(task), models::generator_moments(gen));
  EXPECT_NEAR(distance, 1.0, 1e-9);
}

TEST(ParallelInit, HalfOffsetReproducesQuarterDistance) {
  // The two-parallel-lines picture: w_r = (1,0), offset (0, 0.5).
  TaskSpec task;
  task.d = 2;
  task.sigma = 1.0;
  task.w_r = Tensor::matrix(1, 2, {1.0, 0.0});
  task.b_r = Tensor::zeros({1, 2});
  models::GeneratorParams gen =
      synth::parallel_init(task, Tensor::matrix(1, 2, {0.0, 0.5}));
  double distance =
      synth::frechet_squared(synth::true_moments(task), models::generator_moments(gen));
  EXPECT_NEAR(distance, 0.25, 1e-12);
}

TEST(TaskSpec, JsonRoundTrip) {
  TaskSpec task = synth::make_task(81, 3, 0.7, 10);
  TaskSpec back = TaskSpec::from_json(task.to_json());
  EXPECT_EQ(back.w_r.data, task.w_r.data);
  EXPECT_EQ(back.b_r.data, task.b_r.data);
  EXPECT_EQ(back.d, task.d);
  EXPECT_EQ(back.m, task.m);
  EXPECT_EQ(back.seed, task.seed);
  EXPECT_DOUBLE_EQ(back.sigma, task.sigma);
}

}  // namespace
}  // namespace ganlab
