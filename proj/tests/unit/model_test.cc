// Copyright 2026 The fedsdp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fedsdp/model.h"

#include <cmath>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "fedsdp/dataset.h"
#include "fedsdp/error.h"
#include "fedsdp/rng.h"

namespace fedsdp {
namespace {

// Hand-set 2-2-2 network: W1 = [[0.5,-0.3],[0.2,0.8]], b1 = [0.1,-0.1],
// W2 = [[1,-1],[0.5,0.25]], b2 = [0,0.2].
ModelParams TwoTwoTwo() {
  return ModelParams({{2, 2}, {2, 2}},
                     {0.5, -0.3, 0.2, 0.8, 0.1, -0.1, 1.0, -1.0, 0.5, 0.25, 0.0, 0.2});
}

LabeledDataset RandomData(std::size_t n, std::size_t dim, int k, Rng& rng) {
  LabeledDataset d;
  d.features = Matrix(n, dim);
  d.num_classes = k;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < dim; ++j) d.features(i, j) = rng.Gaussian();
    d.labels.push_back(static_cast<int>(rng.UniformInt(static_cast<uint64_t>(k))));
  }
  return d;
}

ModelParams Vector(std::vector<double> v) {
  // A 1-output linear layer whose parameters are exactly v (weights, then bias).
  const std::size_t cols = v.size() - 1;
  return ModelParams({{1, cols}}, std::move(v));
}

TEST(ModelLayoutTest, MlpLayoutAndCount) {
  const std::vector<std::size_t> hidden{32};
  const auto layout = MlpLayout(16, hidden, 4);
  ASSERT_EQ(layout.size(), 2u);
  EXPECT_EQ(layout[0], (LayerShape{32, 16}));
  EXPECT_EQ(layout[1], (LayerShape{4, 32}));
  EXPECT_EQ(ParameterCount(layout), 32u * 16 + 32 + 4u * 32 + 4);
  const std::vector<std::size_t> none;
  EXPECT_EQ(MlpLayout(3, none, 2).size(), 1u);
  const std::vector<std::size_t> zero{0};
  EXPECT_THROW(MlpLayout(3, zero, 2), ConfigError);
}

TEST(ModelLayoutTest, ConstructorChecksShapes) {
  EXPECT_THROW(ModelParams({{2, 2}}, {1.0}), ConfigError);
  EXPECT_THROW(ModelParams({{2, 3}, {2, 3}}, std::vector<double>(16, 0.0)), ConfigError);
  const ModelParams p = ModelParams::Zeros({{3, 2}, {4, 3}});
  EXPECT_EQ(p.size(), 3u * 2 + 3 + 4u * 3 + 4);
  EXPECT_EQ(p.input_dim(), 2u);
  EXPECT_EQ(p.output_dim(), 4u);
}

TEST(ModelInitTest, UniformWithinFanInBound) {
  Rng rng(5);
  const ModelParams p = InitializeUniform({{8, 4}, {3, 8}}, rng);
  const auto v = p.values();
  for (std::size_t i = 0; i < 8 * 4 + 8; ++i) EXPECT_LE(std::abs(v[i]), 0.5);
  for (std::size_t i = 8 * 4 + 8; i < v.size(); ++i) {
    EXPECT_LE(std::abs(v[i]), 1.0 / std::sqrt(8.0));
  }
  Rng again(5);
  EXPECT_EQ(p, InitializeUniform({{8, 4}, {3, 8}}, again));
}

TEST(ModelForwardTest, ZeroWeightsGiveUniformProbabilities) {
  const ModelParams p = ModelParams::Zeros({{5, 3}});
  Matrix x(2, 3, {1.0, -2.0, 3.0, 0.5, 0.0, 9.0});
  const Matrix probs = Forward(p, x);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t c = 0; c < 5; ++c) EXPECT_DOUBLE_EQ(probs(i, c), 0.2);
  }
}

TEST(ModelForwardTest, IdentityLayerPassesScoreThrough) {
  const ModelParams p({{1, 1}}, {1.0, 0.0});
  const Matrix x(1, 1, {2.0});
  EXPECT_DOUBLE_EQ(Logits(p, x)(0, 0), 2.0);
}

TEST(ModelForwardTest, HandComputedTwoTwoTwo) {
  // h = tanh(W1 x + b1), z = W2 h + b2, p = softmax(z) for x = (1, 0).
  const Matrix x(1, 2, {1.0, 0.0});
  const Matrix z = Logits(TwoTwoTwo(), x);
  EXPECT_NEAR(z(0, 0), 0.4373815723730795, 1e-12);
  EXPECT_NEAR(z(0, 1), 0.49344178215525664, 1e-12);
  const Matrix probs = Forward(TwoTwoTwo(), x);
  EXPECT_NEAR(probs(0, 0), 0.48598861688176004, 1e-12);
  EXPECT_NEAR(probs(0, 1), 0.51401138311824, 1e-12);
  EXPECT_NEAR(probs(0, 0) + probs(0, 1), 1.0, 1e-15);

  LabeledDataset d{x, {1}, 2};
  EXPECT_NEAR(Loss(TwoTwoTwo(), d), 0.6655098676277583, 1e-12);
}

TEST(ModelForwardTest, RowsSumToOne) {
  Rng rng(17);
  const ModelParams p = InitializeUniform(MlpLayout(6, std::vector<std::size_t>{7, 5}, 3), rng);
  const LabeledDataset d = RandomData(20, 6, 3, rng);
  const Matrix probs = Forward(p, d.features);
  for (std::size_t i = 0; i < probs.rows(); ++i) {
    double sum = 0.0;
    for (std::size_t c = 0; c < 3; ++c) sum += probs(i, c);
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(ModelForwardTest, DimensionMismatchIsConfigError) {
  EXPECT_THROW(Forward(TwoTwoTwo(), Matrix(1, 3)), ConfigError);
}

// Central finite differences (step 1e-5) against the analytic gradient.
double GradientRelativeError(const ModelParams& params, const LabeledDataset& data) {
  std::vector<std::size_t> rows(data.size());
  std::iota(rows.begin(), rows.end(), 0);
  const LossGradient lg = BatchLossAndGradient(params, data, rows);
  const double h = 1e-5;
  double diff = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    ModelParams plus = params, minus = params;
    plus.mutable_values()[i] += h;
    minus.mutable_values()[i] -= h;
    const double numeric = (Loss(plus, data) - Loss(minus, data)) / (2 * h);
    const double analytic = lg.gradient.values()[i];
    diff += (numeric - analytic) * (numeric - analytic);
    scale += numeric * numeric + analytic * analytic;
  }
  return std::sqrt(diff) / std::max(std::sqrt(scale), 1e-12);
}

TEST(ModelGradientTest, MatchesFiniteDifferences) {
  Rng rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t in = 1 + rng.UniformInt(5);
    const int k = 2 + static_cast<int>(rng.UniformInt(3));
    std::vector<std::size_t> hidden;
    for (uint64_t l = rng.UniformInt(3); l > 0; --l) hidden.push_back(1 + rng.UniformInt(6));
    const ModelParams p = InitializeUniform(MlpLayout(in, hidden, static_cast<std::size_t>(k)), rng);
    const LabeledDataset d = RandomData(1 + rng.UniformInt(8), in, k, rng);
    EXPECT_LT(GradientRelativeError(p, d), 1e-4) << "trial " << trial;
  }
}

TEST(ModelGradientTest, LossMatchesBatchLoss) {
  Rng rng(4);
  const ModelParams p = InitializeUniform(MlpLayout(3, std::vector<std::size_t>{4}, 3), rng);
  const LabeledDataset d = RandomData(9, 3, 3, rng);
  std::vector<std::size_t> rows(9);
  std::iota(rows.begin(), rows.end(), 0);
  EXPECT_NEAR(BatchLossAndGradient(p, d, rows).loss, Loss(p, d), 1e-14);
  EXPECT_THROW(BatchLossAndGradient(p, d, {}), EmptyDataError);
}

TEST(ModelSgdTest, ZeroLearningRateIsIdentity) {
  Rng rng(1);
  const ModelParams p = InitializeUniform(MlpLayout(3, std::vector<std::size_t>{4}, 2), rng);
  const LabeledDataset d = RandomData(30, 3, 2, rng);
  TrainConfig cfg;
  cfg.learning_rate = 0.0;
  cfg.batch_size = 7;
  EXPECT_EQ(SgdEpoch(p, d, cfg, rng), p);
}

TEST(ModelSgdTest, SingleDatumLogisticStep) {
  // One-layer softmax over two classes is logistic regression; one datum
  // and batch size one give exactly one step.
  const ModelParams p({{2, 2}}, {0.3, -0.2, 0.1, 0.4, 0.05, -0.05});
  const LabeledDataset d{Matrix(1, 2, {1.5, -0.5}), {0}, 2};
  TrainConfig cfg;
  cfg.learning_rate = 0.5;
  cfg.batch_size = 1;
  Rng rng(3);
  const ModelParams next = SgdEpoch(p, d, cfg, rng);
  const double h = 1e-5;
  for (std::size_t i = 0; i < p.size(); ++i) {
    ModelParams plus = p, minus = p;
    plus.mutable_values()[i] += h;
    minus.mutable_values()[i] -= h;
    const double numeric = (Loss(plus, d) - Loss(minus, d)) / (2 * h);
    const double step = (p.values()[i] - next.values()[i]) / cfg.learning_rate;
    EXPECT_NEAR(step, numeric, 1e-4 * std::max(1.0, std::abs(numeric)));
  }
}

TEST(ModelSgdTest, DeterministicGivenSeed) {
  Rng data_rng(8);
  const ModelParams p = InitializeUniform(MlpLayout(4, std::vector<std::size_t>{6}, 3), data_rng);
  const LabeledDataset d = RandomData(64, 4, 3, data_rng);
  TrainConfig cfg;
  cfg.batch_size = 10;
  Rng a(21), b(21);
  const ModelParams pa = TrainLocal(p, d, cfg, a);
  const ModelParams pb = TrainLocal(p, d, cfg, b);
  EXPECT_EQ(pa, pb);
  EXPECT_NE(pa, p);
}

TEST(ModelSgdTest, ZeroEpochsLeaveParamsUnchanged) {
  Rng rng(2);
  const ModelParams p = InitializeUniform({{2, 3}}, rng);
  TrainConfig cfg;
  cfg.local_epochs = 0;
  EXPECT_EQ(TrainLocal(p, RandomData(5, 3, 2, rng), cfg, rng), p);
}

TEST(ModelSgdTest, EmptyDataIsAnError) {
  Rng rng(2);
  const ModelParams p = InitializeUniform({{2, 3}}, rng);
  EXPECT_THROW(SgdEpoch(p, LabeledDataset::Empty(3, 2), TrainConfig{}, rng), EmptyDataError);
}

TEST(ModelSgdTest, TrainingReducesLoss) {
  Rng rng(12);
  LabeledDataset d;
  d.features = Matrix(200, 2);
  d.num_classes = 2;
  for (std::size_t i = 0; i < 200; ++i) {
    const int y = static_cast<int>(i % 2);
    d.features(i, 0) = (y ? 1.0 : -1.0) + 0.3 * rng.Gaussian();
    d.features(i, 1) = rng.Gaussian();
    d.labels.push_back(y);
  }
  const ModelParams p = InitializeUniform(MlpLayout(2, std::vector<std::size_t>{8}, 2), rng);
  TrainConfig cfg;
  cfg.local_epochs = 10;
  cfg.batch_size = 20;
  const ModelParams trained = TrainLocal(p, d, cfg, rng);
  EXPECT_LT(Loss(trained, d), Loss(p, d));
  EXPECT_GT(Evaluate(trained, d), 0.95);
}

TEST(ModelTrainConfigTest, ValidateRejectsBadValues) {
  EXPECT_NO_THROW(TrainConfig{}.Validate());
  TrainConfig c;
  c.learning_rate = 0.0;
  EXPECT_THROW(c.Validate(), ConfigError);
  c = TrainConfig{};
  c.local_epochs = 0;
  EXPECT_THROW(c.Validate(), ConfigError);
  c = TrainConfig{};
  c.batch_size = 0;
  EXPECT_THROW(c.Validate(), ConfigError);
  c = TrainConfig{};
  c.clip_bound = -1.0;
  EXPECT_THROW(c.Validate(), ConfigError);
}

TEST(ModelClipTest, UnderBoundUnchanged) {
  const ModelParams p = Vector({3.0, 4.0});
  EXPECT_EQ(Clip(p, 20.0), p);
}

TEST(ModelClipTest, ScalesOntoBall) {
  const ModelParams c = Clip(Vector({3.0, 4.0}), 1.0);
  EXPECT_NEAR(c.values()[0], 0.6, 1e-15);
  EXPECT_NEAR(c.values()[1], 0.8, 1e-15);
  EXPECT_LE(c.L2Norm(), 1.0);
}

TEST(ModelClipTest, ZeroVectorStaysZero) {
  const ModelParams z = Vector({0.0, 0.0, 0.0});
  EXPECT_EQ(Clip(z, 0.5), z);
}

TEST(ModelClipTest, NormBoundAndIdempotence) {
  Rng rng(31);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> v(1 + rng.UniformInt(40));
    for (double& x : v) x = rng.Uniform(-100.0, 100.0);
    const double c = rng.Uniform(1e-3, 50.0);
    const ModelParams once = Clip(Vector(v), c);
    ASSERT_LE(once.L2Norm(), c);
    ASSERT_EQ(Clip(once, c), once);
  }
}

TEST(ModelClipTest, NonPositiveBoundRejected) {
  EXPECT_THROW(Clip(Vector({1.0, 1.0}), 0.0), ParameterError);
}

TEST(ModelNoiseTest, ZeroSigmaIsIdentity) {
  Rng rng(1);
  const ModelParams p = Vector({1.0, 2.0, 3.0});
  EXPECT_EQ(AddGaussianNoise(p, 0.0, rng), p);
}

TEST(ModelNoiseTest, NegativeSigmaRejected) {
  Rng rng(1);
  EXPECT_THROW(AddGaussianNoise(Vector({1.0, 2.0}), -0.1, rng), ParameterError);
}

TEST(ModelNoiseTest, SameSeedSamePerturbation) {
  Rng a(77), b(77);
  const ModelParams p = Vector({1.0, 2.0, 3.0, 4.0});
  EXPECT_EQ(AddGaussianNoise(p, 0.5, a), AddGaussianNoise(p, 0.5, b));
}

TEST(ModelNoiseTest, UnitGaussianMoments) {
  Rng rng(2026);
  const ModelParams zero({{1, 0}}, {0.0});
  const int n = 1000000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = AddGaussianNoise(zero, 1.0, rng).values()[0];
    sum += x;
    sq += x * x;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  EXPECT_NEAR(mean, 0.0, 0.01);
  EXPECT_NEAR(var, 1.0, 0.02);
}

TEST(ModelEvaluateTest, MajorityPredictor) {
  // Zero weights; the bias always picks class 0.
  const ModelParams p({{2, 1}}, {0.0, 0.0, 1.0, 0.0});
  LabeledDataset d{Matrix(10, 1), {0, 0, 0, 0, 0, 0, 0, 1, 1, 1}, 2};
  EXPECT_DOUBLE_EQ(Evaluate(p, d), 0.7);
}

TEST(ModelEvaluateTest, TiesGoToLowestIndex) {
  const ModelParams p = ModelParams::Zeros({{3, 1}});
  LabeledDataset d{Matrix(3, 1), {0, 1, 2}, 3};
  EXPECT_DOUBLE_EQ(Evaluate(p, d), 1.0 / 3.0);
}

TEST(ModelEvaluateTest, RandomPredictorNearChance) {
  Rng rng(6);
  const int k = 4;
  const std::size_t n = 20000;
  const ModelParams p = InitializeUniform({{4, 5}}, rng);
  LabeledDataset d = RandomData(n, 5, k, rng);
  for (std::size_t i = 0; i < n; ++i) d.labels[i] = static_cast<int>(i % k);
  rng.Shuffle(d.labels);
  const double se = std::sqrt(0.25 * 0.75 / static_cast<double>(n));
  EXPECT_NEAR(Evaluate(p, d), 0.25, 3 * se);
}

TEST(ModelEvaluateTest, PerfectMemorizer) {
  // One-hot features through an identity layer.
  const ModelParams p({{3, 3}}, {1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0});
  LabeledDataset d{Matrix(3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1}), {0, 1, 2}, 3};
  EXPECT_DOUBLE_EQ(Evaluate(p, d), 1.0);
}

TEST(ModelEvaluateTest, EmptyDataIsAnError) {
  EXPECT_THROW(Evaluate(ModelParams::Zeros({{2, 3}}), LabeledDataset::Empty(3, 2)),
               EmptyDataError);
}

TEST(ModelDistanceTest, L2DistanceAndLayoutCheck) {
  EXPECT_DOUBLE_EQ(L2Distance(Vector({0.0, 0.0}), Vector({3.0, 4.0})), 5.0);
  EXPECT_THROW(L2Distance(Vector({0.0, 0.0}), Vector({0.0, 0.0, 0.0})), ConfigError);
}

}  // namespace
}  // namespace fedsdp
