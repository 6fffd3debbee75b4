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

#ifndef FEDSDP_MODEL_H_
#define FEDSDP_MODEL_H_

#include <cstddef>
#include <span>
#include <vector>

#include "fedsdp/dataset.h"
#include "fedsdp/rng.h"

namespace fedsdp {

// Dense layer y = W x + b with W of shape rows x cols (rows = outputs).
struct LayerShape {
  std::size_t rows = 0;
  std::size_t cols = 0;

  friend bool operator==(const LayerShape&, const LayerShape&) = default;
};

// Number of weights plus biases described by `layout`.
std::size_t ParameterCount(std::span<const LayerShape> layout);

// input -> hidden[0] -> ... -> classes. Empty `hidden` is multinomial
// logistic regression.
std::vector<LayerShape> MlpLayout(std::size_t input_dim,
                                  std::span<const std::size_t> hidden,
                                  std::size_t num_classes);

// Flat parameter vector of an MLP. Layer l occupies rows*cols weights
// (row-major) followed by rows biases.
class ModelParams {
 public:
  ModelParams() = default;
  // Throws ConfigError when values.size() != ParameterCount(layout).
  ModelParams(std::vector<LayerShape> layout, std::vector<double> values);

  static ModelParams Zeros(std::vector<LayerShape> layout);

  const std::vector<LayerShape>& layout() const { return layout_; }
  std::span<const double> values() const { return values_; }
  std::span<double> mutable_values() { return values_; }
  std::size_t size() const { return values_.size(); }

  std::size_t input_dim() const;
  std::size_t output_dim() const;

  bool SameLayout(const ModelParams& other) const {
    return layout_ == other.layout_;
  }
  double L2Norm() const;
  bool AllFinite() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

 private:
  std::vector<LayerShape> layout_;
  std::vector<double> values_;
};

// Distance ||a - b||_2; layouts must match.
double L2Distance(const ModelParams& a, const ModelParams& b);

// Weights uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)], biases likewise.
ModelParams InitializeUniform(std::vector<LayerShape> layout, Rng& rng);

// Local optimizer settings. The primitives accept the degenerate
// learning_rate == 0 and local_epochs == 0; experiment configs reject them.
struct TrainConfig {
  double learning_rate = 0.1;
  int local_epochs = 2;
  int batch_size = 50;
  double clip_bound = 20.0;

  // Throws ConfigError naming the first violated field.
  void Validate() const;
};

// Raw class scores, one row per input row. Hidden layers use tanh.
Matrix Logits(const ModelParams& params, const Matrix& batch);

// Softmax probabilities, one row per input row.
Matrix Forward(const ModelParams& params, const Matrix& batch);

struct LossGradient {
  double loss = 0.0;
  ModelParams gradient;
};

// Mean softmax cross-entropy over `rows` of `data` and its gradient.
LossGradient BatchLossAndGradient(const ModelParams& params,
                                  const LabeledDataset& data,
                                  std::span<const std::size_t> rows);

// Mean softmax cross-entropy over all of `data`.
double Loss(const ModelParams& params, const LabeledDataset& data);

// One shuffled pass of mini-batch SGD.
ModelParams SgdEpoch(const ModelParams& params, const LabeledDataset& data,
                     const TrainConfig& cfg, Rng& rng);

// cfg.local_epochs calls of SgdEpoch; returns params unchanged for 0 epochs.
ModelParams TrainLocal(const ModelParams& params, const LabeledDataset& data,
                       const TrainConfig& cfg, Rng& rng);

// Projects onto the L2 ball of radius clip_bound. The result satisfies
// L2Norm() <= clip_bound exactly, which makes Clip idempotent.
ModelParams Clip(const ModelParams& params, double clip_bound);

// Adds i.i.d. N(0, sigma^2) to every coordinate. sigma == 0 returns the
// input without touching rng; sigma < 0 throws ParameterError.
ModelParams AddGaussianNoise(const ModelParams& params, double sigma, Rng& rng);

// Fraction of rows whose arg-max score equals the label (ties resolve to
// the lowest class index).
double Evaluate(const ModelParams& params, const LabeledDataset& data);

}  // namespace fedsdp

#endif  // FEDSDP_MODEL_H_
