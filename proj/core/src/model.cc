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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "fedsdp/error.h"

namespace fedsdp {
namespace {

// Per-layer offsets into the flat parameter vector.
struct LayerView {
  std::size_t rows;
  std::size_t cols;
  std::size_t weight_offset;
  std::size_t bias_offset;
};

std::vector<LayerView> Views(std::span<const LayerShape> layout) {
  std::vector<LayerView> views;
  views.reserve(layout.size());
  std::size_t offset = 0;
  for (const LayerShape& s : layout) {
    views.push_back({s.rows, s.cols, offset, offset + s.rows * s.cols});
    offset += s.rows * s.cols + s.rows;
  }
  return views;
}

// Forward pass for one sample; fills acts[0] = x, acts[l+1] = layer output
// (tanh for hidden layers, raw scores for the last layer).
void ForwardSample(const std::vector<LayerView>& views,
                   std::span<const double> w, std::span<const double> x,
                   std::vector<std::vector<double>>& acts) {
  acts.resize(views.size() + 1);
  acts[0].assign(x.begin(), x.end());
  for (std::size_t l = 0; l < views.size(); ++l) {
    const LayerView& v = views[l];
    const std::vector<double>& in = acts[l];
    std::vector<double>& out = acts[l + 1];
    out.resize(v.rows);
    for (std::size_t r = 0; r < v.rows; ++r) {
      const double* wr = w.data() + v.weight_offset + r * v.cols;
      double z = w[v.bias_offset + r];
      for (std::size_t c = 0; c < v.cols; ++c) z += wr[c] * in[c];
      out[r] = z;
    }
    if (l + 1 < views.size()) {
      for (double& z : out) z = std::tanh(z);
    }
  }
}

// Softmax in place; returns log-sum-exp of the input scores.
double SoftmaxInPlace(std::vector<double>& scores) {
  const double max = *std::max_element(scores.begin(), scores.end());
  double sum = 0.0;
  for (double& s : scores) {
    s = std::exp(s - max);
    sum += s;
  }
  for (double& s : scores) s /= sum;
  return max + std::log(sum);
}

void CheckInput(const ModelParams& params, std::size_t cols) {
  if (params.layout().empty()) throw ConfigError("model has no layers");
  if (cols != params.input_dim()) {
    throw ConfigError("batch has " + std::to_string(cols) +
                      " columns but the model expects " +
                      std::to_string(params.input_dim()));
  }
}

}  // namespace

std::size_t ParameterCount(std::span<const LayerShape> layout) {
  std::size_t n = 0;
  for (const LayerShape& s : layout) n += s.rows * s.cols + s.rows;
  return n;
}

std::vector<LayerShape> MlpLayout(std::size_t input_dim,
                                  std::span<const std::size_t> hidden,
                                  std::size_t num_classes) {
  std::vector<LayerShape> layout;
  std::size_t fan_in = input_dim;
  for (std::size_t h : hidden) {
    layout.push_back({h, fan_in});
    fan_in = h;
  }
  layout.push_back({num_classes, fan_in});
  for (const LayerShape& s : layout) {
    if (s.rows == 0 || s.cols == 0) {
      throw ConfigError("MLP layers must have positive width");
    }
  }
  return layout;
}

ModelParams::ModelParams(std::vector<LayerShape> layout,
                         std::vector<double> values)
    : layout_(std::move(layout)), values_(std::move(values)) {
  for (std::size_t l = 1; l < layout_.size(); ++l) {
    if (layout_[l].cols != layout_[l - 1].rows) {
      throw ConfigError("layer " + std::to_string(l) + " expects " +
                        std::to_string(layout_[l].cols) + " inputs but layer " +
                        std::to_string(l - 1) + " produces " +
                        std::to_string(layout_[l - 1].rows));
    }
  }
  if (values_.size() != ParameterCount(layout_)) {
    throw ConfigError("parameter vector has " + std::to_string(values_.size()) +
                      " values, layout needs " +
                      std::to_string(ParameterCount(layout_)));
  }
}

ModelParams ModelParams::Zeros(std::vector<LayerShape> layout) {
  const std::size_t n = ParameterCount(layout);
  return ModelParams(std::move(layout), std::vector<double>(n, 0.0));
}

std::size_t ModelParams::input_dim() const {
  return layout_.empty() ? 0 : layout_.front().cols;
}

std::size_t ModelParams::output_dim() const {
  return layout_.empty() ? 0 : layout_.back().rows;
}

double ModelParams::L2Norm() const {
  double sum = 0.0;
  for (double v : values_) sum += v * v;
  return std::sqrt(sum);
}

bool ModelParams::AllFinite() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return std::isfinite(v); });
}

double L2Distance(const ModelParams& a, const ModelParams& b) {
  if (!a.SameLayout(b)) throw ConfigError("L2Distance: layout mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a.values()[i] - b.values()[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

ModelParams InitializeUniform(std::vector<LayerShape> layout, Rng& rng) {
  ModelParams params = ModelParams::Zeros(std::move(layout));
  auto w = params.mutable_values();
  for (const LayerView& v : Views(params.layout())) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(v.cols));
    const std::size_t end = v.bias_offset + v.rows;
    for (std::size_t i = v.weight_offset; i < end; ++i) {
      w[i] = rng.Uniform(-bound, bound);
    }
  }
  return params;
}

void TrainConfig::Validate() const {
  if (!(learning_rate > 0.0)) {
    throw ConfigError("learning_rate must be > 0, got " +
                      std::to_string(learning_rate));
  }
  if (local_epochs < 1) {
    throw ConfigError("local_epochs must be >= 1, got " +
                      std::to_string(local_epochs));
  }
  if (batch_size < 1) {
    throw ConfigError("batch_size must be >= 1, got " +
                      std::to_string(batch_size));
  }
  if (!(clip_bound > 0.0)) {
    throw ConfigError("clip_bound must be > 0, got " +
                      std::to_string(clip_bound));
  }
}

Matrix Logits(const ModelParams& params, const Matrix& batch) {
  CheckInput(params, batch.cols());
  const auto views = Views(params.layout());
  Matrix out(batch.rows(), params.output_dim());
  std::vector<std::vector<double>> acts;
  for (std::size_t i = 0; i < batch.rows(); ++i) {
    ForwardSample(views, params.values(), batch.row(i), acts);
    std::copy(acts.back().begin(), acts.back().end(), out.row(i).begin());
  }
  return out;
}

Matrix Forward(const ModelParams& params, const Matrix& batch) {
  Matrix out = Logits(params, batch);
  std::vector<double> scores;
  for (std::size_t i = 0; i < out.rows(); ++i) {
    auto row = out.row(i);
    scores.assign(row.begin(), row.end());
    SoftmaxInPlace(scores);
    std::copy(scores.begin(), scores.end(), row.begin());
  }
  return out;
}

LossGradient BatchLossAndGradient(const ModelParams& params,
                                  const LabeledDataset& data,
                                  std::span<const std::size_t> rows) {
  CheckInput(params, data.dim());
  if (rows.empty()) throw EmptyDataError("gradient over an empty batch");
  const auto views = Views(params.layout());
  const auto w = params.values();
  LossGradient result{0.0, ModelParams::Zeros(params.layout())};
  auto g = result.gradient.mutable_values();

  std::vector<std::vector<double>> acts;
  std::vector<double> delta, prev_delta;
  for (std::size_t row : rows) {
    ForwardSample(views, w, data.features.row(row), acts);
    delta = acts.back();
    const double lse = SoftmaxInPlace(delta);
    const int label = data.labels[row];
    result.loss += lse - acts.back()[label];
    delta[label] -= 1.0;

    for (std::size_t l = views.size(); l-- > 0;) {
      const LayerView& v = views[l];
      const std::vector<double>& in = acts[l];
      for (std::size_t r = 0; r < v.rows; ++r) {
        double* gr = g.data() + v.weight_offset + r * v.cols;
        for (std::size_t c = 0; c < v.cols; ++c) gr[c] += delta[r] * in[c];
        g[v.bias_offset + r] += delta[r];
      }
      if (l == 0) break;
      prev_delta.assign(v.cols, 0.0);
      for (std::size_t r = 0; r < v.rows; ++r) {
        const double* wr = w.data() + v.weight_offset + r * v.cols;
        for (std::size_t c = 0; c < v.cols; ++c) prev_delta[c] += wr[c] * delta[r];
      }
      for (std::size_t c = 0; c < v.cols; ++c) {
        prev_delta[c] *= 1.0 - in[c] * in[c];
      }
      std::swap(delta, prev_delta);
    }
  }
  const double scale = 1.0 / static_cast<double>(rows.size());
  result.loss *= scale;
  for (double& v : g) v *= scale;
  return result;
}

double Loss(const ModelParams& params, const LabeledDataset& data) {
  CheckInput(params, data.dim());
  if (data.empty()) throw EmptyDataError("loss over an empty dataset");
  const auto views = Views(params.layout());
  std::vector<std::vector<double>> acts;
  std::vector<double> scores;
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    ForwardSample(views, params.values(), data.features.row(i), acts);
    scores = acts.back();
    total += SoftmaxInPlace(scores) - acts.back()[data.labels[i]];
  }
  return total / static_cast<double>(data.size());
}

ModelParams SgdEpoch(const ModelParams& params, const LabeledDataset& data,
                     const TrainConfig& cfg, Rng& rng) {
  if (data.empty()) throw EmptyDataError("SGD epoch over an empty dataset");
  if (cfg.batch_size < 1) throw ConfigError("batch_size must be >= 1");
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  rng.Shuffle(order);

  ModelParams current = params;
  const std::size_t batch = static_cast<std::size_t>(cfg.batch_size);
  for (std::size_t start = 0; start < order.size(); start += batch) {
    const std::size_t len = std::min(batch, order.size() - start);
    LossGradient lg = BatchLossAndGradient(
        current, data, std::span<const std::size_t>(order).subspan(start, len));
    auto w = current.mutable_values();
    auto g = lg.gradient.values();
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= cfg.learning_rate * g[i];
  }
  return current;
}

ModelParams TrainLocal(const ModelParams& params, const LabeledDataset& data,
                       const TrainConfig& cfg, Rng& rng) {
  ModelParams current = params;
  for (int e = 0; e < cfg.local_epochs; ++e) {
    current = SgdEpoch(current, data, cfg, rng);
  }
  return current;
}

ModelParams Clip(const ModelParams& params, double clip_bound) {
  if (!(clip_bound > 0.0)) throw ParameterError("clip bound must be > 0");
  const double norm = params.L2Norm();
  if (norm <= clip_bound) return params;
  double scale = clip_bound / norm;
  ModelParams out = params;
  for (;;) {
    auto w = out.mutable_values();
    auto src = params.values();
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = src[i] * scale;
    if (out.L2Norm() <= clip_bound) return out;
    scale = std::nextafter(scale, 0.0);
  }
}

ModelParams AddGaussianNoise(const ModelParams& params, double sigma, Rng& rng) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw ParameterError("noise sigma must be finite and >= 0, got " +
                         std::to_string(sigma));
  }
  if (sigma == 0.0) return params;
  ModelParams out = params;
  for (double& v : out.mutable_values()) v += sigma * rng.Gaussian();
  return out;
}

double Evaluate(const ModelParams& params, const LabeledDataset& data) {
  if (data.empty()) throw EmptyDataError("evaluate on an empty dataset");
  const Matrix scores = Logits(params, data.features);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < scores.rows(); ++i) {
    auto row = scores.row(i);
    const auto best = std::max_element(row.begin(), row.end()) - row.begin();
    if (best == data.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

}  // namespace fedsdp
