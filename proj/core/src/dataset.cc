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

#include "fedsdp/dataset.h"

#include <string>
#include <utility>

#include "fedsdp/error.h"

namespace fedsdp {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw ConfigError("matrix data has " + std::to_string(data_.size()) +
                      " entries, expected " + std::to_string(rows_ * cols_));
  }
}

void LabeledDataset::Validate() const {
  if (features.rows() != labels.size()) {
    throw SchemaError("feature rows (" + std::to_string(features.rows()) +
                      ") != label count (" + std::to_string(labels.size()) +
                      ")");
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= num_classes) {
      throw SchemaError("label " + std::to_string(labels[i]) + " at row " +
                        std::to_string(i + 1) + " outside [0, " +
                        std::to_string(num_classes) + ")");
    }
  }
}

LabeledDataset LabeledDataset::Subset(std::span<const std::size_t> rows) const {
  LabeledDataset out;
  out.num_classes = num_classes;
  out.features = Matrix(rows.size(), dim());
  out.labels.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto src = features.row(rows[i]);
    auto dst = out.features.row(i);
    std::copy(src.begin(), src.end(), dst.begin());
    out.labels.push_back(labels[rows[i]]);
  }
  return out;
}

LabeledDataset LabeledDataset::Concat(const LabeledDataset& a,
                                      const LabeledDataset& b) {
  if (a.empty()) return b.empty() && b.dim() == 0 ? a : b;
  if (b.empty()) return a;
  if (a.dim() != b.dim()) {
    throw ConfigError("cannot concatenate datasets of dimension " +
                      std::to_string(a.dim()) + " and " +
                      std::to_string(b.dim()));
  }
  std::vector<double> data = a.features.data();
  data.insert(data.end(), b.features.data().begin(), b.features.data().end());
  LabeledDataset out;
  out.num_classes = std::max(a.num_classes, b.num_classes);
  out.features = Matrix(a.size() + b.size(), a.dim(), std::move(data));
  out.labels = a.labels;
  out.labels.insert(out.labels.end(), b.labels.begin(), b.labels.end());
  return out;
}

LabeledDataset LabeledDataset::Empty(std::size_t dim, int num_classes) {
  LabeledDataset out;
  out.features = Matrix(0, dim);
  out.num_classes = num_classes;
  return out;
}

}  // namespace fedsdp
