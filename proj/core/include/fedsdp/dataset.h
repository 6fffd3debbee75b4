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

#ifndef FEDSDP_DATASET_H_
#define FEDSDP_DATASET_H_

#include <cstddef>
#include <span>
#include <vector>

namespace fedsdp {

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

  const std::vector<double>& data() const { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// n x d features with one integer label in [0, num_classes) per row.
struct LabeledDataset {
  Matrix features;
  std::vector<int> labels;
  int num_classes = 0;

  std::size_t size() const { return labels.size(); }
  std::size_t dim() const { return features.cols(); }
  bool empty() const { return labels.empty(); }

  // Throws SchemaError when row counts disagree or a label is out of range.
  void Validate() const;

  LabeledDataset Subset(std::span<const std::size_t> rows) const;

  // Rows of `a` followed by rows of `b`. An empty side only contributes its
  // shape when the other side is empty too.
  static LabeledDataset Concat(const LabeledDataset& a, const LabeledDataset& b);

  // Empty dataset with the given shape.
  static LabeledDataset Empty(std::size_t dim, int num_classes);

  friend bool operator==(const LabeledDataset&, const LabeledDataset&) = default;
};

// One client's local data: D_i = private_train U general_train, plus a
// held-out validation split used to score the contribution models.
struct ClientDataBundle {
  LabeledDataset private_train;
  LabeledDataset general_train;
  LabeledDataset validation;
  bool has_private = false;

  LabeledDataset FullTrain() const {
    return LabeledDataset::Concat(private_train, general_train);
  }
  std::size_t train_size() const {
    return private_train.size() + general_train.size();
  }

  friend bool operator==(const ClientDataBundle&, const ClientDataBundle&) = default;
};

}  // namespace fedsdp

#endif  // FEDSDP_DATASET_H_
