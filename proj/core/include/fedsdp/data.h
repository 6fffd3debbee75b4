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

#ifndef FEDSDP_DATA_H_
#define FEDSDP_DATA_H_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fedsdp/dataset.h"
#include "fedsdp/rng.h"

namespace fedsdp {

// Parameters of the synthetic federation. Every sample has a general
// feature block whose class signal is present for all rows. Private samples
// additionally carry a class signal in a reserved private block, which is
// zero for general samples.
struct SyntheticSpec {
  int samples_per_client = 1000;
  int general_features = 12;
  int private_features = 4;
  int num_classes = 4;
  // Spread of the per-class centroids in each block.
  double general_separation = 0.6;
  double private_separation = 3.0;
  // Multiplies the whole general block (noise included). Small values keep
  // the task separable but slow to learn.
  double general_scale = 0.05;
  double feature_noise = 0.5;
  // Non-HBC clients draw their private fraction uniformly from this range.
  double p_frac_min = 0.1;
  double p_frac_max = 0.5;
  // Clients 0..hbc_clients-1 are honest-but-curious and get no private rows.
  int hbc_clients = 0;
  double validation_fraction = 0.2;
  double test_fraction = 0.1;

  std::size_t dim() const {
    return static_cast<std::size_t>(general_features + private_features);
  }

  // Throws ConfigError naming the offending field.
  void Validate(int n_clients) const;
};

// Client bundles plus the pooled global test set.
struct Federation {
  std::vector<ClientDataBundle> clients;
  LabeledDataset test;
};

// Each client draws samples_per_client rows, of which ceil(p_frac * n)
// carry the private signal. A stratified test_fraction of every client's
// rows is pooled into the global test set before the remainder goes through
// SplitPrivate.
Federation GenerateFederation(int n_clients, const SyntheticSpec& spec,
                              const Rng& rng);

// Client bundles of GenerateFederation without the test pool.
std::vector<ClientDataBundle> GenerateSynthetic(int n_clients,
                                                const SyntheticSpec& spec,
                                                const Rng& rng);

// Row indices to hold out, `count` in total, allocated to labels in
// proportion to their frequency (largest remainder) and returned sorted.
std::vector<std::size_t> StratifiedSample(const std::vector<int>& labels,
                                          int num_classes, std::size_t count,
                                          Rng& rng);

// Masked rows go to private_train, the rest to general_train, after a
// stratified validation slice of round(validation_fraction * n) rows is
// removed. The three outputs partition the input rows.
ClientDataBundle SplitPrivate(const LabeledDataset& data,
                              const std::vector<bool>& private_row_mask,
                              double validation_fraction, Rng& rng);

struct CsvSchema {
  std::string label_column = "y";
  // Optional 0/1 column marking private rows; excluded from the features.
  std::optional<std::string> private_column;
  // Inferred as max(label) + 1 when unset.
  std::optional<int> num_classes;
};

struct CsvData {
  LabeledDataset dataset;
  std::vector<bool> private_mask;
  std::vector<std::string> feature_names;
};

// Headered, comma-delimited UTF-8 file. Rows are numbered from 1 after the
// header in error messages.
CsvData LoadCsvWithMask(const std::string& path, const CsvSchema& schema);

LabeledDataset LoadCsv(const std::string& path, const CsvSchema& schema);

// Writes features as x0..x{d-1} followed by the label column "y".
void WriteCsv(const LabeledDataset& data, const std::string& path);

}  // namespace fedsdp

#endif  // FEDSDP_DATA_H_
