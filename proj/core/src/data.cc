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

#include "fedsdp/data.h"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>
#include <utility>

#include "fedsdp/error.h"

namespace fedsdp {
namespace {

constexpr uint64_t kCentroidStream = 0x43454e54;  // "CENT"
constexpr uint64_t kFractionStream = 0x46524143;  // "FRAC"
constexpr uint64_t kRowStream = 0x524f5753;       // "ROWS"
constexpr uint64_t kSplitStream = 0x53504c54;     // "SPLT"

std::size_t RoundCount(double fraction, std::size_t n) {
  return static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
}

std::vector<std::string> SplitLine(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  for (std::string& c : cells) {
    const auto first = c.find_first_not_of(" \t");
    const auto last = c.find_last_not_of(" \t\r");
    c = first == std::string::npos ? "" : c.substr(first, last - first + 1);
  }
  return cells;
}

double ParseCell(const std::string& cell, std::size_t row,
                 const std::string& column) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (cell.empty() || end != cell.c_str() + cell.size() || errno == ERANGE ||
      !std::isfinite(v)) {
    throw ParseError("parse error at row " + std::to_string(row) +
                         ", column '" + column + "': '" + cell +
                         "' is not a finite number",
                     row);
  }
  return v;
}

}  // namespace

void SyntheticSpec::Validate(int n_clients) const {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (n_clients < 1) fail("n_clients must be >= 1");
  if (samples_per_client < 1) fail("samples_per_client must be >= 1");
  if (general_features < 1) fail("general_features must be >= 1");
  if (private_features < 0) fail("private_features must be >= 0");
  if (num_classes < 2) fail("num_classes must be >= 2");
  if (!(p_frac_min >= 0.0 && p_frac_min <= 1.0)) {
    fail("p_frac_min must lie in [0, 1], got " + std::to_string(p_frac_min));
  }
  if (!(p_frac_max >= 0.0 && p_frac_max <= 1.0)) {
    fail("p_frac_max must lie in [0, 1], got " + std::to_string(p_frac_max));
  }
  if (p_frac_min > p_frac_max) fail("p_frac_min must be <= p_frac_max");
  if (hbc_clients < 0 || hbc_clients > n_clients) {
    fail("hbc_clients must lie in [0, n_clients]");
  }
  if (!(validation_fraction > 0.0 && validation_fraction < 1.0)) {
    fail("validation_fraction must lie in (0, 1)");
  }
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    fail("test_fraction must lie in (0, 1)");
  }
  if (!(feature_noise >= 0.0) || !(general_scale > 0.0)) {
    fail("feature_noise must be >= 0 and general_scale > 0");
  }
}

std::vector<std::size_t> StratifiedSample(const std::vector<int>& labels,
                                          int num_classes, std::size_t count,
                                          Rng& rng) {
  const std::size_t n = labels.size();
  std::vector<std::vector<std::size_t>> by_class(num_classes);
  for (std::size_t i = 0; i < n; ++i) by_class[labels[i]].push_back(i);

  // Largest-remainder allocation of `count` across classes.
  std::vector<std::size_t> quota(num_classes, 0);
  std::vector<std::pair<double, int>> remainders;
  std::size_t assigned = 0;
  for (int c = 0; c < num_classes; ++c) {
    const double exact = static_cast<double>(count) *
                         static_cast<double>(by_class[c].size()) /
                         static_cast<double>(n);
    quota[c] = static_cast<std::size_t>(std::floor(exact));
    assigned += quota[c];
    remainders.emplace_back(exact - std::floor(exact), c);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; assigned < count && i < remainders.size(); ++i) {
    const int c = remainders[i].second;
    if (quota[c] < by_class[c].size()) {
      ++quota[c];
      ++assigned;
    }
  }

  std::vector<std::size_t> picked;
  picked.reserve(count);
  for (int c = 0; c < num_classes; ++c) {
    rng.Shuffle(by_class[c]);
    picked.insert(picked.end(), by_class[c].begin(),
                  by_class[c].begin() + static_cast<std::ptrdiff_t>(quota[c]));
  }
  std::sort(picked.begin(), picked.end());
  return picked;
}

ClientDataBundle SplitPrivate(const LabeledDataset& data,
                              const std::vector<bool>& private_row_mask,
                              double validation_fraction, Rng& rng) {
  if (private_row_mask.size() != data.size()) {
    throw ConfigError("private mask has " +
                      std::to_string(private_row_mask.size()) +
                      " entries for " + std::to_string(data.size()) + " rows");
  }
  if (!(validation_fraction > 0.0 && validation_fraction < 1.0)) {
    throw ConfigError("validation_fraction must lie in (0, 1)");
  }
  const std::size_t n_val = RoundCount(validation_fraction, data.size());
  if (n_val == 0) {
    throw ConfigError("validation_fraction " +
                      std::to_string(validation_fraction) + " of " +
                      std::to_string(data.size()) +
                      " rows yields an empty validation set");
  }
  const std::vector<std::size_t> val_rows =
      StratifiedSample(data.labels, data.num_classes, n_val, rng);
  std::vector<bool> is_val(data.size(), false);
  for (std::size_t r : val_rows) is_val[r] = true;

  std::vector<std::size_t> private_rows, general_rows;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (is_val[i]) continue;
    (private_row_mask[i] ? private_rows : general_rows).push_back(i);
  }
  ClientDataBundle bundle;
  bundle.private_train = data.Subset(private_rows);
  bundle.general_train = data.Subset(general_rows);
  bundle.validation = data.Subset(val_rows);
  bundle.has_private = !private_rows.empty();
  return bundle;
}

Federation GenerateFederation(int n_clients, const SyntheticSpec& spec,
                              const Rng& rng) {
  spec.Validate(n_clients);
  const int k = spec.num_classes;
  const int dg = spec.general_features;
  const int dp = spec.private_features;
  const std::size_t m = static_cast<std::size_t>(spec.samples_per_client);

  Rng centroid_rng = rng.Substream(kCentroidStream);
  std::vector<double> general_centroids(static_cast<std::size_t>(k * dg));
  std::vector<double> private_centroids(static_cast<std::size_t>(k * dp));
  for (double& v : general_centroids) v = spec.general_separation * centroid_rng.Gaussian();
  for (double& v : private_centroids) v = spec.private_separation * centroid_rng.Gaussian();

  Rng fraction_rng = rng.Substream(kFractionStream);
  Federation fed;
  fed.test = LabeledDataset::Empty(spec.dim(), k);
  for (int client = 0; client < n_clients; ++client) {
    const double drawn = fraction_rng.Uniform(spec.p_frac_min, spec.p_frac_max);
    const double p_frac = client < spec.hbc_clients ? 0.0 : drawn;
    const std::size_t n_private = static_cast<std::size_t>(
        std::ceil(p_frac * static_cast<double>(m) - 1e-9));

    Rng row_rng(DeriveSeed(rng.seed(), {kRowStream, static_cast<uint64_t>(client)}));
    LabeledDataset raw;
    raw.num_classes = k;
    raw.features = Matrix(m, spec.dim());
    raw.labels.resize(m);
    std::vector<bool> mask(m, false);
    for (std::size_t i = 0; i < m; ++i) {
      const int y = static_cast<int>(row_rng.UniformInt(static_cast<uint64_t>(k)));
      raw.labels[i] = y;
      auto row = raw.features.row(i);
      for (int j = 0; j < dg; ++j) {
        row[j] = spec.general_scale *
                 (general_centroids[y * dg + j] + spec.feature_noise * row_rng.Gaussian());
      }
      mask[i] = i < n_private;
      for (int j = 0; j < dp; ++j) {
        const double noise = spec.feature_noise * row_rng.Gaussian();
        row[dg + j] = mask[i] ? private_centroids[y * dp + j] + noise : 0.0;
      }
    }

    Rng split_rng(DeriveSeed(rng.seed(), {kSplitStream, static_cast<uint64_t>(client)}));
    const std::vector<std::size_t> test_rows =
        StratifiedSample(raw.labels, k, RoundCount(spec.test_fraction, m), split_rng);
    std::vector<bool> is_test(m, false);
    for (std::size_t r : test_rows) is_test[r] = true;
    std::vector<std::size_t> keep;
    std::vector<bool> keep_mask;
    for (std::size_t i = 0; i < m; ++i) {
      if (is_test[i]) continue;
      keep.push_back(i);
      keep_mask.push_back(mask[i]);
    }
    fed.test = LabeledDataset::Concat(fed.test, raw.Subset(test_rows));
    fed.clients.push_back(SplitPrivate(raw.Subset(keep), keep_mask,
                                       spec.validation_fraction, split_rng));
  }
  return fed;
}

std::vector<ClientDataBundle> GenerateSynthetic(int n_clients,
                                                const SyntheticSpec& spec,
                                                const Rng& rng) {
  return GenerateFederation(n_clients, spec, rng).clients;
}

CsvData LoadCsvWithMask(const std::string& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw EmptyDataError("'" + path + "' is empty");
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  const std::vector<std::string> header = SplitLine(line);

  auto find_column = [&](const std::string& name) -> std::size_t {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw SchemaError("column '" + name + "' not found in '" + path + "'");
    }
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t label_col = find_column(schema.label_column);
  constexpr std::size_t kNoColumn = static_cast<std::size_t>(-1);
  const std::size_t private_col =
      schema.private_column ? find_column(*schema.private_column) : kNoColumn;

  CsvData out;
  std::vector<std::size_t> feature_cols;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c == label_col || c == private_col) continue;
    feature_cols.push_back(c);
    out.feature_names.push_back(header[c]);
  }

  std::vector<double> values;
  std::vector<int> labels;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ++row;
    const std::vector<std::string> cells = SplitLine(line);
    if (cells.size() != header.size()) {
      throw ParseError("parse error at row " + std::to_string(row) + ": " +
                           std::to_string(cells.size()) + " cells, header has " +
                           std::to_string(header.size()),
                       row);
    }
    for (std::size_t c : feature_cols) {
      values.push_back(ParseCell(cells[c], row, header[c]));
    }
    const double label = ParseCell(cells[label_col], row, header[label_col]);
    if (label != std::floor(label)) {
      throw ParseError("parse error at row " + std::to_string(row) +
                           ": label '" + cells[label_col] + "' is not an integer",
                       row);
    }
    if (label < 0 || (schema.num_classes && label >= *schema.num_classes)) {
      throw SchemaError("label " + cells[label_col] + " at row " +
                        std::to_string(row) + " outside [0, " +
                        (schema.num_classes ? std::to_string(*schema.num_classes)
                                            : std::string("inf")) +
                        ")");
    }
    labels.push_back(static_cast<int>(label));
    if (private_col != kNoColumn) {
      const double flag = ParseCell(cells[private_col], row, header[private_col]);
      if (flag != 0.0 && flag != 1.0) {
        throw ParseError("parse error at row " + std::to_string(row) +
                             ": private flag must be 0 or 1",
                         row);
      }
      out.private_mask.push_back(flag == 1.0);
    } else {
      out.private_mask.push_back(false);
    }
  }
  if (labels.empty()) throw EmptyDataError("'" + path + "' has no data rows");

  out.dataset.num_classes =
      schema.num_classes ? *schema.num_classes
                         : *std::max_element(labels.begin(), labels.end()) + 1;
  out.dataset.features =
      Matrix(labels.size(), feature_cols.size(), std::move(values));
  out.dataset.labels = std::move(labels);
  return out;
}

LabeledDataset LoadCsv(const std::string& path, const CsvSchema& schema) {
  return LoadCsvWithMask(path, schema).dataset;
}

void WriteCsv(const LabeledDataset& data, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  for (std::size_t c = 0; c < data.dim(); ++c) out << 'x' << c << ',';
  out << "y\n";
  char buf[32];
  for (std::size_t r = 0; r < data.size(); ++r) {
    for (double v : data.features.row(r)) {
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out << buf << ',';
    }
    out << data.labels[r] << '\n';
  }
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace fedsdp
