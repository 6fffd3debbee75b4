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

#include "fedsdp/config.h"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "fedsdp/error.h"

namespace fedsdp {
namespace {

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double ParseDouble(const std::string& key, const std::string& value) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (value.empty() || end != value.c_str() + value.size() || errno == ERANGE) {
    throw ConfigError("config key '" + key + "': '" + value + "' is not a number");
  }
  return v;
}

long long ParseInteger(const std::string& key, const std::string& value) {
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(value.c_str(), &end, 10);
  if (value.empty() || end != value.c_str() + value.size() || errno == ERANGE) {
    throw ConfigError("config key '" + key + "': '" + value + "' is not an integer");
  }
  return v;
}

int ParseInt(const std::string& key, const std::string& value) {
  const long long v = ParseInteger(key, value);
  if (v < INT32_MIN || v > INT32_MAX) {
    throw ConfigError("config key '" + key + "': '" + value + "' is out of range");
  }
  return static_cast<int>(v);
}

std::string Trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct Field {
  const char* key;
  std::function<std::string(const ExperimentConfig&)> get;
  std::function<void(ExperimentConfig&, const std::string&)> set;
};

template <typename T>
Field IntField(const char* key, T ExperimentConfig::*member) {
  return {key, [member](const ExperimentConfig& c) { return std::to_string(c.*member); },
          [key, member](ExperimentConfig& c, const std::string& v) {
            c.*member = ParseInt(key, v);
          }};
}

Field DoubleField(const char* key, double ExperimentConfig::*member) {
  return {key, [member](const ExperimentConfig& c) { return FormatDouble(c.*member); },
          [key, member](ExperimentConfig& c, const std::string& v) {
            c.*member = ParseDouble(key, v);
          }};
}

Field StringField(const char* key, std::string ExperimentConfig::*member) {
  return {key, [member](const ExperimentConfig& c) { return c.*member; },
          [member](ExperimentConfig& c, const std::string& v) { c.*member = v; }};
}

Field SyntheticInt(const char* key, int SyntheticSpec::*member) {
  return {key,
          [member](const ExperimentConfig& c) { return std::to_string(c.synthetic.*member); },
          [key, member](ExperimentConfig& c, const std::string& v) {
            c.synthetic.*member = ParseInt(key, v);
          }};
}

Field SyntheticDouble(const char* key, double SyntheticSpec::*member) {
  return {key,
          [member](const ExperimentConfig& c) { return FormatDouble(c.synthetic.*member); },
          [key, member](ExperimentConfig& c, const std::string& v) {
            c.synthetic.*member = ParseDouble(key, v);
          }};
}

const std::vector<Field>& Fields() {
  static const std::vector<Field> fields = {
      IntField("n_clients", &ExperimentConfig::n_clients),
      IntField("n_hbc", &ExperimentConfig::n_hbc),
      IntField("rounds", &ExperimentConfig::rounds),
      DoubleField("activation_rate", &ExperimentConfig::activation_rate),
      IntField("local_epochs", &ExperimentConfig::local_epochs),
      DoubleField("learning_rate", &ExperimentConfig::learning_rate),
      IntField("batch_size", &ExperimentConfig::batch_size),
      DoubleField("clip_bound", &ExperimentConfig::clip_bound),
      DoubleField("epsilon", &ExperimentConfig::epsilon),
      {"delta",
       [](const ExperimentConfig& c) {
         return c.delta ? FormatDouble(*c.delta) : std::string("auto");
       },
       [](ExperimentConfig& c, const std::string& v) {
         if (v == "auto") {
           c.delta.reset();
         } else {
           c.delta = ParseDouble("delta", v);
         }
       }},
      DoubleField("alpha", &ExperimentConfig::alpha),
      DoubleField("beta", &ExperimentConfig::beta),
      {"noise_policy",
       [](const ExperimentConfig& c) { return std::string(PolicyName(c.noise_policy)); },
       [](ExperimentConfig& c, const std::string& v) {
         c.noise_policy = ParsePolicyKind(v);
       }},
      DoubleField("time_varying_decay", &ExperimentConfig::time_varying_decay),
      {"hidden_layers",
       [](const ExperimentConfig& c) {
         std::string out;
         for (std::size_t i = 0; i < c.hidden_layers.size(); ++i) {
           if (i) out += ',';
           out += std::to_string(c.hidden_layers[i]);
         }
         return out;
       },
       [](ExperimentConfig& c, const std::string& v) {
         c.hidden_layers.clear();
         std::istringstream in(v);
         std::string item;
         while (std::getline(in, item, ',')) {
           item = Trim(item);
           if (item.empty()) continue;
           const long long width = ParseInteger("hidden_layers", item);
           if (width < 1) {
             throw ConfigError("config key 'hidden_layers': widths must be >= 1");
           }
           c.hidden_layers.push_back(static_cast<std::size_t>(width));
         }
       }},
      {"data_source",
       [](const ExperimentConfig& c) {
         return std::string(c.data_source == DataSource::kCsv ? "csv" : "synthetic");
       },
       [](ExperimentConfig& c, const std::string& v) {
         if (v == "synthetic") {
           c.data_source = DataSource::kSynthetic;
         } else if (v == "csv") {
           c.data_source = DataSource::kCsv;
         } else {
           throw ConfigError("config key 'data_source': expected synthetic or csv, got '" +
                             v + "'");
         }
       }},
      SyntheticInt("samples_per_client", &SyntheticSpec::samples_per_client),
      SyntheticInt("general_features", &SyntheticSpec::general_features),
      SyntheticInt("private_features", &SyntheticSpec::private_features),
      SyntheticInt("num_classes", &SyntheticSpec::num_classes),
      SyntheticDouble("general_separation", &SyntheticSpec::general_separation),
      SyntheticDouble("private_separation", &SyntheticSpec::private_separation),
      SyntheticDouble("general_scale", &SyntheticSpec::general_scale),
      SyntheticDouble("feature_noise", &SyntheticSpec::feature_noise),
      SyntheticDouble("p_frac_min", &SyntheticSpec::p_frac_min),
      SyntheticDouble("p_frac_max", &SyntheticSpec::p_frac_max),
      SyntheticDouble("validation_fraction", &SyntheticSpec::validation_fraction),
      SyntheticDouble("test_fraction", &SyntheticSpec::test_fraction),
      StringField("csv_path", &ExperimentConfig::csv_path),
      StringField("csv_label_column", &ExperimentConfig::csv_label_column),
      StringField("csv_private_column", &ExperimentConfig::csv_private_column),
      {"master_seed",
       [](const ExperimentConfig& c) { return std::to_string(c.master_seed); },
       [](ExperimentConfig& c, const std::string& v) {
         errno = 0;
         char* end = nullptr;
         const unsigned long long s = std::strtoull(v.c_str(), &end, 10);
         if (v.empty() || v[0] == '-' || end != v.c_str() + v.size() || errno == ERANGE) {
           throw ConfigError("config key 'master_seed': '" + v +
                             "' is not an unsigned integer");
         }
         c.master_seed = s;
       }},
      StringField("output_dir", &ExperimentConfig::output_dir),
      IntField("threads", &ExperimentConfig::threads),
  };
  return fields;
}

const Field* FindField(const std::string& key) {
  for (const Field& f : Fields()) {
    if (key == f.key) return &f;
  }
  return nullptr;
}

}  // namespace

int ExperimentConfig::ClientsPerRound() const {
  return static_cast<int>(std::lround(activation_rate * n_clients));
}

TrainConfig ExperimentConfig::train() const {
  return {learning_rate, local_epochs, batch_size, clip_bound};
}

DpParams ExperimentConfig::dp() const {
  return {epsilon, EffectiveDelta(), alpha, beta, clip_bound};
}

SyntheticSpec ExperimentConfig::synthetic_spec() const {
  SyntheticSpec spec = synthetic;
  spec.hbc_clients = n_hbc;
  return spec;
}

void ExperimentConfig::Validate() const {
  std::vector<std::string> errors;
  auto check = [&errors](bool ok, const std::string& msg) {
    if (!ok) errors.push_back(msg);
  };
  auto capture = [&errors](const std::function<void()>& fn) {
    try {
      fn();
    } catch (const ConfigError& e) {
      errors.emplace_back(e.what());
    }
  };
  check(n_clients >= 1, "n_clients must be >= 1");
  check(n_hbc >= 0 && n_hbc <= n_clients, "n_hbc must lie in [0, n_clients]");
  check(rounds >= 0, "rounds must be >= 0");
  check(activation_rate > 0.0 && activation_rate <= 1.0,
        "activation_rate must lie in (0, 1], got " + FormatDouble(activation_rate));
  if (activation_rate > 0.0 && activation_rate <= 1.0 && n_clients >= 1) {
    check(ClientsPerRound() >= 1,
          "activation_rate * n_clients must round to at least 1 client");
  }
  capture([this] { train().Validate(); });
  capture([this] { dp().Validate(); });
  check(time_varying_decay > 0.0 && time_varying_decay < 1.0,
        "time_varying_decay must lie in (0, 1)");
  check(threads >= 1, "threads must be >= 1");
  if (data_source == DataSource::kSynthetic) {
    if (n_clients >= 1) capture([this] { synthetic_spec().Validate(n_clients); });
  } else {
    check(!csv_path.empty(), "csv_path must be set when data_source = csv");
    check(synthetic.validation_fraction > 0.0 && synthetic.validation_fraction < 1.0,
          "validation_fraction must lie in (0, 1)");
    check(synthetic.test_fraction > 0.0 && synthetic.test_fraction < 1.0,
          "test_fraction must lie in (0, 1)");
  }
  if (!errors.empty()) {
    std::string msg = "invalid config: ";
    for (std::size_t i = 0; i < errors.size(); ++i) {
      if (i) msg += "; ";
      msg += errors[i];
    }
    throw ConfigError(msg);
  }
}

void ApplyPaperProfile(ExperimentConfig& config) {
  config.n_clients = 100;
  config.n_hbc = 10;
  config.rounds = 400;
  config.activation_rate = 0.1;
  config.local_epochs = 2;
  config.learning_rate = 0.1;
  config.clip_bound = 20.0;
}

std::vector<std::string> ConfigKeys() {
  std::vector<std::string> keys;
  for (const Field& f : Fields()) keys.emplace_back(f.key);
  return keys;
}

void ApplyConfigValue(ExperimentConfig& config, const std::string& key,
                      const std::string& value) {
  const Field* field = FindField(key);
  if (field == nullptr) throw ConfigError("unknown config key '" + key + "'");
  field->set(config, Trim(value));
}

ExperimentConfig ParseConfigText(const std::string& text, ExperimentConfig base) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected 'key = value', got '" + line + "'");
    }
    ApplyConfigValue(base, Trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return base;
}

ExperimentConfig ParseConfig(
    const std::string& path,
    const std::vector<std::pair<std::string, std::string>>& overrides,
    bool paper_profile) {
  ExperimentConfig config;
  if (paper_profile) ApplyPaperProfile(config);
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    config = ParseConfigText(text.str(), config);
  }
  for (const auto& [key, value] : overrides) ApplyConfigValue(config, key, value);
  config.Validate();
  return config;
}

std::string SerializeConfig(const ExperimentConfig& config) {
  std::string out;
  for (const Field& f : Fields()) {
    out += f.key;
    out += " = ";
    out += f.get(config);
    out += '\n';
  }
  return out;
}

std::string ConfigDigest(const ExperimentConfig& config) {
  ExperimentConfig normalized = config;
  normalized.master_seed = 0;
  normalized.output_dir.clear();
  normalized.threads = 1;
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : SerializeConfig(normalized)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace fedsdp
