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

#include "fedsdp/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fedsdp/error.h"

namespace fedsdp {
namespace {

constexpr char kRoundsHeader[] =
    "round,selected_ids,dropped_ids,global_accuracy,global_loss,total_sigma,"
    "cumulative_sigma";
constexpr char kPrivacyHeader[] =
    "round,client_id,c_full,c_private,c_general,gamma_private,gamma_general,"
    "ratio,tolerance,sigma";

std::string Real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string JoinIds(const std::vector<int>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(ids[i]);
  }
  return out;
}

std::ofstream OpenForWrite(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  return out;
}

void Finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("write failed for '" + path + "'");
}

std::vector<std::string> Split(const std::string& line, char sep) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) cells.push_back(cell);
  if (!line.empty() && line.back() == sep) cells.emplace_back();
  return cells;
}

double ToReal(const std::string& s, const std::string& path, std::size_t row) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw ParseError("'" + path + "' row " + std::to_string(row) + ": bad number '" +
                         s + "'",
                     row);
  }
  return v;
}

int ToInt(const std::string& s, const std::string& path, std::size_t row) {
  const double v = ToReal(s, path, row);
  if (v != std::floor(v)) {
    throw ParseError("'" + path + "' row " + std::to_string(row) + ": bad integer '" +
                         s + "'",
                     row);
  }
  return static_cast<int>(v);
}

std::vector<int> ToIds(const std::string& s, const std::string& path, std::size_t row) {
  std::vector<int> ids;
  if (s.empty()) return ids;
  for (const std::string& part : Split(s, ';')) ids.push_back(ToInt(part, path, row));
  return ids;
}

std::vector<std::vector<std::string>> ReadTable(const std::string& path,
                                                const std::string& header,
                                                std::size_t columns) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != header) {
    throw ParseError("'" + path + "': unexpected header", 0);
  }
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    rows.push_back(Split(line, ','));
    if (rows.back().size() != columns) {
      throw ParseError("'" + path + "' row " + std::to_string(rows.size()) +
                           ": expected " + std::to_string(columns) + " cells",
                       rows.size());
    }
  }
  return rows;
}

}  // namespace

RunSummary Summarize(const std::vector<RoundLog>& logs) {
  if (logs.empty()) throw EmptyDataError("cannot summarize an empty run");
  RunSummary s;
  s.best_accuracy = logs.front().global_accuracy;
  for (const RoundLog& log : logs) {
    s.best_accuracy = std::max(s.best_accuracy, log.global_accuracy);
    s.total_noise += log.total_sigma;
  }
  s.final_k = static_cast<int>(std::min<std::size_t>(5, logs.size()));
  const auto tail = logs.end() - s.final_k;
  double sum = 0.0;
  for (auto it = tail; it != logs.end(); ++it) sum += it->global_accuracy;
  s.final5_mean = sum / s.final_k;
  double sq = 0.0;
  for (auto it = tail; it != logs.end(); ++it) {
    const double d = it->global_accuracy - s.final5_mean;
    sq += d * d;
  }
  s.final5_std = std::sqrt(sq / s.final_k);
  return s;
}

void WriteRoundsCsv(const std::vector<RoundLog>& logs, const std::string& path) {
  std::ofstream out = OpenForWrite(path);
  out << kRoundsHeader << '\n';
  for (const RoundLog& log : logs) {
    out << log.round << ',' << JoinIds(log.selected_ids) << ','
        << JoinIds(log.dropped_ids) << ',' << Real(log.global_accuracy) << ','
        << Real(log.global_loss) << ',' << Real(log.total_sigma) << ','
        << Real(log.cumulative_sigma) << '\n';
  }
  Finish(out, path);
}

void WritePrivacyCsv(const std::vector<RoundLog>& logs, const std::string& path) {
  std::ofstream out = OpenForWrite(path);
  out << kPrivacyHeader << '\n';
  for (const RoundLog& log : logs) {
    for (const PrivacyReport& r : log.per_client) {
      out << log.round << ',' << r.client_id << ',' << Real(r.c_full) << ','
          << Real(r.c_private) << ',' << Real(r.c_general) << ','
          << Real(r.gamma_private) << ',' << Real(r.gamma_general) << ','
          << Real(r.ratio) << ',' << Real(r.tolerance) << ',' << Real(r.sigma)
          << '\n';
    }
  }
  Finish(out, path);
}

std::vector<RoundLog> ReadRunLogs(const std::string& rounds_path,
                                  const std::string& privacy_path) {
  std::vector<RoundLog> logs;
  std::map<int, std::size_t> index;
  std::size_t row = 0;
  for (const auto& cells : ReadTable(rounds_path, kRoundsHeader, 7)) {
    ++row;
    RoundLog log;
    log.round = ToInt(cells[0], rounds_path, row);
    log.selected_ids = ToIds(cells[1], rounds_path, row);
    log.dropped_ids = ToIds(cells[2], rounds_path, row);
    log.global_accuracy = ToReal(cells[3], rounds_path, row);
    log.global_loss = ToReal(cells[4], rounds_path, row);
    log.total_sigma = ToReal(cells[5], rounds_path, row);
    log.cumulative_sigma = ToReal(cells[6], rounds_path, row);
    index[log.round] = logs.size();
    logs.push_back(std::move(log));
  }
  row = 0;
  for (const auto& cells : ReadTable(privacy_path, kPrivacyHeader, 10)) {
    ++row;
    const int round = ToInt(cells[0], privacy_path, row);
    const auto it = index.find(round);
    if (it == index.end()) {
      throw ParseError("'" + privacy_path + "' row " + std::to_string(row) +
                           ": round " + std::to_string(round) + " not in rounds file",
                       row);
    }
    PrivacyReport r;
    r.client_id = ToInt(cells[1], privacy_path, row);
    r.c_full = ToReal(cells[2], privacy_path, row);
    r.c_private = ToReal(cells[3], privacy_path, row);
    r.c_general = ToReal(cells[4], privacy_path, row);
    r.gamma_private = ToReal(cells[5], privacy_path, row);
    r.gamma_general = ToReal(cells[6], privacy_path, row);
    r.ratio = ToReal(cells[7], privacy_path, row);
    r.tolerance = ToReal(cells[8], privacy_path, row);
    r.sigma = ToReal(cells[9], privacy_path, row);
    logs[it->second].per_client.push_back(r);
  }
  return logs;
}

void WriteSummaryJson(const RunSummary& summary, const std::string& policy,
                      uint64_t master_seed, const std::string& path) {
  nlohmann::json j;
  j["best_accuracy"] = summary.best_accuracy;
  j["final5_mean"] = summary.final5_mean;
  j["final5_std"] = summary.final5_std;
  j["final_k"] = summary.final_k;
  j["degraded"] = summary.degraded();
  j["total_noise"] = summary.total_noise;
  j["config_digest"] = summary.config_digest;
  j["policy"] = policy;
  j["master_seed"] = master_seed;
  std::ofstream out = OpenForWrite(path);
  out << j.dump(2) << '\n';
  Finish(out, path);
}

std::string RunDirectoryName(const ExperimentConfig& config) {
  return ConfigDigest(config) + "-s" + std::to_string(config.master_seed);
}

RunSummary WriteRunDirectory(const ExperimentConfig& config,
                             const std::vector<RoundLog>& logs,
                             const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir + "': " + ec.message());
  const std::filesystem::path base(dir);
  WriteRoundsCsv(logs, (base / "rounds.csv").string());
  WritePrivacyCsv(logs, (base / "privacy.csv").string());
  RunSummary summary;
  if (!logs.empty()) summary = Summarize(logs);
  summary.config_digest = ConfigDigest(config);
  WriteSummaryJson(summary, std::string(PolicyName(config.noise_policy)),
                   config.master_seed, (base / "summary.json").string());
  return summary;
}

}  // namespace fedsdp
