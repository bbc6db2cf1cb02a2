// Copyright 2026 The genaudio-eval Authors
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


// Serializers for sweep results, metric reports and benchmark tables: JSON,
// CSV, a fixed-width text table and a four-panel SVG line chart. All output
// is a pure function of the input, so repeated runs are byte-identical.

#ifndef GENAUDIO_EMIT_H_
#define GENAUDIO_EMIT_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "genaudio/harness.h"
#include "genaudio/metrics.h"
#include "json.hpp"

namespace genaudio {

/// Shortest decimal text that reads back as the same double.
std::string format_number(double value);

/// Fixed-point text with `decimals` digits after the point.
std::string format_fixed(double value, int decimals);

nlohmann::json to_json(const SweepResult& result);
SweepResult sweep_result_from_json(const nlohmann::json& j);

/// Header "fraction,fd,isc,kl,fad" and one row per fraction; absent scores
/// are empty fields.
std::string sweep_csv(const SweepResult& result);

/// Single-row CSV of a report with the same columns minus the fraction.
std::string report_csv(const MetricReport& report);

/// Four panels (FD, IS, KL, FAD) against the corrupted fraction.
std::string sweep_svg(const SweepResult& result);

struct BenchmarkRow {
  std::string dataset;
  std::string condition;
  double fd = 0.0;
  double isc = 0.0;
  double kl = 0.0;
  double fad = 0.0;

  bool operator==(const BenchmarkRow&) const = default;
};

struct BenchmarkTable {
  std::vector<BenchmarkRow> rows;

  bool operator==(const BenchmarkTable&) const = default;
};

/// Throws unless every score is finite.
void validate(const BenchmarkTable& table);

/// Fixed-width text with header "Dataset  Test Condition  FD↓  IS↑  KL↓
/// FAD↓" and scores to two decimals. A dataset label repeated on
/// consecutive rows is printed once, like a merged cell.
std::string render_table(const BenchmarkTable& table);

/// "dataset,condition,fd,isc,kl,fad" with two-decimal scores.
std::string table_csv(const BenchmarkTable& table);
BenchmarkTable table_from_csv(const std::string& csv);

nlohmann::json to_json(const BenchmarkTable& table);
BenchmarkTable benchmark_table_from_json(const nlohmann::json& j);

/// Output paths; unset entries are skipped.
struct EmitTargets {
  std::optional<std::filesystem::path> text;  // benchmark tables only
  std::optional<std::filesystem::path> json;
  std::optional<std::filesystem::path> csv;
  std::optional<std::filesystem::path> svg;  // sweeps only
};

void emit_report(const SweepResult& result, const EmitTargets& targets);
void emit_report(const MetricReport& report, const EmitTargets& targets);
void emit_report(const BenchmarkTable& table, const EmitTargets& targets);

}  // namespace genaudio

#endif  // GENAUDIO_EMIT_H_
