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

#include "genaudio/report.h"

#include <cmath>

#include "binary_io.h"
#include "genaudio/error.h"

namespace genaudio {
namespace {

nlohmann::json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::optional<double> read_optional(const nlohmann::json& j, const char* key) {
  const nlohmann::json& v = j.at(key);
  if (v.is_null()) return std::nullopt;
  return v.get<double>();
}

void check_scores(const MetricReport& r) {
  auto bad = [](const char* what) {
    throw Error(ErrorCode::kNumericFailure,
                std::string("report score out of range: ") + what);
  };
  for (const auto* v : {&r.fd, &r.isc, &r.kl, &r.fad}) {
    if (*v && !std::isfinite(**v)) bad("non-finite");
  }
  if (r.isc && *r.isc < 1.0 - 1e-9) bad("isc < 1");
  for (const auto* v : {&r.fd, &r.kl, &r.fad}) {
    if (*v && **v < -1e-9) bad("negative distance");
  }
}

}  // namespace

nlohmann::json to_json(const MetricReport& report) {
  check_scores(report);
  nlohmann::json j = nlohmann::json::object();
  j["fd"] = optional_number(report.fd);
  j["isc"] = optional_number(report.isc);
  j["kl"] = optional_number(report.kl);
  j["fad"] = optional_number(report.fad);
  j["backbones"] = {{"fd", report.fd_backbone},
                    {"fad", report.fad_backbone},
                    {"logits", report.logits_backbone}};
  j["n_generated"] = report.n_generated;
  j["n_reference"] = report.n_reference;
  j["kl_direction"] = report.kl_direction;
  j["config_digest"] = report.config_digest;
  j["notes"] = report.notes;
  return j;
}

MetricReport metric_report_from_json(const nlohmann::json& j) {
  try {
    MetricReport r;
    r.fd = read_optional(j, "fd");
    r.isc = read_optional(j, "isc");
    r.kl = read_optional(j, "kl");
    r.fad = read_optional(j, "fad");
    const nlohmann::json& b = j.at("backbones");
    r.fd_backbone = b.at("fd").get<std::string>();
    r.fad_backbone = b.at("fad").get<std::string>();
    r.logits_backbone = b.at("logits").get<std::string>();
    r.n_generated = j.at("n_generated").get<int64_t>();
    r.n_reference = j.at("n_reference").get<int64_t>();
    r.kl_direction = j.at("kl_direction").get<std::string>();
    r.config_digest = j.at("config_digest").get<std::string>();
    if (j.contains("notes")) r.notes = j["notes"].get<std::vector<std::string>>();
    check_scores(r);
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kUnsupportedEncoding,
                std::string("metric report JSON: ") + e.what());
  }
}

std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

void write_text_file(const std::filesystem::path& path,
                     const std::string& text) {
  binio::write_file(path, text);
}

std::string read_text_file(const std::filesystem::path& path) {
  return binio::read_file(path);
}

void write_report(const MetricReport& report,
                  const std::filesystem::path& path) {
  write_text_file(path, dump_json(to_json(report)));
}

MetricReport read_report(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kUnsupportedEncoding, path.string() + ": " + e.what());
  }
  return metric_report_from_json(j);
}

}  // namespace genaudio
