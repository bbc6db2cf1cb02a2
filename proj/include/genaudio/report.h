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

#ifndef GENAUDIO_REPORT_H_
#define GENAUDIO_REPORT_H_

#include <filesystem>
#include <string>

#include "genaudio/metrics.h"
#include "json.hpp"

namespace genaudio {

// {"fd": number|null, "isc": ..., "kl": ..., "fad": ...,
//  "backbones": {"fd": str, "fad": str, "logits": str},
//  "n_generated": int, "n_reference": int, "kl_direction": "ref||gen",
//  "config_digest": str, "notes": [str]}
nlohmann::json to_json(const MetricReport& report);
MetricReport metric_report_from_json(const nlohmann::json& j);

/// Pretty-printed, trailing newline.
std::string dump_json(const nlohmann::json& j);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

void write_report(const MetricReport& report, const std::filesystem::path& path);
MetricReport read_report(const std::filesystem::path& path);

}  // namespace genaudio

#endif  // GENAUDIO_REPORT_H_
