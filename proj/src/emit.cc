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


#include "genaudio/emit.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "genaudio/error.h"
#include "genaudio/report.h"

namespace genaudio {
namespace {

using nlohmann::json;

std::string optional_field(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string();
}

// Number of code points, which is the display width for the labels used here.
size_t display_width(const std::string& s) {
  return static_cast<size_t>(std::count_if(s.begin(), s.end(), [](char c) {
    return (static_cast<unsigned char>(c) & 0xC0) != 0x80;
  }));
}

std::string pad_right(const std::string& s, size_t width) {
  const size_t w = display_width(s);
  return w >= width ? s : s + std::string(width - w, ' ');
}

std::string pad_left(const std::string& s, size_t width) {
  const size_t w = display_width(s);
  return w >= width ? s : std::string(width - w, ' ') + s;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  return fields;
}

double parse_score(const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    throw Error(ErrorCode::kInvalidArgument, "not a number: '" + text + "'");
  }
  return v;
}

// ---- SVG ----------------------------------------------------------------

constexpr int kPanelWidth = 420;
constexpr int kPanelHeight = 300;
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 20;
constexpr int kMarginTop = 36;
constexpr int kMarginBottom = 50;
constexpr int kYTicks = 5;

std::string coord(double v) { return format_fixed(v, 2); }

std::string tick_label(double v) {
  if (v == 0.0) return "0";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v,
                                 std::chars_format::general, 4);
  return std::string(buf, res.ptr);
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Series {
  std::string title;
  std::string color;
  std::vector<std::optional<double>> values;
};

void draw_panel(std::ostringstream& svg, const Series& series,
                const std::vector<double>& fractions, int ox, int oy) {
  const double x0 = ox + kMarginLeft;
  const double x1 = ox + kPanelWidth - kMarginRight;
  const double y0 = oy + kPanelHeight - kMarginBottom;  // bottom
  const double y1 = oy + kMarginTop;                    // top

  double lo = 0.0;
  double hi = 0.0;
  bool any = false;
  for (const auto& v : series.values) {
    if (!v) continue;
    lo = any ? std::min(lo, *v) : *v;
    hi = any ? std::max(hi, *v) : *v;
    any = true;
  }
  if (!any || hi - lo <= 0.0) {
    const double pad = any && lo != 0.0 ? 0.1 * std::abs(lo) : 1.0;
    lo -= pad;
    hi += pad;
  }
  const double xmin = fractions.front();
  const double xmax = fractions.back();
  const auto px = [&](double f) { return x0 + (f - xmin) / (xmax - xmin) * (x1 - x0); };
  const auto py = [&](double v) { return y0 - (v - lo) / (hi - lo) * (y0 - y1); };

  svg << "<g>\n";
  svg << "<text x=\"" << coord((x0 + x1) / 2) << "\" y=\"" << oy + 22
      << "\" text-anchor=\"middle\" font-size=\"15\">" << escape_xml(series.title)
      << "</text>\n";
  svg << "<line x1=\"" << coord(x0) << "\" y1=\"" << coord(y0) << "\" x2=\""
      << coord(x1) << "\" y2=\"" << coord(y0) << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << coord(x0) << "\" y1=\"" << coord(y0) << "\" x2=\""
      << coord(x0) << "\" y2=\"" << coord(y1) << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double f = xmin + (xmax - xmin) * i / 5.0;
    svg << "<line x1=\"" << coord(px(f)) << "\" y1=\"" << coord(y0) << "\" x2=\""
        << coord(px(f)) << "\" y2=\"" << coord(y0 + 5) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << coord(px(f)) << "\" y=\"" << coord(y0 + 18)
        << "\" text-anchor=\"middle\" font-size=\"11\">" << tick_label(f)
        << "</text>\n";
  }
  for (int i = 0; i <= kYTicks; ++i) {
    const double v = lo + (hi - lo) * i / kYTicks;
    svg << "<line x1=\"" << coord(x0 - 5) << "\" y1=\"" << coord(py(v)) << "\" x2=\""
        << coord(x0) << "\" y2=\"" << coord(py(v)) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << coord(x0 - 8) << "\" y=\"" << coord(py(v) + 4)
        << "\" text-anchor=\"end\" font-size=\"11\">" << tick_label(v) << "</text>\n";
  }
  svg << "<text x=\"" << coord((x0 + x1) / 2) << "\" y=\"" << coord(y0 + 38)
      << "\" text-anchor=\"middle\" font-size=\"12\">corrupted fraction</text>\n";
  const double ymid = (y0 + y1) / 2;
  svg << "<text x=\"" << ox + 16 << "\" y=\"" << coord(ymid)
      << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 "
      << ox + 16 << " " << coord(ymid) << ")\">" << escape_xml(series.title)
      << "</text>\n";

  std::string points;
  for (size_t i = 0; i < fractions.size(); ++i) {
    if (!series.values[i]) continue;
    if (!points.empty()) points += ' ';
    points += coord(px(fractions[i])) + "," + coord(py(*series.values[i]));
  }
  if (!points.empty()) {
    svg << "<polyline fill=\"none\" stroke=\"" << series.color
        << "\" stroke-width=\"2\" points=\"" << points << "\"/>\n";
  }
  for (size_t i = 0; i < fractions.size(); ++i) {
    if (!series.values[i]) continue;
    svg << "<circle cx=\"" << coord(px(fractions[i])) << "\" cy=\""
        << coord(py(*series.values[i])) << "\" r=\"3\" fill=\"" << series.color
        << "\"/>\n";
  }
  svg << "</g>\n";
}

void require_target(const std::optional<std::filesystem::path>& target,
                    const char* format, const char* what) {
  if (target) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(format) + " output is not available for " + what);
  }
}

}  // namespace

std::string format_number(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string format_fixed(double value, int decimals) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value,
                                 std::chars_format::fixed, decimals);
  std::string out(buf, res.ptr);
  // Avoid "-0.00" for values that round to zero.
  if (out.front() == '-' && out.find_first_not_of("-0.") == std::string::npos) {
    out.erase(0, 1);
  }
  return out;
}

json to_json(const SweepResult& result) {
  validate(result);
  json points = json::array();
  for (size_t i = 0; i < result.fractions.size(); ++i) {
    points.push_back({{"fraction", result.fractions[i]},
                      {"corrupted_ids", result.corrupted_ids[i]},
                      {"report", to_json(result.reports[i])}});
  }
  return {
      {"kind", std::string(corruption_kind_name(result.kind))},
      {"seed", result.seed},
      {"segments", result.segments},
      {"corpus", result.corpus},
      {"corpus_size", result.corpus_size},
      {"fractions", result.fractions},
      {"backbones",
       {{"fd", result.fd_backbone},
        {"fad", result.fad_backbone},
        {"logits", result.logits_backbone}}},
      {"points", std::move(points)},
      {"warnings", result.warnings},
  };
}

SweepResult sweep_result_from_json(const json& j) {
  try {
    SweepResult result;
    result.kind = parse_corruption_kind(j.at("kind").get<std::string>());
    result.seed = j.at("seed").get<uint64_t>();
    result.segments = j.at("segments").get<int>();
    result.corpus = j.at("corpus").get<std::string>();
    result.corpus_size = j.at("corpus_size").get<int64_t>();
    result.fractions = j.at("fractions").get<std::vector<double>>();
    result.fd_backbone = j.at("backbones").at("fd").get<std::string>();
    result.fad_backbone = j.at("backbones").at("fad").get<std::string>();
    result.logits_backbone = j.at("backbones").at("logits").get<std::string>();
    for (const json& point : j.at("points")) {
      result.corrupted_ids.push_back(
          point.at("corrupted_ids").get<std::vector<std::string>>());
      result.reports.push_back(metric_report_from_json(point.at("report")));
    }
    result.warnings = j.at("warnings").get<std::vector<std::string>>();
    validate(result);
    return result;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kUnsupportedEncoding,
                std::string("malformed sweep JSON: ") + e.what());
  }
}

std::string sweep_csv(const SweepResult& result) {
  validate(result);
  std::string out = "fraction,fd,isc,kl,fad\n";
  for (size_t i = 0; i < result.fractions.size(); ++i) {
    const MetricReport& r = result.reports[i];
    out += format_number(result.fractions[i]) + "," + optional_field(r.fd) + "," +
           optional_field(r.isc) + "," + optional_field(r.kl) + "," +
           optional_field(r.fad) + "\n";
  }
  return out;
}

std::string report_csv(const MetricReport& r) {
  return "fd,isc,kl,fad\n" + optional_field(r.fd) + "," + optional_field(r.isc) +
         "," + optional_field(r.kl) + "," + optional_field(r.fad) + "\n";
}

std::string sweep_svg(const SweepResult& result) {
  validate(result);
  const size_t n = result.reports.size();
  std::vector<Series> series = {
      {"FD", "#1f77b4", {}}, {"IS", "#ff7f0e", {}},
      {"KL", "#2ca02c", {}}, {"FAD", "#d62728", {}}};
  for (size_t i = 0; i < n; ++i) {
    const MetricReport& r = result.reports[i];
    series[0].values.push_back(r.fd);
    series[1].values.push_back(r.isc);
    series[2].values.push_back(r.kl);
    series[3].values.push_back(r.fad);
  }

  const int width = 2 * kPanelWidth;
  const int height = 2 * kPanelHeight + 40;
  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height
      << "\" font-family=\"sans-serif\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << width / 2
      << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">Metric response to "
      << escape_xml(std::string(corruption_kind_name(result.kind)))
      << " corruption (seed " << result.seed << ")</text>\n";
  for (size_t p = 0; p < series.size(); ++p) {
    const int ox = static_cast<int>(p % 2) * kPanelWidth;
    const int oy = 40 + static_cast<int>(p / 2) * kPanelHeight;
    draw_panel(svg, series[p], result.fractions, ox, oy);
  }
  svg << "</svg>\n";
  return svg.str();
}

void validate(const BenchmarkTable& table) {
  for (const BenchmarkRow& row : table.rows) {
    for (double v : {row.fd, row.isc, row.kl, row.fad}) {
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kNonFiniteValues,
                    "table row " + row.dataset + "/" + row.condition);
      }
    }
  }
}

std::string render_table(const BenchmarkTable& table) {
  validate(table);
  const std::vector<std::string> header = {"Dataset", "Test Condition", "FD↓",
                                           "IS↑",     "KL↓",            "FAD↓"};
  std::vector<std::vector<std::string>> cells;
  std::string previous;
  for (size_t i = 0; i < table.rows.size(); ++i) {
    const BenchmarkRow& row = table.rows[i];
    const bool repeat = i > 0 && row.dataset == previous;
    previous = row.dataset;
    cells.push_back({repeat ? "" : row.dataset, row.condition,
                     format_fixed(row.fd, 2), format_fixed(row.isc, 2),
                     format_fixed(row.kl, 2), format_fixed(row.fad, 2)});
  }
  std::vector<size_t> widths(header.size());
  for (size_t c = 0; c < header.size(); ++c) {
    widths[c] = display_width(header[c]);
    for (const auto& line : cells) widths[c] = std::max(widths[c], display_width(line[c]));
  }
  const auto render = [&](const std::vector<std::string>& line) {
    std::string out;
    for (size_t c = 0; c < line.size(); ++c) {
      if (c > 0) out += "  ";
      out += c < 2 ? pad_right(line[c], widths[c]) : pad_left(line[c], widths[c]);
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out + "\n";
  };
  std::string out = render(header);
  std::vector<std::string> rule;
  for (size_t w : widths) rule.emplace_back(w, '-');
  out += render(rule);
  for (const auto& line : cells) out += render(line);
  return out;
}

std::string table_csv(const BenchmarkTable& table) {
  validate(table);
  std::string out = "dataset,condition,fd,isc,kl,fad\n";
  for (const BenchmarkRow& row : table.rows) {
    out += csv_field(row.dataset) + "," + csv_field(row.condition) + "," +
           format_fixed(row.fd, 2) + "," + format_fixed(row.isc, 2) + "," +
           format_fixed(row.kl, 2) + "," + format_fixed(row.fad, 2) + "\n";
  }
  return out;
}

BenchmarkTable table_from_csv(const std::string& csv) {
  BenchmarkTable table;
  std::istringstream in(csv);
  std::string line;
  bool header = true;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv_line(line);
    if (header && !f.empty() && f[0] == "dataset") {
      header = false;
      continue;
    }
    header = false;
    if (f.size() != 6) {
      throw Error(ErrorCode::kInvalidArgument,
                  "table line " + std::to_string(line_no) + " needs 6 fields");
    }
    try {
      table.rows.push_back({f[0], f[1], parse_score(f[2]), parse_score(f[3]),
                            parse_score(f[4]), parse_score(f[5])});
    } catch (const Error& e) {
      rethrow_with_context(e, "table line " + std::to_string(line_no));
    }
  }
  validate(table);
  return table;
}

json to_json(const BenchmarkTable& table) {
  validate(table);
  json rows = json::array();
  for (const BenchmarkRow& row : table.rows) {
    rows.push_back({{"dataset", row.dataset},
                    {"condition", row.condition},
                    {"fd", row.fd},
                    {"isc", row.isc},
                    {"kl", row.kl},
                    {"fad", row.fad}});
  }
  return {{"columns", {"FD↓", "IS↑", "KL↓", "FAD↓"}}, {"rows", std::move(rows)}};
}

BenchmarkTable benchmark_table_from_json(const json& j) {
  try {
    BenchmarkTable table;
    for (const json& row : j.at("rows")) {
      table.rows.push_back({row.at("dataset").get<std::string>(),
                            row.at("condition").get<std::string>(),
                            row.at("fd").get<double>(), row.at("isc").get<double>(),
                            row.at("kl").get<double>(), row.at("fad").get<double>()});
    }
    validate(table);
    return table;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kUnsupportedEncoding,
                std::string("malformed table JSON: ") + e.what());
  }
}

void emit_report(const SweepResult& result, const EmitTargets& targets) {
  require_target(targets.text, "text", "sweeps");
  validate(result);
  if (targets.csv) write_text_file(*targets.csv, sweep_csv(result));
  if (targets.json) write_text_file(*targets.json, dump_json(to_json(result)));
  if (targets.svg) write_text_file(*targets.svg, sweep_svg(result));
}

void emit_report(const MetricReport& report, const EmitTargets& targets) {
  require_target(targets.text, "text", "metric reports");
  require_target(targets.svg, "svg", "metric reports");
  if (targets.csv) write_text_file(*targets.csv, report_csv(report));
  if (targets.json) write_report(report, *targets.json);
}

void emit_report(const BenchmarkTable& table, const EmitTargets& targets) {
  require_target(targets.svg, "svg", "benchmark tables");
  validate(table);
  if (targets.text) write_text_file(*targets.text, render_table(table));
  if (targets.csv) write_text_file(*targets.csv, table_csv(table));
  if (targets.json) write_text_file(*targets.json, dump_json(to_json(table)));
}

}  // namespace genaudio
