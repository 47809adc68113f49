#include "retx/cli/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "retx/error.hpp"

#ifndef RETX_VERSION
#define RETX_VERSION "unknown"
#endif

namespace retx::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

struct Row {
  std::uint64_t n;
  std::vector<std::optional<double>> cells;  // one per csv column after n
};

std::vector<Row> tabulate(const BoundRun& run) {
  const auto& cols = csv_columns();
  std::vector<Row> rows;
  rows.reserve(run.grid.size());
  for (std::uint64_t n : run.grid) rows.push_back({n, std::vector<std::optional<double>>(cols.size() - 1)});
  auto col_index = [&](std::string_view name) {
    return static_cast<std::size_t>(std::find(cols.begin(), cols.end(), name) - cols.begin()) - 1;
  };
  for (const CcdfCurve& c : run.curves) {
    const std::size_t j = col_index(column_name(c.source));
    for (const CurvePoint& pt : c.points) {
      const auto i = static_cast<std::size_t>(std::lower_bound(run.grid.begin(), run.grid.end(), pt.n) -
                                              run.grid.begin());
      if (i >= rows.size() || rows[i].n != pt.n) continue;
      rows[i].cells[j] = pt.value;
      if (c.source == CurveSource::MonteCarlo) {
        rows[i].cells[j + 1] = pt.ci_lo;
        rows[i].cells[j + 2] = pt.ci_hi;
      }
    }
  }
  return rows;
}

json number_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

json report_json(const BoundReport& r) {
  json j;
  j["label"] = r.label;
  j["bound"] = format_number(r.bound);
  j["alpha"] = r.alpha;
  j["gbar_b"] = r.gbar_b;
  j["F_b"] = r.F_b;
  j["coupling_residual"] = r.coupling_residual ? json(*r.coupling_residual) : json(nullptr);
  json errs = json::object();
  for (const auto& [src, e] : r.max_rel_err) errs[std::string(column_name(src))] = e;
  j["max_rel_err"] = errs;
  j["coverage"] = r.coverage ? json(*r.coverage) : json(nullptr);
  j["coverage_points"] = r.coverage_points;
  if (r.transition) {
    j["transition"] = {{"n_heuristic", r.transition->n_heuristic},
                       {"n_fixed_point", r.transition->n_fixed_point},
                       {"bracket", {r.transition->bracket_lo, r.transition->bracket_hi}}};
  } else {
    j["transition"] = nullptr;
  }
  j["notes"] = r.notes;
  return j;
}

void write_file(const std::string& path, const std::string& content) {
  const fs::path p(path);
  std::error_code ec;
  if (p.has_parent_path()) fs::create_directories(p.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::IoFailure, "cannot open " + path + " for writing");
  out << content;
  out.close();
  if (!out) fail(Errc::IoFailure, "write to " + path + " failed");
}

std::string bound_tag(double b) {
  if (std::isinf(b)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", b);
  return buf;
}

}  // namespace

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols = {"n",      "mc_ccdf",        "mc_ci_lo",  "mc_ci_hi", "oracle",
                                                "uniform_approx", "power_law", "exp_tail", "exact_integer",
                                                "log_body"};
  return cols;
}

std::string curves_csv(const BoundRun& run) {
  std::ostringstream os;
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << "\n";
  for (const Row& row : tabulate(run)) {
    os << row.n;
    for (const auto& cell : row.cells) {
      os << ",";
      if (cell) os << format_number(*cell);
    }
    os << "\n";
  }
  return os.str();
}

std::string curves_json(const BoundRun& run) {
  json j;
  j["label"] = run.report.label;
  j["bound"] = format_number(run.report.bound);
  j["columns"] = csv_columns();
  json rows = json::array();
  const auto& cols = csv_columns();
  for (const Row& row : tabulate(run)) {
    json r;
    r["n"] = row.n;
    for (std::size_t i = 0; i < row.cells.size(); ++i) {
      r[cols[i + 1]] = row.cells[i] ? number_or_null(*row.cells[i]) : json(nullptr);
    }
    rows.push_back(r);
  }
  j["rows"] = rows;
  return j.dump(2) + "\n";
}

std::string meta_json(const ExperimentResult& result, const ExperimentConfig& cfg) {
  json j;
  j["artifact"] = "retx";
  j["version"] = RETX_VERSION;
  j["seed"] = cfg.seed;
  j["samples"] = cfg.samples;
  j["workers"] = cfg.workers;
  j["config"] = to_text(cfg);
  json reports = json::array();
  for (const BoundRun& run : result.runs) reports.push_back(report_json(run.report));
  j["report"] = reports;
  return j.dump(2) + "\n";
}

std::string output_prefix(const ExperimentConfig& cfg) {
  fs::path prefix(cfg.output.empty() ? cfg.name : cfg.output);
  if (prefix.is_relative()) {
    if (const char* dir = std::getenv("RETX_OUTPUT_DIR"); dir && *dir) prefix = fs::path(dir) / prefix;
  }
  return prefix.string();
}

std::string output_stem(const ExperimentConfig& cfg, const BoundRun& run) {
  std::string stem = output_prefix(cfg);
  if (!run.report.label.empty()) stem += "_" + run.report.label;
  return stem + "_b" + bound_tag(run.report.bound);
}

std::vector<std::string> emit_curves(const ExperimentResult& result, const ExperimentConfig& cfg) {
  std::vector<std::string> written;
  for (const BoundRun& run : result.runs) {
    const bool csv = cfg.format == Format::Csv;
    const std::string path = output_stem(cfg, run) + (csv ? ".csv" : ".json");
    write_file(path, csv ? curves_csv(run) : curves_json(run));
    written.push_back(path);
  }
  const std::string meta = output_prefix(cfg) + ".meta.json";
  write_file(meta, meta_json(result, cfg));
  written.push_back(meta);
  return written;
}

CurveTable parse_curves_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) fail(Errc::IoFailure, "empty csv");
  std::vector<std::string> header;
  {
    std::istringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) header.push_back(cell);
  }
  if (header.empty() || header.front() != "n") fail(Errc::IoFailure, "csv must start with column n");
  CurveTable table;
  for (std::size_t i = 1; i < header.size(); ++i) table.columns[header[i]];
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      cells.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (cells.size() != header.size()) fail(Errc::IoFailure, "csv row has the wrong number of fields");
    table.n.push_back(std::stoull(cells[0]));
    for (std::size_t i = 1; i < cells.size(); ++i) {
      auto& col = table.columns[header[i]];
      if (cells[i].empty()) {
        col.push_back(std::nullopt);
      } else {
        char* end = nullptr;
        const double v = std::strtod(cells[i].c_str(), &end);
        if (end != cells[i].c_str() + cells[i].size()) fail(Errc::IoFailure, "bad number in csv: " + cells[i]);
        col.push_back(v);
      }
    }
  }
  return table;
}

CurveTable read_curves_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::IoFailure, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_curves_csv(ss.str());
}

}  // namespace retx::cli
