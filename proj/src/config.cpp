#include "castsize/config.hpp"

#include <charconv>

#include "castsize/csv.hpp"

namespace castsize {

namespace fs = std::filesystem;

RunMode parse_run_mode(std::string_view s) {
  if (s == "conflict")
    return RunMode::conflict;
  if (s == "dialogue")
    return RunMode::dialogue;
  if (s == "both")
    return RunMode::both;
  throw Error(ErrorCode::ConfigError, "mode must be conflict, dialogue or both");
}

std::string_view to_string(RunMode m) {
  switch (m) {
  case RunMode::conflict: return "conflict";
  case RunMode::dialogue: return "dialogue";
  case RunMode::both: return "both";
  }
  return "?";
}

ReportFormat parse_report_format(std::string_view s) {
  if (s == "csv")
    return ReportFormat::csv;
  if (s == "json")
    return ReportFormat::json;
  throw Error(ErrorCode::ConfigError, "format must be csv or json");
}

std::string_view to_string(ReportFormat f) {
  return f == ReportFormat::csv ? "csv" : "json";
}

namespace {

std::size_t parse_count(std::string_view key, std::string_view value) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || ptr != value.data() + value.size())
    throw Error(ErrorCode::ConfigError,
                std::string(key) + ": expected a non-negative integer, got '" +
                    std::string(value) + "'");
  return v;
}

fs::path resolve(std::string_view value, const fs::path &base) {
  fs::path p{std::string(value)};
  return p.is_relative() && !base.empty() ? base / p : p;
}

} // namespace

void apply_setting(PipelineConfig &c, std::string_view key, std::string_view value,
                   const fs::path &base) {
  try {
    if (key == "data_dir")
      c.data_dir = resolve(value, base);
    else if (key == "alias_file")
      c.alias_file = resolve(value, base);
    else if (key == "metadata_file")
      c.metadata_file = resolve(value, base);
    else if (key == "output_dir")
      c.output_dir = resolve(value, base);
    else if (key == "mode")
      c.mode = parse_run_mode(value);
    else if (key == "distance_measure") {
      c.distance_measure = parse_measure(value);
      if (is_similarity(c.distance_measure))
        throw Error(ErrorCode::ConfigError,
                    "distance_measure must be a dissimilarity (d_eff_bar or d_js_bar)");
    } else if (key == "linkage")
      c.linkage = parse_linkage(value);
    else if (key == "clusters_k")
      c.clusters_k = parse_count(key, value);
    else if (key == "mds_dims")
      c.mds_dims = parse_count(key, value);
    else if (key == "mds_origin")
      c.mds_origin = value.empty() ? std::nullopt : std::optional<std::string>(value);
    else if (key == "top_k")
      c.top_k = parse_count(key, value);
    else if (key == "format")
      c.format = parse_report_format(value);
    else if (key == "threads")
      c.threads = parse_count(key, value);
    else
      throw Error(ErrorCode::ConfigError, "unknown key '" + std::string(key) + "'");
  } catch (const Error &e) {
    if (e.code() == ErrorCode::ConfigError)
      throw;
    throw Error(ErrorCode::ConfigError, std::string(key) + ": " + e.what());
  }
}

PipelineConfig parse_config(std::string_view text, const fs::path &base_dir) {
  PipelineConfig c;
  std::size_t lineno = 0;
  for (std::string_view line : csv::lines(text)) {
    ++lineno;
    line = csv::trim(line);
    if (line.empty() || line.front() == '#')
      continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorCode::ConfigError,
                  "line " + std::to_string(lineno) + ": expected key = value");
    apply_setting(c, csv::trim(line.substr(0, eq)), csv::trim(line.substr(eq + 1)),
                  base_dir);
  }
  return c;
}

void validate_config(const PipelineConfig &c) {
  auto need = [](const fs::path &p, std::string_view what, bool dir) {
    if (p.empty())
      throw Error(ErrorCode::ConfigError, std::string(what) + " is not set");
    std::error_code ec;
    const bool ok = dir ? fs::is_directory(p, ec) : fs::is_regular_file(p, ec);
    if (!ok)
      throw Error(ErrorCode::ConfigError,
                  std::string(what) + " '" + p.string() + "' does not exist");
  };
  need(c.data_dir, "data_dir", true);
  need(c.metadata_file, "metadata_file", false);
  if (!c.alias_file.empty())
    need(c.alias_file, "alias_file", false);
  if (c.clusters_k < 1)
    throw Error(ErrorCode::ConfigError, "clusters_k must be >= 1");
  if (c.mds_dims < 1)
    throw Error(ErrorCode::ConfigError, "mds_dims must be >= 1");
  if (c.top_k < 1)
    throw Error(ErrorCode::ConfigError, "top_k must be >= 1");
  if (c.threads < 1)
    throw Error(ErrorCode::ConfigError, "threads must be >= 1");
}

} // namespace castsize
