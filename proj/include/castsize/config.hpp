#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "castsize/analysis.hpp"
#include "castsize/divergence.hpp"

namespace castsize {

enum class RunMode { conflict, dialogue, both };
enum class ReportFormat { csv, json };

RunMode parse_run_mode(std::string_view s);
std::string_view to_string(RunMode m);
ReportFormat parse_report_format(std::string_view s);
std::string_view to_string(ReportFormat f);

struct PipelineConfig {
  std::filesystem::path data_dir;
  std::filesystem::path alias_file;    // optional; empty means no aliases
  std::filesystem::path metadata_file;
  RunMode mode = RunMode::both;
  Measure distance_measure = Measure::d_eff_bar;
  Linkage linkage = Linkage::average;
  std::size_t clusters_k = 10;
  std::size_t mds_dims = 2;
  std::optional<std::string> mds_origin;
  std::size_t top_k = 5;
  std::filesystem::path output_dir = "out";
  ReportFormat format = ReportFormat::csv;
  std::size_t threads = 1;
};

/// Key-value text, one `key = value` per line, `#` comments. Keys are the
/// PipelineConfig field names. Relative paths resolve against `base_dir`.
/// Throws ConfigError on unknown keys or bad values.
PipelineConfig parse_config(std::string_view text,
                            const std::filesystem::path &base_dir = {});

// Applies one setting (shared by the file parser and the CLI flags).
void apply_setting(PipelineConfig &config, std::string_view key,
                   std::string_view value, const std::filesystem::path &base_dir = {});

// Checks ranges and that the referenced paths exist; throws ConfigError.
void validate_config(const PipelineConfig &config);

} // namespace castsize
