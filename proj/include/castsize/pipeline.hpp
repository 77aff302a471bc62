#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "castsize/analysis.hpp"
#include "castsize/config.hpp"
#include "castsize/divergence.hpp"
#include "castsize/ingest.hpp"
#include "castsize/metrics.hpp"
#include "castsize/stats.hpp"

namespace castsize {

// Parsed but not yet grouped or alias-resolved.
struct RawInputs {
  std::vector<MovieRecord> movies;
  AliasTable aliases;
  std::vector<ConflictEvent> conflicts;
  std::vector<DialogueEvent> dialogue;
  ValidationReport report;
  std::vector<std::string> log;
};

struct MovieData {
  MovieRecord record;
  std::vector<ConflictEvent> conflicts;
  std::vector<DialogueEvent> dialogue;
};

struct Dataset {
  std::vector<MovieData> movies; // release date, then title
  ValidationReport report;
  std::vector<std::string> log;
};

/// Reads the metadata, alias table and the transcription files under
/// `data_dir`:
///   conflicts/*.csv           conflict logs (any number of movies each)
///   dialogue/*.csv            normalized dialogue CSV
///   dialogue/<id>.colon.txt   "NAME: line" transcripts
///   dialogue/<id>.screenplay.txt
/// Throws on unreadable files and on fatal parse errors (bad header,
/// conflicting aliases, metadata schema); row-level problems go to the report.
RawInputs read_inputs(const PipelineConfig &config);

// Groups events by movie, resolves aliases and validates, in parallel over
// movies; the result does not depend on `threads`.
Dataset build_dataset(RawInputs inputs, std::size_t threads = 1);

struct MovieMetrics {
  std::string movie_id;
  std::string title;
  MovieType movie_type = MovieType::origin;
  std::chrono::year_month_day release_date{};
  ScriptStatus script_status = ScriptStatus::complete;
  std::size_t conflicts = 0;
  std::size_t lines = 0;
  std::optional<std::size_t> richness_conflict;
  std::optional<double> effective_conflict;
  std::optional<std::size_t> richness_dialogue;
  std::optional<double> effective_dialogue;
  std::optional<double> profitability;
  std::optional<double> imdb_rating;
};

struct PairComparison {
  std::string movie_a;
  std::string movie_b;
  ComparisonResult result;
};

struct NamedRegression {
  std::string name;
  std::string x_label;
  std::string y_label;
  RegressionResult result;
};

struct PipelineResults {
  std::vector<MovieMetrics> metrics;
  std::optional<FranchiseSummary> franchise_conflict;
  std::optional<FranchiseSummary> franchise_dialogue;
  SourceMode comparison_mode = SourceMode::conflict;
  Measure measure = Measure::d_eff_bar;
  std::optional<DistanceMatrix> distance;
  std::optional<DistanceMatrix> similarity;
  std::vector<PairComparison> pairs;
  std::optional<Dendrogram> dendrogram;
  std::map<std::string, int> clusters;
  std::size_t clusters_k = 0;
  std::optional<Embedding> embedding;
  std::vector<NamedRegression> regressions;
  std::vector<std::string> log;
};

enum Stage : unsigned {
  kStageMetrics = 1u << 0,
  kStageCompare = 1u << 1,
  kStageCluster = 1u << 2,
  kStageMds = 1u << 3,
  kStageStats = 1u << 4,
  kStageAll = 0x1fu,
};

PipelineResults compute(const Dataset &data, const PipelineConfig &config,
                        unsigned stages = kStageAll);

/// Writes the requested stages to `dir` and returns the files written.
/// Output is byte-identical for identical inputs: rows follow release date
/// then title and every real number is printed with 6 significant digits.
std::vector<std::filesystem::path> emit_report(const PipelineResults &results,
                                               const std::filesystem::path &dir,
                                               ReportFormat format,
                                               unsigned stages = kStageAll);

// "%.6g", with negative zero printed as 0.
std::string format_number(double v);

/// Load, validate, compute and emit. Returns the process exit status:
/// 0 ok, 1 data error, 2 config error. Diagnostics go to `err`.
int run_pipeline(const PipelineConfig &config, unsigned stages, std::ostream &err);

} // namespace castsize
