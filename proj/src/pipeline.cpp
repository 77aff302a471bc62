#include "castsize/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <exception>
#include <thread>

namespace castsize {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::IoError, "cannot read '" + p.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<fs::path> sorted_files(const fs::path &dir) {
  std::vector<fs::path> out;
  std::error_code ec;
  if (!fs::is_directory(dir, ec))
    return out;
  for (const auto &entry : fs::directory_iterator(dir))
    if (entry.is_regular_file())
      out.push_back(entry.path());
  std::sort(out.begin(), out.end());
  return out;
}

bool ends_with(const std::string &s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         std::string_view(s).substr(s.size() - suffix.size()) == suffix;
}

// Strided split over worker threads; the first exception is rethrown after
// all workers join.
template <typename Fn> void parallel_for(std::size_t n, std::size_t threads, Fn fn) {
  threads = std::max<std::size_t>(1, std::min(threads, n));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i)
      fn(i);
    return;
  }
  std::vector<std::exception_ptr> failures(threads);
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        try {
          for (std::size_t i = t; i < n; i += threads)
            fn(i);
        } catch (...) {
          failures[t] = std::current_exception();
        }
      });
  }
  for (auto &f : failures)
    if (f)
      std::rethrow_exception(f);
}

} // namespace

RawInputs read_inputs(const PipelineConfig &config) {
  RawInputs in;
  in.movies = parse_metadata(read_file(config.metadata_file));
  if (!config.alias_file.empty()) {
    auto aliases = parse_alias_table(read_file(config.alias_file),
                                     config.alias_file.filename().string());
    in.aliases = std::move(aliases.value);
    in.report.merge(aliases.report);
  }

  for (const auto &path : sorted_files(config.data_dir / "conflicts")) {
    if (path.extension() != ".csv") {
      in.log.push_back("ignored " + path.filename().string() + " (not a .csv conflict log)");
      continue;
    }
    const std::string name = "conflicts/" + path.filename().string();
    auto parsed = parse_conflict_log(read_file(path), name);
    in.report.merge(parsed.report);
    std::move(parsed.value.begin(), parsed.value.end(), std::back_inserter(in.conflicts));
  }

  for (const auto &path : sorted_files(config.data_dir / "dialogue")) {
    const std::string file = path.filename().string();
    const std::string name = "dialogue/" + file;
    Parsed<std::vector<DialogueEvent>> parsed;
    if (ends_with(file, ".colon.txt"))
      parsed = parse_dialogue(read_file(path), DialogueFormat::colon,
                              file.substr(0, file.size() - 10), name);
    else if (ends_with(file, ".screenplay.txt"))
      parsed = parse_dialogue(read_file(path), DialogueFormat::screenplay,
                              file.substr(0, file.size() - 15), name);
    else if (ends_with(file, ".csv"))
      parsed = parse_dialogue(read_file(path), DialogueFormat::normalized_csv, "", name);
    else {
      in.log.push_back("ignored " + name + " (unknown dialogue format)");
      continue;
    }
    in.report.merge(parsed.report);
    std::move(parsed.value.begin(), parsed.value.end(), std::back_inserter(in.dialogue));
  }
  return in;
}

Dataset build_dataset(RawInputs in, std::size_t threads) {
  Dataset ds;
  ds.report = std::move(in.report);
  ds.log = std::move(in.log);

  std::sort(in.movies.begin(), in.movies.end(), [](const MovieRecord &a, const MovieRecord &b) {
    if (a.release_date != b.release_date)
      return a.release_date < b.release_date;
    if (a.title != b.title)
      return a.title < b.title;
    return a.movie_id < b.movie_id;
  });
  std::map<std::string, std::size_t> index;
  for (auto &r : in.movies) {
    if (!index.emplace(r.movie_id, ds.movies.size()).second) {
      ds.report.errors.push_back({"metadata", 0, DiagCode::BadRow,
                                  "duplicate movie id '" + r.movie_id + "'"});
      continue;
    }
    ds.movies.push_back(MovieData{std::move(r), {}, {}});
  }

  std::map<std::string, std::size_t> orphans;
  for (auto &e : in.conflicts) {
    if (auto it = index.find(e.movie_id); it != index.end())
      ds.movies[it->second].conflicts.push_back(std::move(e));
    else
      ++orphans[e.movie_id];
  }
  for (auto &e : in.dialogue) {
    if (auto it = index.find(e.movie_id); it != index.end())
      ds.movies[it->second].dialogue.push_back(std::move(e));
    else
      ++orphans[e.movie_id];
  }
  for (const auto &[movie, n] : orphans)
    ds.report.warnings.push_back({"metadata", 0, DiagCode::MissingData,
                                  std::to_string(n) + " events for '" + movie +
                                      "' which has no metadata record; ignored"});

  std::vector<ValidationReport> reports(ds.movies.size());
  parallel_for(ds.movies.size(), threads, [&](std::size_t i) {
    auto &m = ds.movies[i];
    auto c = resolve_and_validate(std::move(m.conflicts), in.aliases,
                                  m.record.movie_id + " (conflicts)");
    auto d = resolve_and_validate(std::move(m.dialogue), in.aliases,
                                  m.record.movie_id + " (dialogue)");
    m.conflicts = std::move(c.value);
    m.dialogue = std::move(d.value);
    reports[i] = std::move(c.report);
    reports[i].merge(d.report);
  });
  for (const auto &r : reports) {
    ds.report.errors.insert(ds.report.errors.end(), r.errors.begin(), r.errors.end());
    ds.report.warnings.insert(ds.report.warnings.end(), r.warnings.begin(), r.warnings.end());
    ds.report.stats.resolved_names += r.stats.resolved_names;
    ds.report.stats.unknown_names += r.stats.unknown_names;
  }
  return ds;
}

// ---------------------------------------------------------------- compute

namespace {

std::optional<RegressionResult> try_regression(const std::vector<double> &x,
                                               const std::vector<double> &y,
                                               const std::string &name,
                                               std::vector<std::string> &log) {
  try {
    return regress_through_origin(x, y);
  } catch (const Error &e) {
    log.push_back("regression " + name + " skipped: " + e.what());
    return std::nullopt;
  }
}

} // namespace

PipelineResults compute(const Dataset &data, const PipelineConfig &config, unsigned stages) {
  PipelineResults out;
  out.log = data.log;
  out.measure = config.distance_measure;
  const bool want_conflict = config.mode != RunMode::dialogue;
  const bool want_dialogue = config.mode != RunMode::conflict;
  const std::size_t n = data.movies.size();

  std::vector<std::optional<ParticipationDistribution>> conflict_dist(n), dialogue_dist(n);
  out.metrics.resize(n);
  parallel_for(n, config.threads, [&](std::size_t i) {
    const auto &m = data.movies[i];
    auto &row = out.metrics[i];
    row.movie_id = m.record.movie_id;
    row.title = m.record.title;
    row.movie_type = m.record.movie_type;
    row.release_date = m.record.release_date;
    row.script_status = m.record.script_status;
    row.conflicts = m.conflicts.size();
    row.lines = m.dialogue.size();
    row.imdb_rating = m.record.imdb_rating;
    if (m.record.box_office_musd && m.record.budget_musd > 0)
      row.profitability = profitability(m.record);
    if (want_conflict && !m.conflicts.empty()) {
      conflict_dist[i] = participation(std::span<const ConflictEvent>(m.conflicts));
      row.richness_conflict = richness(*conflict_dist[i]);
      row.effective_conflict = effective_size(*conflict_dist[i]);
    }
    if (want_dialogue && !m.dialogue.empty()) {
      dialogue_dist[i] = participation(std::span<const DialogueEvent>(m.dialogue));
      row.richness_dialogue = richness(*dialogue_dist[i]);
      row.effective_dialogue = effective_size(*dialogue_dist[i]);
    }
  });

  std::vector<ParticipationDistribution> conflicts, dialogues;
  for (std::size_t i = 0; i < n; ++i) {
    const auto &id = data.movies[i].record.movie_id;
    if (conflict_dist[i])
      conflicts.push_back(*conflict_dist[i]);
    else if (want_conflict)
      out.log.push_back(id + ": excluded from conflict outputs (no conflict events)");
    if (dialogue_dist[i])
      dialogues.push_back(*dialogue_dist[i]);
    else if (want_dialogue)
      out.log.push_back(id + ": excluded from dialogue outputs (no dialogue transcript)");
  }

  if (stages & kStageMetrics) {
    if (!conflicts.empty())
      out.franchise_conflict = franchise_summary(conflicts, config.top_k);
    if (!dialogues.empty())
      out.franchise_dialogue = franchise_summary(dialogues, config.top_k);
  }

  out.comparison_mode = want_conflict ? SourceMode::conflict : SourceMode::dialogue;
  const auto &compared = want_conflict ? conflicts : dialogues;
  const bool comparing = stages & (kStageCompare | kStageCluster | kStageMds);
  if (comparing && compared.size() < 2) {
    out.log.push_back("comparison stage skipped: fewer than two " +
                      std::string(to_string(out.comparison_mode)) + " movies");
  } else if (comparing) {
    out.distance = pairwise_matrix(compared, config.distance_measure);
    const Measure sim = config.distance_measure == Measure::d_js_bar ? Measure::s_js_bar
                                                                     : Measure::s_eff_bar;
    out.similarity = pairwise_matrix(compared, sim);
    for (std::size_t i = 0; i < compared.size(); ++i)
      for (std::size_t j = i + 1; j < compared.size(); ++j)
        out.pairs.push_back({compared[i].movie_id(), compared[j].movie_id(),
                             compare(compared[i], compared[j])});

    const std::size_t m = compared.size();
    if (stages & kStageCluster) {
      out.dendrogram = agglomerative_cluster(*out.distance, config.linkage);
      out.clusters_k = std::min(config.clusters_k, m);
      if (out.clusters_k != config.clusters_k)
        out.log.push_back("clusters_k reduced to " + std::to_string(m) +
                          " (number of compared movies)");
      out.clusters = cut_dendrogram(*out.dendrogram, out.clusters_k);
    }
    if (stages & kStageMds) {
      const std::size_t dims = std::min(config.mds_dims, m - 1);
      if (dims != config.mds_dims)
        out.log.push_back("mds_dims reduced to " + std::to_string(dims));
      std::optional<std::string> origin = config.mds_origin;
      if (origin && std::find(out.distance->labels().begin(), out.distance->labels().end(),
                              *origin) == out.distance->labels().end()) {
        out.log.push_back("mds_origin '" + *origin + "' is not among the compared movies; no translation");
        origin.reset();
      }
      out.embedding = classical_mds(*out.distance, dims, origin);
      if (out.embedding->negative_eigenvalues)
        out.log.push_back("mds: " + std::to_string(out.embedding->negative_eigenvalues) +
                          " negative eigenvalues dropped (fraction of spectrum " +
                          format_number(out.embedding->negative_mass_fraction) + ")");
    }
  }

  if (stages & kStageStats) {
    const bool use_conflict = want_conflict;
    const std::string cast = use_conflict ? "n_eff_conflict" : "n_eff_dialogue";
    std::vector<double> cx, profit, rx, rating, dx, dy;
    for (const auto &row : out.metrics) {
      const auto &n_eff = use_conflict ? row.effective_conflict : row.effective_dialogue;
      if (n_eff && row.profitability) {
        cx.push_back(*n_eff);
        profit.push_back(*row.profitability);
      }
      if (n_eff && row.imdb_rating) {
        rx.push_back(*n_eff);
        rating.push_back(*row.imdb_rating);
      }
      if (row.effective_conflict && row.effective_dialogue) {
        dx.push_back(*row.effective_conflict);
        dy.push_back(*row.effective_dialogue);
      }
    }
    if (auto r = try_regression(cx, profit, "profitability", out.log))
      out.regressions.push_back({"profitability", cast, "profitability", *r});
    if (auto r = try_regression(rx, rating, "rating", out.log))
      out.regressions.push_back({"rating", cast, "imdb_rating", *r});
    if (config.mode == RunMode::both)
      if (auto r = try_regression(dx, dy, "dialogue_vs_conflict", out.log))
        out.regressions.push_back({"dialogue_vs_conflict", "n_eff_conflict", "n_eff_dialogue", *r});
  }
  return out;
}

// ---------------------------------------------------------------- run

int run_pipeline(const PipelineConfig &config, unsigned stages, std::ostream &err) {
  try {
    validate_config(config);
  } catch (const Error &e) {
    err << e.what() << '\n';
    return 2;
  }
  try {
    auto dataset = build_dataset(read_inputs(config), config.threads);
    if (!dataset.report.ok()) {
      err << dataset.report.render();
      return 1;
    }
    const auto results = compute(dataset, config, stages);
    const auto files = emit_report(results, config.output_dir, config.format, stages);
    for (const auto &line : results.log)
      err << "note: " << line << '\n';
    err << "wrote " << files.size() << " files to " << config.output_dir.string() << '\n';
    return 0;
  } catch (const Error &e) {
    err << e.what() << '\n';
    return e.code() == ErrorCode::ConfigError ? 2 : 1;
  }
}

} // namespace castsize
