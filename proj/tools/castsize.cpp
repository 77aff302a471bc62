// castsize: effective cast size metrics, movie comparison and clustering.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "castsize/fetch.hpp"
#include "castsize/pipeline.hpp"

namespace fs = std::filesystem;
using namespace castsize;

namespace {

constexpr int kExitOk = 0, kExitData = 1, kExitConfig = 2, kExitNetwork = 3;

struct Overrides {
  std::string config_file;
  std::vector<std::pair<std::string, std::string>> settings;
};

void add_pipeline_options(CLI::App *cmd, Overrides &o) {
  cmd->add_option("-c,--config", o.config_file, "key = value configuration file");
  auto flag = [&](const char *name, const char *key, const char *help) {
    cmd->add_option_function<std::string>(
        name, [&o, key](const std::string &v) { o.settings.emplace_back(key, v); }, help);
  };
  flag("--data-dir", "data_dir", "directory holding conflicts/ and dialogue/");
  flag("--aliases", "alias_file", "alias CSV (canonical,alias)");
  flag("--metadata", "metadata_file", "movie metadata JSON");
  flag("--mode", "mode", "conflict | dialogue | both");
  flag("--measure", "distance_measure", "d_eff_bar | d_js_bar");
  flag("--linkage", "linkage", "average | complete | single");
  flag("--clusters", "clusters_k", "number of flat clusters");
  flag("--mds-dims", "mds_dims", "embedding dimensions");
  flag("--mds-origin", "mds_origin", "movie placed at the embedding origin");
  flag("--top-k", "top_k", "franchise top contributors to list");
  flag("-o,--output", "output_dir", "output directory");
  flag("--format", "format", "csv | json");
  flag("-j,--threads", "threads", "worker threads for per-movie stages");
}

PipelineConfig load_config(const Overrides &o) {
  PipelineConfig config;
  if (!o.config_file.empty()) {
    std::ifstream in(o.config_file);
    if (!in)
      throw Error(ErrorCode::ConfigError, "cannot read config '" + o.config_file + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    config = parse_config(ss.str(), fs::path(o.config_file).parent_path());
  }
  // flags win over the file; relative flag paths stay relative to the cwd
  for (const auto &[key, value] : o.settings)
    apply_setting(config, key, value);
  return config;
}

int run_validate(const PipelineConfig &config) {
  validate_config(config);
  auto ds = build_dataset(read_inputs(config), config.threads);
  std::cout << ds.report.render();
  for (const auto &line : ds.log)
    std::cout << "note: " << line << '\n';
  std::cout << ds.movies.size() << " movies, "
            << (ds.report.ok() ? "no errors" : std::to_string(ds.report.errors.size()) + " errors")
            << '\n';
  return ds.report.ok() ? kExitOk : kExitData;
}

int exit_code(const Error &e) {
  switch (e.code()) {
  case ErrorCode::ConfigError: return kExitConfig;
  case ErrorCode::HttpError:
  case ErrorCode::Timeout: return kExitNetwork;
  default: return kExitData;
  }
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Effective cast size toolkit"};
  app.require_subcommand(1);

  Overrides overrides;
  struct Command {
    const char *name;
    const char *help;
    unsigned stages;
  };
  const Command commands[] = {
      {"validate", "parse and validate all inputs", 0},
      {"metrics", "per-movie and franchise effective cast sizes", kStageMetrics},
      {"compare", "pairwise divergence matrices", kStageCompare},
      {"cluster", "hierarchical clustering and dendrogram", kStageCluster},
      {"mds", "classical MDS embedding", kStageMds},
      {"stats", "profitability and rating regressions", kStageStats},
      {"report", "run every stage", kStageAll},
  };
  std::vector<std::pair<CLI::App *, unsigned>> pipeline_cmds;
  for (const auto &c : commands) {
    auto *sub = app.add_subcommand(c.name, c.help);
    add_pipeline_options(sub, overrides);
    pipeline_cmds.emplace_back(sub, c.stages);
  }

  auto *fetch = app.add_subcommand("fetch-meta", "fetch one title from an OMDb-style service");
  std::string title, out_file;
  FetchConfig fetch_config;
  double timeout_s = 10.0;
  fetch->add_option("title", title, "movie title")->required();
  fetch->add_option("--base-url", fetch_config.base_url, "service base URL");
  fetch->add_option("--timeout", timeout_s, "seconds before giving up");
  fetch->add_option("-o,--out", out_file, "write the record here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (fetch->parsed()) {
      const char *key = std::getenv(kApiKeyEnv);
      if (!key || !*key) {
        std::cerr << "set " << kApiKeyEnv << " to the service API key\n";
        return kExitConfig;
      }
      fetch_config.api_key = key;
      fetch_config.timeout = std::chrono::milliseconds(static_cast<long long>(timeout_s * 1000));
      const std::string record = to_metadata_json(fetch_metadata(title, fetch_config));
      if (out_file.empty()) {
        std::cout << record;
      } else {
        std::ofstream out(out_file);
        out << record;
        if (!out)
          throw Error(ErrorCode::IoError, "cannot write '" + out_file + "'");
      }
      return kExitOk;
    }

    for (const auto &[sub, stages] : pipeline_cmds) {
      if (!sub->parsed())
        continue;
      const PipelineConfig config = load_config(overrides);
      if (sub->get_name() == "validate")
        return run_validate(config);
      return run_pipeline(config, stages, std::cerr);
    }
  } catch (const Error &e) {
    std::cerr << e.what() << '\n';
    return exit_code(e);
  }
  return kExitOk;
}
