#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include <json.hpp>

#include "castsize/csv.hpp"
#include "castsize/pipeline.hpp"

namespace castsize {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

std::string format_number(double v) {
  if (std::isnan(v))
    return "nan";
  if (v == 0.0)
    v = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

namespace {

std::string cell(const std::optional<double> &v) { return v ? format_number(*v) : ""; }
std::string cell(const std::optional<std::size_t> &v) { return v ? std::to_string(*v) : ""; }

// Same rounding as the CSV cells, as a JSON value.
ojson number(double v) {
  if (!std::isfinite(v))
    return nullptr;
  return std::strtod(format_number(v).c_str(), nullptr);
}
ojson number(const std::optional<double> &v) { return v ? number(*v) : ojson(nullptr); }
ojson number(const std::optional<std::size_t> &v) { return v ? ojson(*v) : ojson(nullptr); }

class CsvWriter {
public:
  explicit CsvWriter(std::vector<std::string> header) { row(std::move(header)); }
  void row(const std::vector<std::string> &fields) {
    text_ += csv::join(fields);
    text_.push_back('\n');
  }
  const std::string &text() const { return text_; }

private:
  std::string text_;
};

class Sink {
public:
  explicit Sink(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec)
      throw Error(ErrorCode::IoError, "cannot create '" + dir_.string() + "': " + ec.message());
  }

  void write(const std::string &name, const std::string &content) {
    const fs::path p = dir_ / name;
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out)
      throw Error(ErrorCode::IoError, "cannot write '" + p.string() + "'");
    written_.push_back(p);
  }

  std::vector<fs::path> files() && { return std::move(written_); }

private:
  fs::path dir_;
  std::vector<fs::path> written_;
};

std::string matrix_csv(const DistanceMatrix &m) {
  std::vector<std::string> header{"movie"};
  header.insert(header.end(), m.labels().begin(), m.labels().end());
  CsvWriter w(header);
  for (std::size_t i = 0; i < m.size(); ++i) {
    std::vector<std::string> r{m.labels()[i]};
    for (std::size_t j = 0; j < m.size(); ++j)
      r.push_back(format_number(m(i, j)));
    w.row(r);
  }
  return w.text();
}

ojson matrix_json(const DistanceMatrix &m) {
  ojson rows = ojson::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    ojson r = ojson::array();
    for (std::size_t j = 0; j < m.size(); ++j)
      r.push_back(number(m(i, j)));
    rows.push_back(std::move(r));
  }
  return {{"labels", m.labels()}, {"values", std::move(rows)}};
}

void franchise_rows(CsvWriter &w, std::string_view mode, const FranchiseSummary &f) {
  w.row({std::string(mode), "gamma_effective", "", "", format_number(f.gamma_effective)});
  w.row({std::string(mode), "sum_effective", "", "", format_number(f.sum_effective)});
  for (std::size_t i = 0; i < f.top_contributors.size(); ++i)
    w.row({std::string(mode), "top_contributor", std::to_string(i + 1),
           f.top_contributors[i].character.display(),
           format_number(f.top_contributors[i].proportion)});
}

ojson franchise_json(const FranchiseSummary &f) {
  ojson per = ojson::array();
  for (const auto &[movie, n] : f.per_movie_effective)
    per.push_back({{"movie", movie}, {"n_eff", number(n)}});
  ojson top = ojson::array();
  for (const auto &s : f.top_contributors)
    top.push_back({{"character", s.character.display()}, {"proportion", number(s.proportion)}});
  return {{"gamma_effective", number(f.gamma_effective)},
          {"sum_effective", number(f.sum_effective)},
          {"per_movie_effective", std::move(per)},
          {"top_contributors", std::move(top)}};
}

std::string complete_flag(ScriptStatus s) { return s == ScriptStatus::complete ? "1" : "0"; }

} // namespace

std::vector<fs::path> emit_report(const PipelineResults &r, const fs::path &dir,
                                  ReportFormat format, unsigned stages) {
  Sink sink(dir);
  std::vector<std::string> log = r.log;
  const bool csv = format == ReportFormat::csv;
  ojson doc;

  if (stages & kStageMetrics) {
    CsvWriter metrics({"movie", "title", "type", "release_date", "script_status",
                       "dialogue_complete", "conflicts", "lines", "richness_conflict",
                       "n_eff_conflict", "richness_dialogue", "n_eff_dialogue"});
    CsvWriter by_release({"release_date", "movie", "type", "n_eff_conflict", "n_eff_dialogue"});
    CsvWriter scatter({"movie", "type", "n_eff_conflict", "n_eff_dialogue", "dialogue_complete"});
    ojson rows = ojson::array();
    for (const auto &m : r.metrics) {
      const std::string date = format_iso_date(m.release_date);
      const std::string type(to_string(m.movie_type));
      metrics.row({m.movie_id, m.title, type, date, std::string(to_string(m.script_status)),
                   complete_flag(m.script_status), std::to_string(m.conflicts),
                   std::to_string(m.lines), cell(m.richness_conflict),
                   cell(m.effective_conflict), cell(m.richness_dialogue),
                   cell(m.effective_dialogue)});
      by_release.row({date, m.movie_id, type, cell(m.effective_conflict),
                      cell(m.effective_dialogue)});
      if (m.effective_conflict && m.effective_dialogue)
        scatter.row({m.movie_id, type, cell(m.effective_conflict), cell(m.effective_dialogue),
                     complete_flag(m.script_status)});
      rows.push_back({{"movie", m.movie_id},
                      {"title", m.title},
                      {"type", type},
                      {"release_date", date},
                      {"script_status", to_string(m.script_status)},
                      {"dialogue_complete", m.script_status == ScriptStatus::complete},
                      {"conflicts", m.conflicts},
                      {"lines", m.lines},
                      {"richness_conflict", number(m.richness_conflict)},
                      {"n_eff_conflict", number(m.effective_conflict)},
                      {"richness_dialogue", number(m.richness_dialogue)},
                      {"n_eff_dialogue", number(m.effective_dialogue)}});
    }
    CsvWriter franchise({"mode", "statistic", "rank", "character", "value"});
    ojson fr = ojson::object();
    if (r.franchise_conflict) {
      franchise_rows(franchise, "conflict", *r.franchise_conflict);
      fr["conflict"] = franchise_json(*r.franchise_conflict);
    }
    if (r.franchise_dialogue) {
      franchise_rows(franchise, "dialogue", *r.franchise_dialogue);
      fr["dialogue"] = franchise_json(*r.franchise_dialogue);
    }
    if (csv) {
      sink.write("metrics.csv", metrics.text());
      sink.write("franchise.csv", franchise.text());
      sink.write("plot_cast_by_release.csv", by_release.text());
      sink.write("plot_dialogue_vs_conflict.csv", scatter.text());
    } else {
      doc["metrics"] = std::move(rows);
      doc["franchise"] = std::move(fr);
    }
  }

  const bool has_matrix = r.distance.has_value();
  if ((stages & (kStageCompare | kStageCluster | kStageMds)) && !has_matrix)
    log.push_back("matrix, clustering and MDS outputs omitted (comparison stage empty)");

  if ((stages & kStageCompare) && has_matrix) {
    CsvWriter pairs({"movie_a", "movie_b", "d_js", "d_js_bar", "s_js_bar", "d_eff",
                     "d_eff_bar", "s_eff_bar"});
    ojson pj = ojson::array();
    for (const auto &p : r.pairs) {
      const auto &js = p.result.js;
      const auto &ef = p.result.effective;
      pairs.row({p.movie_a, p.movie_b, format_number(js.d_js), format_number(js.d_js_bar),
                 format_number(js.s_js_bar), format_number(ef.d_eff),
                 format_number(ef.d_eff_bar), format_number(ef.s_eff_bar)});
      pj.push_back({{"movie_a", p.movie_a},
                    {"movie_b", p.movie_b},
                    {"d_js", number(js.d_js)},
                    {"d_js_bar", number(js.d_js_bar)},
                    {"s_js_bar", number(js.s_js_bar)},
                    {"d_eff", number(ef.d_eff)},
                    {"d_eff_bar", number(ef.d_eff_bar)},
                    {"s_eff_bar", number(ef.s_eff_bar)}});
    }
    if (csv) {
      sink.write("distance_matrix.csv", matrix_csv(*r.distance));
      sink.write("similarity_matrix.csv", matrix_csv(*r.similarity));
      sink.write("plot_distance_comparison.csv", pairs.text());
    } else {
      doc["comparison"] = {{"source", to_string(r.comparison_mode)},
                           {"measure", to_string(r.measure)},
                           {"distance", matrix_json(*r.distance)},
                           {"similarity", matrix_json(*r.similarity)},
                           {"pairs", std::move(pj)}};
    }
  }

  if ((stages & kStageCluster) && r.dendrogram) {
    CsvWriter clusters({"movie", "cluster"});
    ojson cj = ojson::object();
    for (const auto &label : r.dendrogram->labels) {
      clusters.row({label, std::to_string(r.clusters.at(label))});
      cj[label] = r.clusters.at(label);
    }
    if (csv) {
      sink.write("dendrogram.json", dendrogram_to_json(*r.dendrogram));
      sink.write("dendrogram.nwk", dendrogram_to_newick(*r.dendrogram));
      sink.write("clusters.csv", clusters.text());
    } else {
      doc["clustering"] = {{"k", r.clusters_k},
                           {"dendrogram", ojson::parse(dendrogram_to_json(*r.dendrogram))},
                           {"newick", dendrogram_to_newick(*r.dendrogram)},
                           {"clusters", std::move(cj)}};
    }
  }

  if ((stages & kStageMds) && r.embedding) {
    const auto &e = *r.embedding;
    CsvWriter summary({"statistic", "value"});
    summary.row({"stress", format_number(e.stress)});
    summary.row({"negative_eigenvalues", std::to_string(e.negative_eigenvalues)});
    summary.row({"negative_mass_fraction", format_number(e.negative_mass_fraction)});
    ojson eig = ojson::array();
    for (std::size_t k = 0; k < e.eigenvalues.size(); ++k) {
      summary.row({"eigenvalue_" + std::to_string(k + 1), format_number(e.eigenvalues[k])});
      eig.push_back(number(e.eigenvalues[k]));
    }
    if (csv) {
      sink.write("mds.csv", embedding_to_csv(e));
      sink.write("mds_summary.csv", summary.text());
    } else {
      ojson coords = ojson::object();
      for (std::size_t i = 0; i < e.labels.size(); ++i) {
        ojson c = ojson::array();
        for (std::size_t k = 0; k < e.dims; ++k)
          c.push_back(number(e.coord(i, k)));
        coords[e.labels[i]] = std::move(c);
      }
      doc["mds"] = {{"dims", e.dims},
                    {"coordinates", std::move(coords)},
                    {"eigenvalues", std::move(eig)},
                    {"stress", number(e.stress)},
                    {"negative_eigenvalues", e.negative_eigenvalues},
                    {"negative_mass_fraction", number(e.negative_mass_fraction)}};
    }
  }

  if (stages & kStageStats) {
    CsvWriter reg({"name", "x", "y", "n", "slope", "standard_error", "t_statistic",
                   "p_value", "pearson_r"});
    ojson rj = ojson::array();
    for (const auto &nr : r.regressions) {
      const auto &x = nr.result;
      reg.row({nr.name, nr.x_label, nr.y_label, std::to_string(x.n), format_number(x.slope),
               format_number(x.standard_error), format_number(x.t_statistic),
               format_number(x.p_value), format_number(x.pearson_r)});
      rj.push_back({{"name", nr.name},
                    {"x", nr.x_label},
                    {"y", nr.y_label},
                    {"n", x.n},
                    {"slope", number(x.slope)},
                    {"standard_error", number(x.standard_error)},
                    {"t_statistic", number(x.t_statistic)},
                    {"p_value", number(x.p_value)},
                    {"pearson_r", number(x.pearson_r)}});
    }
    CsvWriter profit({"movie", "type", "n_eff", "profitability"});
    CsvWriter rating({"movie", "type", "n_eff", "imdb_rating"});
    for (const auto &m : r.metrics) {
      const auto &n_eff = m.effective_conflict ? m.effective_conflict : m.effective_dialogue;
      if (!n_eff)
        continue;
      const std::string type(to_string(m.movie_type));
      if (m.profitability)
        profit.row({m.movie_id, type, cell(n_eff), cell(m.profitability)});
      if (m.imdb_rating)
        rating.row({m.movie_id, type, cell(n_eff), cell(m.imdb_rating)});
    }
    if (csv) {
      sink.write("regression.csv", reg.text());
      sink.write("plot_profit_vs_cast.csv", profit.text());
      sink.write("plot_rating_vs_cast.csv", rating.text());
    } else {
      doc["regression"] = std::move(rj);
    }
  }

  std::string log_text;
  for (const auto &line : log)
    log_text += line + "\n";
  if (csv) {
    sink.write("run_log.txt", log_text);
  } else {
    doc["log"] = log;
    sink.write("report.json", doc.dump(2) + "\n");
  }
  return std::move(sink).files();
}

} // namespace castsize
