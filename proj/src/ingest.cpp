#include "castsize/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "castsize/csv.hpp"

namespace castsize {

using csv::trim;

std::string_view to_string(DiagCode code) {
  switch (code) {
  case DiagCode::BadRow: return "BadRow";
  case DiagCode::BadTimestamp: return "BadTimestamp";
  case DiagCode::BadOutcome: return "BadOutcome";
  case DiagCode::BadName: return "BadName";
  case DiagCode::BadLineIndex: return "BadLineIndex";
  case DiagCode::SelfConflict: return "SelfConflict";
  case DiagCode::NonMonotoneTime: return "NonMonotoneTime";
  case DiagCode::NonMonotoneIndex: return "NonMonotoneIndex";
  case DiagCode::EmptyUtterance: return "EmptyUtterance";
  case DiagCode::DuplicateRow: return "DuplicateRow";
  case DiagCode::LowFrequencyName: return "LowFrequencyName";
  case DiagCode::UnknownName: return "UnknownName";
  case DiagCode::MissingData: return "MissingData";
  }
  return "?";
}

bool ValidationReport::has_warning(DiagCode code) const {
  return std::any_of(warnings.begin(), warnings.end(),
                     [&](const Diagnostic &d) { return d.code == code; });
}

bool ValidationReport::has_error(DiagCode code) const {
  return std::any_of(errors.begin(), errors.end(),
                     [&](const Diagnostic &d) { return d.code == code; });
}

void ValidationReport::merge(const ValidationReport &other) {
  errors.insert(errors.end(), other.errors.begin(), other.errors.end());
  warnings.insert(warnings.end(), other.warnings.begin(), other.warnings.end());
  stats.parsed += other.stats.parsed;
  stats.dropped += other.stats.dropped;
  stats.resolved_names += other.stats.resolved_names;
  stats.unknown_names += other.stats.unknown_names;
}

std::string ValidationReport::render() const {
  std::ostringstream os;
  auto emit = [&](const Diagnostic &d, std::string_view level) {
    os << d.file;
    if (d.line)
      os << ':' << d.line;
    os << ": " << level << ' ' << to_string(d.code) << ": " << d.message << '\n';
  };
  for (const auto &d : errors)
    emit(d, "error");
  for (const auto &d : warnings)
    emit(d, "warning");
  os << "parsed " << stats.parsed << ", dropped " << stats.dropped
     << ", resolved names " << stats.resolved_names << ", unknown names "
     << stats.unknown_names << '\n';
  return os.str();
}

// ---------------------------------------------------------------- aliases

void AliasTable::insert_checked(const CharacterId &alias,
                                const CharacterId &canonical) {
  auto [it, inserted] = map_.emplace(alias, canonical);
  if (!inserted && it->second != canonical)
    throw Error(ErrorCode::ConflictingAlias,
                "'" + alias.display() + "' maps to both '" +
                    it->second.display() + "' and '" + canonical.display() + "'");
}

bool AliasTable::add(const CharacterId &canonical, const CharacterId &alias) {
  const bool existed = map_.contains(alias) && map_.at(alias) == canonical;
  insert_checked(canonical, canonical);
  insert_checked(alias, canonical);
  return !existed;
}

std::optional<CharacterId> AliasTable::lookup(const CharacterId &name) const {
  auto it = map_.find(name);
  if (it == map_.end())
    return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------------- helpers

namespace {

Diagnostic diag(std::string_view file, std::size_t line, DiagCode code,
                std::string message) {
  return Diagnostic{std::string(file), line, code, std::move(message)};
}

std::string_view strip_bom(std::string_view s) {
  if (s.substr(0, 3) == "\xEF\xBB\xBF")
    s.remove_prefix(3);
  return s;
}

// Finds the header among the leading blank/comment lines; returns the index
// of the first data line or throws MissingHeader.
std::size_t expect_header(const std::vector<std::string_view> &lines,
                          std::string_view header, std::string_view source,
                          bool allow_empty) {
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view l = trim(i == 0 ? strip_bom(lines[i]) : lines[i]);
    if (l.empty() || l.front() == '#')
      continue;
    if (l != header)
      throw Error(ErrorCode::MissingHeader, std::string(source) +
                                                ": expected header '" +
                                                std::string(header) + "'");
    return i + 1;
  }
  if (allow_empty)
    return lines.size();
  throw Error(ErrorCode::MissingHeader,
              std::string(source) + ": input has no header line");
}

std::optional<CharacterId> make_name(std::string_view raw) {
  if (clean_name(raw).empty())
    return std::nullopt;
  return CharacterId(raw);
}

bool parse_uint(std::string_view s, std::int64_t &out) {
  if (s.empty())
    return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size() && out >= 0;
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c));
  });
}

bool is_scene_heading(std::string_view line) {
  std::string head;
  for (char ch : line.substr(0, 8))
    head.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
  for (std::string_view prefix : {"INT.", "EXT.", "INT/EXT", "EXT/INT", "I/E", "INT ", "EXT "})
    if (std::string_view(head).substr(0, prefix.size()) == prefix)
      return true;
  return false;
}

// "TONY (V.O.)" -> "TONY"
std::string_view strip_extension(std::string_view name) {
  name = trim(name);
  while (!name.empty() && name.back() == ')') {
    auto open = name.rfind('(');
    if (open == std::string_view::npos || open == 0)
      break;
    name = trim(name.substr(0, open));
  }
  return name;
}

bool is_parenthetical(std::string_view line) {
  return line.size() >= 2 && line.front() == '(' && line.back() == ')';
}

bool has_letter(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) {
    return std::isalpha(static_cast<unsigned char>(c));
  });
}

} // namespace

std::optional<std::int64_t> parse_timestamp(std::string_view s) {
  s = trim(s);
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(':', start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos)
      break;
    start = pos + 1;
  }
  if (parts.size() > 3)
    return std::nullopt;
  for (auto p : parts)
    if (!all_digits(p))
      return std::nullopt;
  std::int64_t total = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    std::int64_t v = 0;
    if (!parse_uint(parts[i], v))
      return std::nullopt;
    // minutes and seconds after the leading field are two digits below 60
    if (i > 0 && (parts[i].size() != 2 || v >= 60))
      return std::nullopt;
    total = total * 60 + v;
  }
  return total;
}

std::string format_timestamp(std::int64_t seconds) {
  const auto h = seconds / 3600, m = (seconds / 60) % 60, s = seconds % 60;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%lld:%02lld:%02lld", static_cast<long long>(h),
                static_cast<long long>(m), static_cast<long long>(s));
  return buf;
}

// ---------------------------------------------------------------- conflicts

Parsed<std::vector<ConflictEvent>> parse_conflict_log(std::string_view text,
                                                      std::string_view source) {
  Parsed<std::vector<ConflictEvent>> out;
  auto &report = out.report;
  const auto lines = csv::lines(text);
  std::size_t first = expect_header(lines, kConflictHeader, source, false);
  std::unordered_map<std::string, std::int64_t> last_time;

  for (std::size_t i = first; i < lines.size(); ++i) {
    const std::size_t lineno = i + 1;
    std::string_view raw = trim(lines[i]);
    if (raw.empty() || raw.front() == '#')
      continue;
    auto drop = [&](DiagCode code, std::string msg) {
      report.errors.push_back(diag(source, lineno, code, std::move(msg)));
      ++report.stats.dropped;
    };
    auto fields = csv::split_record(raw);
    if (!fields || fields->size() != 5) {
      drop(DiagCode::BadRow, "expected 5 fields");
      continue;
    }
    auto &f = *fields;
    std::string movie(trim(f[0]));
    if (movie.empty()) {
      drop(DiagCode::BadRow, "empty movie id");
      continue;
    }
    auto ts = parse_timestamp(f[1]);
    if (!ts) {
      drop(DiagCode::BadTimestamp, "cannot read timestamp '" + f[1] + "'");
      continue;
    }
    auto a = make_name(f[2]);
    auto b = make_name(f[3]);
    if (!a || !b) {
      drop(DiagCode::BadName, "empty character name");
      continue;
    }
    std::string_view oc = trim(f[4]);
    Outcome outcome;
    if (oc == "A")
      outcome = Outcome::A;
    else if (oc == "B")
      outcome = Outcome::B;
    else if (oc == "D")
      outcome = Outcome::D;
    else {
      drop(DiagCode::BadOutcome, "outcome '" + std::string(oc) + "' is not A, B or D");
      continue;
    }
    if (*a == *b) {
      drop(DiagCode::SelfConflict, "'" + a->display() + "' in conflict with itself");
      continue;
    }

    auto [it, fresh] = last_time.emplace(movie, *ts);
    if (!fresh) {
      if (*ts < it->second)
        report.warnings.push_back(diag(
            source, lineno, DiagCode::NonMonotoneTime,
            "timestamp " + std::to_string(*ts) + "s precedes " +
                std::to_string(it->second) + "s in '" + movie + "'"));
      it->second = *ts;
    }
    out.value.push_back(ConflictEvent{std::move(movie), *ts, std::move(*a),
                                      std::move(*b), outcome});
    ++report.stats.parsed;
  }
  return out;
}

std::string emit_conflict_log(std::span<const ConflictEvent> events) {
  std::string out(kConflictHeader);
  out.push_back('\n');
  for (const auto &e : events) {
    out += csv::join({e.movie_id, format_timestamp(e.timestamp), e.side_a.display(),
                      e.side_b.display(), std::string(to_string(e.outcome))});
    out.push_back('\n');
  }
  return out;
}

// ---------------------------------------------------------------- dialogue

DialogueFormat parse_dialogue_format(std::string_view name) {
  if (name == "colon")
    return DialogueFormat::colon;
  if (name == "screenplay")
    return DialogueFormat::screenplay;
  if (name == "normalized_csv" || name == "csv")
    return DialogueFormat::normalized_csv;
  throw Error(ErrorCode::UnknownFormat, "unknown dialogue format '" +
                                            std::string(name) + "'");
}

std::string_view to_string(DialogueFormat f) {
  switch (f) {
  case DialogueFormat::colon: return "colon";
  case DialogueFormat::screenplay: return "screenplay";
  case DialogueFormat::normalized_csv: return "normalized_csv";
  }
  return "?";
}

bool is_screenplay_cue(std::string_view line) {
  line = trim(line);
  if (line.empty() || line.size() > 40 || is_scene_heading(line))
    return false;
  if (line.front() == '(')
    return false;
  const char last = line.back();
  if (last == '.' || last == '!' || last == '?' || last == ',' || last == ';' ||
      last == ':')
    return false;
  std::size_t letters = 0, upper = 0;
  for (char ch : line) {
    auto u = static_cast<unsigned char>(ch);
    if (std::isalpha(u)) {
      ++letters;
      if (std::isupper(u))
        ++upper;
    }
  }
  return letters > 0 && upper * 10 >= letters * 6;
}

namespace {

void parse_colon(std::string_view text, std::string_view movie_id,
                 std::string_view source, Parsed<std::vector<DialogueEvent>> &out) {
  const auto lines = csv::lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = trim(i == 0 ? strip_bom(lines[i]) : lines[i]);
    if (line.empty() || line.front() == '[' || line.front() == '(' ||
        is_scene_heading(line))
      continue;
    auto colon = line.find(':');
    if (colon == std::string_view::npos)
      continue;
    std::string_view speaker = strip_extension(line.substr(0, colon));
    std::string_view utterance = trim(line.substr(colon + 1));
    if (speaker.empty() || speaker.size() > 40 || !has_letter(speaker))
      continue;
    if (utterance.empty()) {
      out.report.warnings.push_back(diag(source, i + 1, DiagCode::EmptyUtterance,
                                         "speaker '" + std::string(speaker) +
                                             "' has no line"));
      ++out.report.stats.dropped;
      continue;
    }
    out.value.push_back(DialogueEvent{std::string(movie_id), out.value.size(),
                                      CharacterId(speaker), std::string(utterance)});
    ++out.report.stats.parsed;
  }
}

void parse_screenplay(std::string_view text, std::string_view movie_id,
                      Parsed<std::vector<DialogueEvent>> &out) {
  const auto lines = csv::lines(text);
  std::optional<CharacterId> speaker;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = trim(i == 0 ? strip_bom(lines[i]) : lines[i]);
    if (line.empty() || is_scene_heading(line)) {
      speaker.reset();
      continue;
    }
    if (is_screenplay_cue(line)) {
      std::string_view name = strip_extension(line);
      speaker = name.empty() ? std::nullopt : make_name(name);
      continue;
    }
    if (!speaker || is_parenthetical(line))
      continue;
    out.value.push_back(DialogueEvent{std::string(movie_id), out.value.size(),
                                      *speaker, std::string(line)});
    ++out.report.stats.parsed;
  }
}

void parse_dialogue_csv(std::string_view text, std::string_view source,
                        Parsed<std::vector<DialogueEvent>> &out) {
  auto &report = out.report;
  const auto lines = csv::lines(text);
  std::size_t first = expect_header(lines, kDialogueHeader, source, false);
  std::unordered_map<std::string, std::size_t> last_index;
  for (std::size_t i = first; i < lines.size(); ++i) {
    const std::size_t lineno = i + 1;
    if (trim(lines[i]).empty())
      continue;
    auto drop = [&](DiagCode code, std::string msg) {
      report.errors.push_back(diag(source, lineno, code, std::move(msg)));
      ++report.stats.dropped;
    };
    auto fields = csv::split_record(lines[i]);
    if (!fields || fields->size() != 4) {
      drop(DiagCode::BadRow, "expected 4 fields");
      continue;
    }
    auto &f = *fields;
    std::string movie(trim(f[0]));
    std::int64_t index = 0;
    if (movie.empty()) {
      drop(DiagCode::BadRow, "empty movie id");
      continue;
    }
    if (!parse_uint(trim(f[1]), index)) {
      drop(DiagCode::BadLineIndex, "cannot read line index '" + f[1] + "'");
      continue;
    }
    auto speaker = make_name(f[2]);
    if (!speaker) {
      drop(DiagCode::BadName, "empty speaker");
      continue;
    }
    const auto idx = static_cast<std::size_t>(index);
    if (auto it = last_index.find(movie); it != last_index.end() && idx <= it->second) {
      drop(DiagCode::NonMonotoneIndex, "line index " + std::to_string(idx) +
                                           " does not follow " +
                                           std::to_string(it->second));
      continue;
    }
    last_index[movie] = idx;
    std::optional<std::string> line_text;
    if (!f[3].empty())
      line_text = std::move(f[3]);
    out.value.push_back(DialogueEvent{std::move(movie), idx, std::move(*speaker),
                                      std::move(line_text)});
    ++report.stats.parsed;
  }
}

} // namespace

Parsed<std::vector<DialogueEvent>> parse_dialogue(std::string_view text,
                                                  DialogueFormat format,
                                                  std::string_view movie_id,
                                                  std::string_view source) {
  Parsed<std::vector<DialogueEvent>> out;
  switch (format) {
  case DialogueFormat::colon:
    parse_colon(text, movie_id, source, out);
    break;
  case DialogueFormat::screenplay:
    parse_screenplay(text, movie_id, out);
    break;
  case DialogueFormat::normalized_csv:
    parse_dialogue_csv(text, source, out);
    break;
  }
  return out;
}

std::string emit_dialogue_csv(std::span<const DialogueEvent> events) {
  std::string out(kDialogueHeader);
  out.push_back('\n');
  for (const auto &e : events) {
    out += csv::join({e.movie_id, std::to_string(e.line_index), e.speaker.display(),
                      e.text.value_or("")});
    out.push_back('\n');
  }
  return out;
}

// ---------------------------------------------------------------- alias CSV

Parsed<AliasTable> parse_alias_table(std::string_view text, std::string_view source) {
  Parsed<AliasTable> out;
  const auto lines = csv::lines(text);
  std::size_t first = expect_header(lines, kAliasHeader, source, true);
  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t i = first; i < lines.size(); ++i) {
    const std::size_t lineno = i + 1;
    std::string_view raw = trim(lines[i]);
    if (raw.empty() || raw.front() == '#')
      continue;
    auto fields = csv::split_record(raw);
    if (!fields || fields->size() != 2) {
      out.report.errors.push_back(diag(source, lineno, DiagCode::BadRow, "expected 2 fields"));
      ++out.report.stats.dropped;
      continue;
    }
    auto canonical = make_name((*fields)[0]);
    auto alias = make_name((*fields)[1]);
    if (!canonical || !alias) {
      out.report.errors.push_back(diag(source, lineno, DiagCode::BadName, "empty name"));
      ++out.report.stats.dropped;
      continue;
    }
    if (!seen.emplace(canonical->key(), alias->key()).second) {
      out.report.warnings.push_back(diag(source, lineno, DiagCode::DuplicateRow,
                                         "repeated pair '" + canonical->display() +
                                             "', '" + alias->display() + "'"));
      continue;
    }
    try {
      out.value.add(*canonical, *alias);
    } catch (const Error &e) {
      throw Error(ErrorCode::ConflictingAlias,
                  std::string(source) + ":" + std::to_string(lineno) + ": " + e.what());
    }
    ++out.report.stats.parsed;
  }
  return out;
}

// ---------------------------------------------------------------- metadata

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string &path, const std::string &what) {
  throw Error(ErrorCode::SchemaError, (path.empty() ? "/" : path) + ": " + what);
}

const json &require(const json &obj, const std::string &path, const char *key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null())
    schema_error(path + "/" + key, "required field missing");
  return *it;
}

double number_field(const json &obj, const std::string &path, const char *key) {
  const json &v = require(obj, path, key);
  if (!v.is_number())
    schema_error(path + "/" + key, "expected a number");
  return v.get<double>();
}

std::optional<double> optional_number(const json &obj, const std::string &path,
                                      const char *key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null())
    return std::nullopt;
  if (!it->is_number())
    schema_error(path + "/" + key, "expected a number or null");
  return it->get<double>();
}

std::string string_field(const json &obj, const std::string &path, const char *key) {
  const json &v = require(obj, path, key);
  if (!v.is_string())
    schema_error(path + "/" + key, "expected a string");
  return v.get<std::string>();
}

} // namespace

std::vector<MovieRecord> parse_metadata(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error &e) {
    schema_error("", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_array())
    schema_error("", "expected an array of movie records");

  std::vector<MovieRecord> out;
  out.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const json &obj = doc[i];
    const std::string path = "/" + std::to_string(i);
    if (!obj.is_object())
      schema_error(path, "expected an object");

    MovieRecord r;
    r.title = string_field(obj, path, "title");
    if (clean_name(r.title).empty())
      schema_error(path + "/title", "empty title");
    r.movie_id = obj.contains("movie_id") && !obj["movie_id"].is_null()
                     ? string_field(obj, path, "movie_id")
                     : r.title;

    const std::string type = string_field(obj, path, "movie_type");
    if (type == "origin")
      r.movie_type = MovieType::origin;
    else if (type == "sequel")
      r.movie_type = MovieType::sequel;
    else if (type == "team_up")
      r.movie_type = MovieType::team_up;
    else
      throw Error(ErrorCode::UnknownMovieType,
                  path + "/movie_type: '" + type + "' is not origin, sequel or team_up");

    r.budget_musd = number_field(obj, path, "budget_musd");
    if (r.budget_musd < 0)
      schema_error(path + "/budget_musd", "must be >= 0");
    r.box_office_musd = optional_number(obj, path, "box_office_musd");
    if (r.box_office_musd && *r.box_office_musd < 0)
      schema_error(path + "/box_office_musd", "must be >= 0");
    r.imdb_rating = optional_number(obj, path, "imdb_rating");
    if (r.imdb_rating && (*r.imdb_rating < 0 || *r.imdb_rating > 10))
      schema_error(path + "/imdb_rating", "must lie in [0, 10]");

    auto date = parse_iso_date(string_field(obj, path, "release_date"));
    if (!date)
      schema_error(path + "/release_date", "expected YYYY-MM-DD");
    r.release_date = *date;

    r.runtime_min = number_field(obj, path, "runtime_min");
    if (!(r.runtime_min > 0))
      schema_error(path + "/runtime_min", "must be > 0");

    const std::string status = string_field(obj, path, "script_status");
    if (status == "complete")
      r.script_status = ScriptStatus::complete;
    else if (status == "partial")
      r.script_status = ScriptStatus::partial;
    else if (status == "incomplete")
      r.script_status = ScriptStatus::incomplete;
    else
      schema_error(path + "/script_status", "'" + status + "' is not complete, partial or incomplete");

    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------- resolution

namespace {

CharacterId resolve(const CharacterId &name, const AliasTable &aliases,
                    ParseStats &stats) {
  if (auto canonical = aliases.lookup(name)) {
    ++stats.resolved_names;
    return *canonical;
  }
  ++stats.unknown_names;
  return name;
}

void flag_rare_names(const std::map<CharacterId, std::size_t> &freq,
                     std::string_view source, ValidationReport &report) {
  for (const auto &[name, n] : freq)
    if (n == 1)
      report.warnings.push_back(diag(source, 0, DiagCode::LowFrequencyName,
                                     "'" + name.display() +
                                         "' occurs once (possible misspelling)"));
}

} // namespace

Parsed<std::vector<ConflictEvent>> resolve_and_validate(std::vector<ConflictEvent> events,
                                                        const AliasTable &aliases,
                                                        std::string_view source) {
  Parsed<std::vector<ConflictEvent>> out;
  auto &report = out.report;
  std::map<CharacterId, std::size_t> freq;
  std::unordered_map<std::string, std::int64_t> last_time;
  for (std::size_t i = 0; i < events.size(); ++i) {
    auto &e = events[i];
    e.side_a = resolve(e.side_a, aliases, report.stats);
    e.side_b = resolve(e.side_b, aliases, report.stats);
    ++freq[e.side_a];
    ++freq[e.side_b];
    if (e.side_a == e.side_b)
      report.warnings.push_back(diag(source, 0, DiagCode::SelfConflict,
                                     "event " + std::to_string(i) + ": both sides resolve to '" +
                                         e.side_a.display() + "'"));
    auto [it, fresh] = last_time.emplace(e.movie_id, e.timestamp);
    if (!fresh) {
      if (e.timestamp < it->second)
        report.warnings.push_back(diag(source, 0, DiagCode::NonMonotoneTime,
                                       "event " + std::to_string(i) + " at " +
                                           std::to_string(e.timestamp) + "s precedes " +
                                           std::to_string(it->second) + "s"));
      it->second = e.timestamp;
    }
  }
  flag_rare_names(freq, source, report);
  report.stats.parsed = events.size();
  out.value = std::move(events);
  return out;
}

Parsed<std::vector<DialogueEvent>> resolve_and_validate(std::vector<DialogueEvent> events,
                                                        const AliasTable &aliases,
                                                        std::string_view source) {
  Parsed<std::vector<DialogueEvent>> out;
  std::map<CharacterId, std::size_t> freq;
  for (auto &e : events) {
    e.speaker = resolve(e.speaker, aliases, out.report.stats);
    ++freq[e.speaker];
  }
  flag_rare_names(freq, source, out.report);
  out.report.stats.parsed = events.size();
  out.value = std::move(events);
  return out;
}

} // namespace castsize
