#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "castsize/model.hpp"

namespace castsize {

enum class DiagCode {
  BadRow,
  BadTimestamp,
  BadOutcome,
  BadName,
  BadLineIndex,
  SelfConflict,
  NonMonotoneTime,
  NonMonotoneIndex,
  EmptyUtterance,
  DuplicateRow,
  LowFrequencyName,
  UnknownName,
  MissingData,
};

std::string_view to_string(DiagCode code);

struct Diagnostic {
  std::string file;
  std::size_t line = 0; // 1-based; 0 when not tied to a line
  DiagCode code;
  std::string message;
};

struct ParseStats {
  std::size_t parsed = 0;
  std::size_t dropped = 0;
  std::size_t resolved_names = 0; // names rewritten through the alias table
  std::size_t unknown_names = 0;  // names absent from the alias table
};

struct ValidationReport {
  std::vector<Diagnostic> errors;
  std::vector<Diagnostic> warnings;
  ParseStats stats;

  bool ok() const noexcept { return errors.empty(); }
  bool has_warning(DiagCode code) const;
  bool has_error(DiagCode code) const;
  void merge(const ValidationReport &other);
  // One "file:line: level code: message" line per finding.
  std::string render() const;
};

template <typename T> struct Parsed {
  T value;
  ValidationReport report;
};

/// Canonical-name lookup. Every canonical name maps to itself, and lookups
/// use the same normalization as CharacterId.
class AliasTable {
public:
  AliasTable() = default;

  // Throws ConflictingAlias when `alias` already maps elsewhere. Returns
  // false when the exact pair was already present.
  bool add(const CharacterId &canonical, const CharacterId &alias);

  std::optional<CharacterId> lookup(const CharacterId &name) const;
  bool contains(const CharacterId &name) const { return map_.contains(name); }
  std::size_t size() const noexcept { return map_.size(); }
  bool empty() const noexcept { return map_.empty(); }

private:
  void insert_checked(const CharacterId &alias, const CharacterId &canonical);

  std::map<CharacterId, CharacterId> map_;
};

enum class DialogueFormat { colon, screenplay, normalized_csv };

DialogueFormat parse_dialogue_format(std::string_view name); // UnknownFormat
std::string_view to_string(DialogueFormat f);

inline constexpr std::string_view kConflictHeader =
    "movie,timestamp,side_a,side_b,outcome";
inline constexpr std::string_view kDialogueHeader =
    "movie,line_index,speaker,text";
inline constexpr std::string_view kAliasHeader = "canonical,alias";

// "H:MM:SS", "MM:SS" or bare seconds.
std::optional<std::int64_t> parse_timestamp(std::string_view s);
std::string format_timestamp(std::int64_t seconds);

Parsed<std::vector<ConflictEvent>>
parse_conflict_log(std::string_view text, std::string_view source = "<conflicts>");

// `movie_id` labels events for the colon and screenplay grammars; the CSV
// grammar carries its own movie column.
Parsed<std::vector<DialogueEvent>>
parse_dialogue(std::string_view text, DialogueFormat format,
               std::string_view movie_id = "", std::string_view source = "<dialogue>");

// True when a trimmed screenplay line reads as a speaker cue.
bool is_screenplay_cue(std::string_view line);

Parsed<AliasTable> parse_alias_table(std::string_view text,
                                     std::string_view source = "<aliases>");

// JSON array of movie records; throws SchemaError (with a JSON pointer) or
// UnknownMovieType.
std::vector<MovieRecord> parse_metadata(std::string_view text);

std::string emit_conflict_log(std::span<const ConflictEvent> events);
std::string emit_dialogue_csv(std::span<const DialogueEvent> events);

Parsed<std::vector<ConflictEvent>>
resolve_and_validate(std::vector<ConflictEvent> events, const AliasTable &aliases,
                     std::string_view source = "<conflicts>");
Parsed<std::vector<DialogueEvent>>
resolve_and_validate(std::vector<DialogueEvent> events, const AliasTable &aliases,
                     std::string_view source = "<dialogue>");

} // namespace castsize
