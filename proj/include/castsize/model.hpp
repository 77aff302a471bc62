#pragma once

#include <chrono>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "castsize/error.hpp"

namespace castsize {

/// Canonical character identity.
///
/// Construction strips leading/trailing whitespace and collapses internal
/// runs of whitespace to one space. Identity is the lower-cased form of that
/// text (`key()`); the cleaned original spelling is kept for display only and
/// never takes part in comparisons.
class CharacterId {
public:
  explicit CharacterId(std::string_view raw);

  const std::string &key() const noexcept { return key_; }
  const std::string &display() const noexcept { return display_; }

  friend bool operator==(const CharacterId &a, const CharacterId &b) noexcept {
    return a.key_ == b.key_;
  }
  friend std::strong_ordering operator<=>(const CharacterId &a,
                                          const CharacterId &b) noexcept {
    return a.key_ <=> b.key_;
  }

private:
  std::string key_;
  std::string display_;
};

// Whitespace-collapsed spelling of a name, or empty if nothing remains.
std::string clean_name(std::string_view raw);

enum class SourceMode { dialogue, conflict };
std::string_view to_string(SourceMode mode);

using CountMap = std::map<CharacterId, double>;

struct Share {
  CharacterId character;
  double proportion;

  friend bool operator==(const Share &a, const Share &b) {
    return a.character == b.character && a.proportion == b.proportion;
  }
};

/// Normalized participation shares for one movie (or a mixture of movies).
/// Entries are sorted by character key and never include zero shares.
class ParticipationDistribution {
public:
  static constexpr double kSumTolerance = 1e-9;

  // Validates the invariants and sorts; throws InvalidDistribution.
  static ParticipationDistribution from_shares(std::string movie_id,
                                               SourceMode mode,
                                               std::vector<Share> shares);

  std::span<const Share> entries() const noexcept { return entries_; }
  std::size_t support_size() const noexcept { return entries_.size(); }
  SourceMode source_mode() const noexcept { return mode_; }
  const std::string &movie_id() const noexcept { return movie_id_; }

  // Zero for characters outside the support.
  double proportion(const CharacterId &c) const;

  friend bool operator==(const ParticipationDistribution &,
                         const ParticipationDistribution &) = default;

private:
  ParticipationDistribution() = default;

  std::string movie_id_;
  SourceMode mode_ = SourceMode::conflict;
  std::vector<Share> entries_;
};

ParticipationDistribution normalize(const CountMap &counts, SourceMode mode,
                                    std::string movie_id);

enum class Outcome { A, B, D };

struct ConflictEvent {
  std::string movie_id;
  std::int64_t timestamp = 0; // seconds from movie start
  CharacterId side_a{"?"};
  CharacterId side_b{"?"};
  Outcome outcome = Outcome::D;
};

struct DialogueEvent {
  std::string movie_id;
  std::size_t line_index = 0;
  CharacterId speaker{"?"};
  std::optional<std::string> text;
};

enum class MovieType { origin, sequel, team_up };
enum class ScriptStatus { complete, partial, incomplete };

std::string_view to_string(MovieType t);
std::string_view to_string(ScriptStatus s);
std::string_view to_string(Outcome o);

struct MovieRecord {
  std::string movie_id; // key linking transcription files; defaults to title
  std::string title;
  MovieType movie_type = MovieType::origin;
  double budget_musd = 0.0;
  std::optional<double> box_office_musd;
  std::optional<double> imdb_rating;
  std::chrono::year_month_day release_date{};
  double runtime_min = 0.0;
  ScriptStatus script_status = ScriptStatus::complete;
};

enum class MatrixKind { dissimilarity, similarity };

/// Square symmetric matrix of pairwise movie comparisons.
///
/// Dissimilarity matrices have a zero diagonal; similarity matrices carry
/// the self-similarity on the diagonal. Entries are non-negative either way.
class DistanceMatrix {
public:
  static constexpr double kTolerance = 1e-12;

  // Throws InvalidMatrix when shape, symmetry, diagonal or sign is off.
  DistanceMatrix(std::vector<std::string> labels, std::vector<double> values,
                 MatrixKind kind = MatrixKind::dissimilarity);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string> &labels() const noexcept { return labels_; }
  double operator()(std::size_t i, std::size_t j) const {
    return values_[i * labels_.size() + j];
  }
  std::span<const double> values() const noexcept { return values_; }
  MatrixKind kind() const noexcept { return kind_; }

  std::size_t index_of(std::string_view label) const; // throws UnknownLabel

private:
  std::vector<std::string> labels_;
  std::vector<double> values_;
  MatrixKind kind_;
};

// "YYYY-MM-DD"; nullopt when malformed or not a valid calendar date.
std::optional<std::chrono::year_month_day> parse_iso_date(std::string_view s);
std::string format_iso_date(const std::chrono::year_month_day &d);

} // namespace castsize
