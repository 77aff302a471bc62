#include "castsize/model.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace castsize {

std::string_view to_string(ErrorCode code) {
  switch (code) {
  case ErrorCode::InvalidName: return "InvalidName";
  case ErrorCode::InvalidDistribution: return "InvalidDistribution";
  case ErrorCode::InvalidMatrix: return "InvalidMatrix";
  case ErrorCode::AllZeroCounts: return "AllZeroCounts";
  case ErrorCode::NegativeCount: return "NegativeCount";
  case ErrorCode::MissingHeader: return "MissingHeader";
  case ErrorCode::UnknownFormat: return "UnknownFormat";
  case ErrorCode::ConflictingAlias: return "ConflictingAlias";
  case ErrorCode::SchemaError: return "SchemaError";
  case ErrorCode::UnknownMovieType: return "UnknownMovieType";
  case ErrorCode::EmptyEventList: return "EmptyEventList";
  case ErrorCode::MixedMovies: return "MixedMovies";
  case ErrorCode::EmptyInput: return "EmptyInput";
  case ErrorCode::AllZeroWeights: return "AllZeroWeights";
  case ErrorCode::TooFewMovies: return "TooFewMovies";
  case ErrorCode::BadK: return "BadK";
  case ErrorCode::DimsTooLarge: return "DimsTooLarge";
  case ErrorCode::UnknownLabel: return "UnknownLabel";
  case ErrorCode::MissingBoxOffice: return "MissingBoxOffice";
  case ErrorCode::ZeroBudget: return "ZeroBudget";
  case ErrorCode::LengthMismatch: return "LengthMismatch";
  case ErrorCode::DegenerateX: return "DegenerateX";
  case ErrorCode::TooFewPoints: return "TooFewPoints";
  case ErrorCode::ConfigError: return "ConfigError";
  case ErrorCode::DataError: return "DataError";
  case ErrorCode::HttpError: return "HttpError";
  case ErrorCode::Timeout: return "Timeout";
  case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

std::string clean_name(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (char ch : raw) {
    if (std::isspace(static_cast<unsigned char>(ch))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(ch);
  }
  return out;
}

CharacterId::CharacterId(std::string_view raw) : display_(clean_name(raw)) {
  if (display_.empty())
    throw Error(ErrorCode::InvalidName, "character name is empty");
  key_ = display_;
  // ASCII folding only; multi-byte UTF-8 sequences pass through untouched.
  for (char &ch : key_)
    ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
}

std::string_view to_string(SourceMode mode) {
  return mode == SourceMode::dialogue ? "dialogue" : "conflict";
}

std::string_view to_string(MovieType t) {
  switch (t) {
  case MovieType::origin: return "origin";
  case MovieType::sequel: return "sequel";
  case MovieType::team_up: return "team_up";
  }
  return "?";
}

std::string_view to_string(ScriptStatus s) {
  switch (s) {
  case ScriptStatus::complete: return "complete";
  case ScriptStatus::partial: return "partial";
  case ScriptStatus::incomplete: return "incomplete";
  }
  return "?";
}

std::string_view to_string(Outcome o) {
  switch (o) {
  case Outcome::A: return "A";
  case Outcome::B: return "B";
  case Outcome::D: return "D";
  }
  return "?";
}

ParticipationDistribution
ParticipationDistribution::from_shares(std::string movie_id, SourceMode mode,
                                       std::vector<Share> shares) {
  if (shares.empty())
    throw Error(ErrorCode::InvalidDistribution, "empty support");
  std::sort(shares.begin(), shares.end(), [](const Share &a, const Share &b) {
    return a.character < b.character;
  });
  double total = 0.0;
  for (std::size_t i = 0; i < shares.size(); ++i) {
    const double p = shares[i].proportion;
    if (!(p > 0.0 && p <= 1.0))
      throw Error(ErrorCode::InvalidDistribution,
                  "proportion for '" + shares[i].character.display() +
                      "' outside (0, 1]");
    if (i > 0 && shares[i].character == shares[i - 1].character)
      throw Error(ErrorCode::InvalidDistribution,
                  "duplicate character '" + shares[i].character.display() +
                      "'");
    total += p;
  }
  if (std::abs(total - 1.0) > kSumTolerance)
    throw Error(ErrorCode::InvalidDistribution,
                "proportions sum to " + std::to_string(total));

  ParticipationDistribution d;
  d.movie_id_ = std::move(movie_id);
  d.mode_ = mode;
  d.entries_ = std::move(shares);
  return d;
}

double ParticipationDistribution::proportion(const CharacterId &c) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), c,
      [](const Share &s, const CharacterId &id) { return s.character < id; });
  return (it != entries_.end() && it->character == c) ? it->proportion : 0.0;
}

ParticipationDistribution normalize(const CountMap &counts, SourceMode mode,
                                    std::string movie_id) {
  double total = 0.0;
  for (const auto &[id, n] : counts) {
    if (n < 0.0 || std::isnan(n))
      throw Error(ErrorCode::NegativeCount,
                  "count for '" + id.display() + "' is negative");
    total += n;
  }
  if (!(total > 0.0))
    throw Error(ErrorCode::AllZeroCounts, "no positive counts for movie '" +
                                              movie_id + "'");

  std::vector<Share> shares;
  shares.reserve(counts.size());
  for (const auto &[id, n] : counts)
    if (n > 0.0)
      shares.push_back({id, n / total});
  return ParticipationDistribution::from_shares(std::move(movie_id), mode,
                                                std::move(shares));
}

DistanceMatrix::DistanceMatrix(std::vector<std::string> labels,
                               std::vector<double> values, MatrixKind kind)
    : labels_(std::move(labels)), values_(std::move(values)), kind_(kind) {
  const std::size_t n = labels_.size();
  if (values_.size() != n * n)
    throw Error(ErrorCode::InvalidMatrix,
                "expected " + std::to_string(n * n) + " values, got " +
                    std::to_string(values_.size()));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = (*this)(i, j);
      if (!std::isfinite(v) || v < 0.0)
        throw Error(ErrorCode::InvalidMatrix,
                    "entry (" + std::to_string(i) + "," + std::to_string(j) +
                        ") is negative or not finite");
      if (std::abs(v - (*this)(j, i)) > kTolerance)
        throw Error(ErrorCode::InvalidMatrix, "matrix is not symmetric");
    }
    if (kind_ == MatrixKind::dissimilarity && std::abs((*this)(i, i)) > kTolerance)
      throw Error(ErrorCode::InvalidMatrix, "non-zero diagonal");
  }
}

std::size_t DistanceMatrix::index_of(std::string_view label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end())
    throw Error(ErrorCode::UnknownLabel, "no movie '" + std::string(label) + "'");
  return static_cast<std::size_t>(it - labels_.begin());
}

std::optional<std::chrono::year_month_day> parse_iso_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-')
    return std::nullopt;
  int y = 0;
  unsigned m = 0, d = 0;
  auto field = [&](std::size_t pos, std::size_t len, auto &out) {
    auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + pos + len, out);
    return ec == std::errc{} && ptr == s.data() + pos + len;
  };
  if (!field(0, 4, y) || !field(5, 2, m) || !field(8, 2, d))
    return std::nullopt;
  std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m},
                                  std::chrono::day{d}};
  if (!ymd.ok())
    return std::nullopt;
  return ymd;
}

std::string format_iso_date(const std::chrono::year_month_day &d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
  return buf;
}

} // namespace castsize
