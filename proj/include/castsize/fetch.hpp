#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace castsize {

inline constexpr const char *kApiKeyEnv = "CASTSIZE_OMDB_API_KEY";

struct FetchConfig {
  std::string base_url = "http://www.omdbapi.com"; // scheme://host[:port][/prefix]
  std::string api_key;
  std::chrono::milliseconds timeout{10000};
};

/// The subset of a movie record an OMDb-style service can supply. Fields
/// the service omits or reports as "N/A" stay empty.
struct FetchedMetadata {
  std::string title;
  std::optional<double> imdb_rating;
  std::optional<double> runtime_min;
  std::optional<double> box_office_musd;
  std::optional<std::chrono::year_month_day> release_date;
};

/// One GET to `{base_url}/?t=<title>&apikey=<key>`. Throws HttpError
/// (non-200 status or transport failure), Timeout, or SchemaError.
FetchedMetadata fetch_metadata(std::string_view title, const FetchConfig &config);

FetchedMetadata parse_omdb_payload(std::string_view body); // SchemaError

// Metadata-file JSON object; fields the service cannot supply are null.
std::string to_metadata_json(const FetchedMetadata &m);

} // namespace castsize
