#include "castsize/fetch.hpp"

#include <array>
#include <charconv>
#include <cstdlib>

#include <httplib.h>
#include <json.hpp>

#include "castsize/csv.hpp"
#include "castsize/error.hpp"
#include "castsize/model.hpp"

namespace castsize {

namespace {

using nlohmann::json;

std::optional<std::string> text_field(const json &doc, const char *key) {
  auto it = doc.find(key);
  if (it == doc.end() || it->is_null())
    return std::nullopt;
  if (!it->is_string())
    throw Error(ErrorCode::SchemaError, std::string("/") + key + ": expected a string");
  std::string v = it->get<std::string>();
  if (v == "N/A" || csv::trim(v).empty())
    return std::nullopt;
  return v;
}

// Leading decimal number, ignoring '$' and thousands separators.
std::optional<double> leading_number(std::string_view s) {
  std::string digits;
  for (char ch : s) {
    if (ch == '$' || ch == ',')
      continue;
    if ((ch >= '0' && ch <= '9') || ch == '.')
      digits.push_back(ch);
    else if (!digits.empty())
      break;
  }
  if (digits.empty())
    return std::nullopt;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
  if (ec != std::errc{})
    return std::nullopt;
  return v;
}

// "02 May 2008"
std::optional<std::chrono::year_month_day> parse_released(std::string_view s) {
  static constexpr std::array<std::string_view, 12> months{
      "Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
  s = csv::trim(s);
  auto sp1 = s.find(' ');
  auto sp2 = s.rfind(' ');
  if (sp1 == std::string_view::npos || sp1 == sp2)
    return std::nullopt;
  unsigned day = 0;
  int year = 0;
  auto d = s.substr(0, sp1), m = s.substr(sp1 + 1, sp2 - sp1 - 1), y = s.substr(sp2 + 1);
  if (std::from_chars(d.data(), d.data() + d.size(), day).ec != std::errc{} ||
      std::from_chars(y.data(), y.data() + y.size(), year).ec != std::errc{})
    return std::nullopt;
  for (unsigned i = 0; i < months.size(); ++i)
    if (m.substr(0, 3) == months[i]) {
      std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{i + 1},
                                      std::chrono::day{day}};
      return ymd.ok() ? std::optional(ymd) : std::nullopt;
    }
  return std::nullopt;
}

} // namespace

FetchedMetadata parse_omdb_payload(std::string_view body) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::parse_error &e) {
    throw Error(ErrorCode::SchemaError, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object())
    throw Error(ErrorCode::SchemaError, "/: expected an object");
  if (auto response = text_field(doc, "Response"); response && *response == "False")
    throw Error(ErrorCode::SchemaError,
                "service reported: " + text_field(doc, "Error").value_or("no result"));

  FetchedMetadata m;
  auto title = text_field(doc, "Title");
  if (!title)
    throw Error(ErrorCode::SchemaError, "/Title: required field missing");
  m.title = *title;
  if (auto v = text_field(doc, "imdbRating"))
    m.imdb_rating = leading_number(*v);
  if (auto v = text_field(doc, "Runtime"))
    m.runtime_min = leading_number(*v);
  if (auto v = text_field(doc, "BoxOffice"))
    if (auto dollars = leading_number(*v))
      m.box_office_musd = *dollars / 1e6;
  if (auto v = text_field(doc, "Released"))
    m.release_date = parse_released(*v);
  return m;
}

FetchedMetadata fetch_metadata(std::string_view title, const FetchConfig &config) {
  std::string host = config.base_url, prefix;
  if (auto scheme = host.find("://"); scheme != std::string::npos) {
    if (auto slash = host.find('/', scheme + 3); slash != std::string::npos) {
      prefix = host.substr(slash);
      host.resize(slash);
    }
  }
  while (!prefix.empty() && prefix.back() == '/')
    prefix.pop_back();

  httplib::Client client(host);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(config.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  httplib::Params params{{"t", std::string(title)}, {"apikey", config.api_key}};
  const auto start = std::chrono::steady_clock::now();
  auto res = client.Get(prefix + "/", params, httplib::Headers{});
  if (!res) {
    const auto elapsed = std::chrono::steady_clock::now() - start;
    const auto err = res.error();
    if (err == httplib::Error::ConnectionTimeout ||
        (err == httplib::Error::Read && elapsed >= config.timeout))
      throw Error(ErrorCode::Timeout, "no response from " + host + " within " +
                                          std::to_string(config.timeout.count()) + " ms");
    throw Error(ErrorCode::HttpError, "request to " + host + " failed: " + httplib::to_string(err));
  }
  if (res->status != 200)
    throw Error(ErrorCode::HttpError, "HTTP " + std::to_string(res->status));
  return parse_omdb_payload(res->body);
}

std::string to_metadata_json(const FetchedMetadata &m) {
  nlohmann::ordered_json doc;
  auto opt = [](const std::optional<double> &v) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
  };
  doc["title"] = m.title;
  doc["movie_type"] = nullptr;
  doc["budget_musd"] = nullptr;
  doc["box_office_musd"] = opt(m.box_office_musd);
  doc["imdb_rating"] = opt(m.imdb_rating);
  doc["release_date"] = m.release_date ? nlohmann::ordered_json(format_iso_date(*m.release_date))
                                       : nlohmann::ordered_json(nullptr);
  doc["runtime_min"] = opt(m.runtime_min);
  doc["script_status"] = nullptr;
  return doc.dump(2) + "\n";
}

} // namespace castsize
