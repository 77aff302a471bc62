#include "castsize/csv.hpp"

#include <cctype>

namespace castsize::csv {

std::optional<std::vector<std::string>> split_record(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool in_quotes = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (in_quotes) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        cur.push_back(ch);
      }
    } else if (ch == '"' && !was_quoted && trim(cur).empty()) {
      cur.clear();
      in_quotes = true;
      was_quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
      was_quoted = false;
    } else if (!was_quoted) {
      cur.push_back(ch);
    }
    // characters after a closing quote and before the comma are dropped
  }
  if (in_quotes)
    return std::nullopt;
  fields.push_back(std::move(cur));
  return fields;
}

std::string escape(std::string_view field) {
  bool quote = !field.empty() &&
               (std::isspace(static_cast<unsigned char>(field.front())) ||
                std::isspace(static_cast<unsigned char>(field.back())));
  for (char ch : field)
    if (ch == ',' || ch == '"' || ch == '\n' || ch == '\r')
      quote = true;
  if (!quote)
    return std::string(field);
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"')
      out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

std::string join(const std::vector<std::string> &fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i)
      out.push_back(',');
    out += escape(fields[i]);
  }
  return out;
}

std::vector<std::string_view> lines(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos)
      end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r')
      line.remove_suffix(1);
    out.push_back(line);
    start = end + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

} // namespace castsize::csv
