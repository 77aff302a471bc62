#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace castsize::csv {

// Splits one physical line into fields. Double-quoted fields may contain
// commas and doubled quotes; embedded newlines are not supported. Returns
// nullopt on an unterminated quote.
std::optional<std::vector<std::string>> split_record(std::string_view line);

// Quotes a field when it holds a comma, a quote, a line break or
// leading/trailing whitespace.
std::string escape(std::string_view field);

std::string join(const std::vector<std::string> &fields);

// Physical lines with any trailing '\r' removed.
std::vector<std::string_view> lines(std::string_view text);

std::string_view trim(std::string_view s);

} // namespace castsize::csv
