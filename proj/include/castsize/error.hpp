#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace castsize {

enum class ErrorCode {
  InvalidName,
  InvalidDistribution,
  InvalidMatrix,
  AllZeroCounts,
  NegativeCount,
  MissingHeader,
  UnknownFormat,
  ConflictingAlias,
  SchemaError,
  UnknownMovieType,
  EmptyEventList,
  MixedMovies,
  EmptyInput,
  AllZeroWeights,
  TooFewMovies,
  BadK,
  DimsTooLarge,
  UnknownLabel,
  MissingBoxOffice,
  ZeroBudget,
  LengthMismatch,
  DegenerateX,
  TooFewPoints,
  ConfigError,
  DataError,
  HttpError,
  Timeout,
  IoError,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

} // namespace castsize
