#pragma once

#include <stdexcept>
#include <string>

namespace coat {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ShapeError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

// A caller broke an operation's precondition.
struct ContractError : Error {
  using Error::Error;
};

struct UsageError : Error {
  using Error::Error;
};

struct ParseError : Error {
  ParseError(const std::string& what, int line, int column)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line(line),
        column(column) {}
  int line;
  int column;
};

struct GenerationError : Error {
  using Error::Error;
};

struct OracleError : Error {
  using Error::Error;
};

// A curriculum round that solved nothing at its tier.
struct CurriculumError : Error {
  using Error::Error;
};

// Reading or writing an artifact failed, or the artifact is malformed.
struct IoError : Error {
  using Error::Error;
};

}  // namespace coat
