#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tgk {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input text. `line` is 1-based.
struct ParseError : Error {
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line(line) {}
  std::size_t line;
};

/// Well-formed input that violates a data-model invariant.
struct ValidationError : Error {
  using Error::Error;
};

/// An exhaustive enumeration exceeded its configured result cap.
struct CapacityError : Error {
  using Error::Error;
};

/// A checked counter would have wrapped.
struct OverflowError : Error {
  using Error::Error;
};

}  // namespace tgk
