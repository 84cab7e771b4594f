#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mpad {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input. `line()` is 1-based, 0 when not line-oriented.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Vector or image dimensions that do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Degenerate landmark or mesh geometry.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Invalid arguments or data violating an operation's precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace mpad
