#pragma once

#include <stdexcept>
#include <string>

namespace qmc {

// Base of every error the library throws on bad input.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shapes or subsystem dimensions that do not fit together.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Numerically invalid objects: non-Hermitian, not PSD, not normalized, not isometric.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Malformed input files. The message names the offending field.
class ParseError : public Error {
 public:
  ParseError(const std::string& field, const std::string& what)
      : Error("field '" + field + "': " + what), field_(field) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace qmc
