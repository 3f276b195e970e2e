#pragma once

#include <stdexcept>
#include <string>

namespace telab {

// Base for every error raised by the library. Subclasses identify the
// failure category so callers (the CLI in particular) can map them to
// exit codes and messages.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text (JSON, GML, CSV, checkpoint container).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed input that violates a domain invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Incompatible tensor or configuration shapes.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Numerical failure during training (non-finite loss).
class TrainingError : public Error {
 public:
  using Error::Error;
};

}  // namespace telab
