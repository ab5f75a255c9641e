#pragma once

#include <stdexcept>
#include <string>

namespace draftbots {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Set file or model header does not satisfy its schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Pack recipe cannot be satisfied by the configured set.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Illegal transition of a draft (bad pick, stepping a finished draft).
class DraftError : public Error {
 public:
  using Error::Error;
};

/// Malformed input line in a log or export file.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A draft log breaks one of its structural invariants.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Corrupt, mismatched or incompatible model container.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure during training (non-finite gradient etc).
class TrainingError : public Error {
 public:
  using Error::Error;
};

}  // namespace draftbots
