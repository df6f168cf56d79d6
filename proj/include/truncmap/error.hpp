#ifndef TRUNCMAP_ERROR_HPP
#define TRUNCMAP_ERROR_HPP

#include <stdexcept>
#include <string>

namespace truncmap {

/// Base for all library errors. The CLI maps the three families below
/// onto distinct exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters or configuration (bad depth, bad activity fraction, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent input data (flow CSV, prefix table, labels).
class DataError : public Error {
 public:
  using Error::Error;
};

/// A well-formed input on which detection or scoring cannot be carried out.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public EvaluationError {
 public:
  using EvaluationError::EvaluationError;
};

class DegenerateSeriesError : public EvaluationError {
 public:
  using EvaluationError::EvaluationError;
};

}  // namespace truncmap

#endif  // TRUNCMAP_ERROR_HPP
