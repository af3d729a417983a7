#pragma once

#include <stdexcept>
#include <string>

namespace euclidqm {

/// Invalid or inconsistent user configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (exit code 3).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical precondition failed, e.g. an operator spectrum outside an
/// expansion interval or a test function leaving positive time (exit code 3).
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Quadrature or iteration did not reach the requested accuracy (exit code 3).
class AccuracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Should not happen for valid inputs; carries diagnostics (exit code 3).
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// File system failure (exit code 4).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace euclidqm
