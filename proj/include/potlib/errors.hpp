#pragma once

#include <stdexcept>
#include <string>

namespace potlib {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain where an operation is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature could not meet its tolerance.
class QuadratureError : public Error {
 public:
  using Error::Error;
};

/// A Green's kernel was requested on a parabolic model (the defining integral diverges).
class ParabolicError : public Error {
 public:
  using Error::Error;
};

/// Classification verdicts violate a known implication; always an engine bug.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// Kernel evaluated at its pole.
class PoleError : public Error {
 public:
  using Error::Error;
};

class OdeError : public Error {
 public:
  using Error::Error;
};

class ShootingError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration input; carries the position of the first offending token.
class ConfigParseError : public ConfigError {
 public:
  ConfigParseError(const std::string& what, int line, int column, std::string key = {})
      : ConfigError(format(what, line, column)), line_(line), column_(column), key_(std::move(key)) {}

  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& key() const { return key_; }

 private:
  static std::string format(const std::string& what, int line, int column) {
    if (line <= 0) return what;
    return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what;
  }

  int line_;
  int column_;
  std::string key_;
};

}  // namespace potlib
