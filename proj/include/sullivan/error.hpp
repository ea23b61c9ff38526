#pragma once

#include <stdexcept>
#include <string>

namespace sullivan {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands do not fit together (different algebras, wrong degrees, bad grading).
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// The model violates a standing hypothesis (d^2 != 0, unknown generator, ...).
class InvalidModel : public Error {
 public:
  using Error::Error;
};

/// The requested invariant is outside the regimes this library can decide.
class NotComputable : public Error {
 public:
  using Error::Error;
};

/// A construction whose correctness is a theorem failed its own check.
/// Seeing this means a bug, not bad input.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line, int column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace sullivan
