#pragma once

#include <stdexcept>
#include <string>

namespace cbn {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Syntax or semantic error in a text input, with 1-based source location.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column)
      : Error("line " + std::to_string(line) + ", col " + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Conditioning event has probability zero under the queried network.
class ZeroProbabilityEvidence : public Error {
 public:
  using Error::Error;
};

}  // namespace cbn
