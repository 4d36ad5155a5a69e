#pragma once

#include <stdexcept>
#include <string>

namespace btv {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Document text could not be parsed. Line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(std::string message, int line, int column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        message_(std::move(message)),
        line_(line),
        column_(column) {}

  const std::string& message() const { return message_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  std::string message_;
  int line_;
  int column_;
};

/// Input is syntactically fine but violates a structural rule.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A leaf oracle produced a status outside the leaf's declared domain.
class OracleError : public Error {
 public:
  using Error::Error;
};

/// An encoding reached a state its definitions do not allow.
class EncodingError : public Error {
 public:
  using Error::Error;
};

/// The requested combination is not supported (e.g. blackboard with BTC).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

}  // namespace btv
