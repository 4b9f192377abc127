#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace boldline {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Value outside the scale or domain an operation accepts.
class RangeError : public Error {
 public:
  RangeError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class DimensionMismatch : public ParseError {
 public:
  using ParseError::ParseError;
};

class MissingAnchorWords : public Error {
 public:
  using Error::Error;
};

class OverlapError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class DegenerateTable : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace boldline
