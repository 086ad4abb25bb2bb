#pragma once

#include <stdexcept>
#include <string>

namespace scp {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed JSON; `line()` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Well-formed JSON that violates a documented schema. `field()` is a path
/// such as `modules[3].criticality`.
class SchemaError : public Error {
 public:
  SchemaError(std::string field, const std::string& what)
      : Error(field.empty() ? what : field + ": " + what),
        field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// A structurally invalid netlist or FSM table.
class NetlistError : public Error {
 public:
  using Error::Error;
};

}  // namespace scp
