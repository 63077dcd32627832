#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace msalg {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A profile, sort, or argument sort does not match what an operation expects.
class SortError : public Error {
 public:
  using Error::Error;
};

/// Table lengths, arities or carrier sizes are inconsistent.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// An element index lies outside its carrier.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// A configured budget (arity, table count, enumeration size) was exceeded.
/// Closures never truncate silently; they throw this instead.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// An operation was called on inputs that violate its documented precondition
/// (a non-pure algebra where purity is required, an invalid diagonal pair, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Malformed algebra file; carries a 1-based line and column.
class ParseError : public Error {
 public:
  enum class Kind { syntax, shape, range };

  ParseError(std::string const& what, std::size_t line, std::size_t column,
             Kind kind = Kind::syntax)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + kind_name(kind) +
              ": " + what),
        line_(line),
        column_(column),
        kind_(kind) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  Kind kind() const noexcept { return kind_; }

 private:
  static char const* kind_name(Kind k) {
    switch (k) {
      case Kind::shape:
        return "shape error";
      case Kind::range:
        return "range error";
      default:
        return "syntax error";
    }
  }

  std::size_t line_;
  std::size_t column_;
  Kind kind_;
};

}  // namespace msalg
