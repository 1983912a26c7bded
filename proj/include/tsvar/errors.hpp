#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace tsvar {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input rejected by a constructor or a precondition check.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Expression text that does not follow the grammar. `offset()` points just
/// past the offending token.
class ParseError : public Error {
 public:
  ParseError(const std::string& detail, std::size_t offset)
      : Error("syntax error at offset " + std::to_string(offset) + ": " + detail),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Evaluation point of a Lagrangian: (t, composed state, derivative).
struct EvalPoint {
  double t;
  double u;
  double v;
};

/// Arithmetic outside the domain of an operation (log of a non-positive
/// number, division by zero, non-finite result, ...).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(what), detail_(what) {}
  DomainError(const std::string& detail, EvalPoint at)
      : Error(detail + " at (t=" + std::to_string(at.t) + ", u=" + std::to_string(at.u) +
              ", v=" + std::to_string(at.v) + ")"),
        detail_(detail),
        point_(at) {}

  const std::optional<EvalPoint>& point() const noexcept { return point_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string detail_;
  std::optional<EvalPoint> point_;
};

}  // namespace tsvar
