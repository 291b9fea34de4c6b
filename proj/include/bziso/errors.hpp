#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace bziso {

/// Argument outside the domain of an operation (t outside [0,1], n <= 0, r <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Requested work exceeds a configured cap (iteration count, vertex budget).
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A polyline edge has (numerically) zero length where an angle is needed.
class DegenerateEdgeError : public std::runtime_error {
 public:
  DegenerateEdgeError(const std::string& what, std::size_t edge)
      : std::runtime_error(what), edge_(edge) {}
  std::size_t edge() const { return edge_; }

 private:
  std::size_t edge_;
};

/// The derivative could not be certified nonzero.
class RegularityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bound ingredients contradict each other (e.g. sigma - B'_dist <= 0).
class InconsistentConstantsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The spine curve was found to self-intersect.
class NotSimpleError : public std::runtime_error {
 public:
  NotSimpleError(const std::string& what, double t, double s)
      : std::runtime_error(what), t_(t), s_(s) {}
  double t() const { return t_; }
  double s() const { return s_; }

 private:
  double t_;
  double s_;
};

/// Malformed curve file. Line and column are 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t line, std::size_t column)
      : std::runtime_error("line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// A curve violates one of the modelling assumptions (shared junction, C1, regular).
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string assumption, const std::string& detail)
      : std::runtime_error(assumption + ": " + detail), assumption_(std::move(assumption)) {}
  const std::string& assumption() const { return assumption_; }

 private:
  std::string assumption_;
};

}  // namespace bziso
