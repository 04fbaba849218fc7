#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace plfan {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on the shape or content of an input was violated.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A configured size cap (dimension, generator count) was exceeded.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// An enumeration or iteration budget ran out before the computation finished.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class EmptyPolyhedron : public Error {
 public:
  using Error::Error;
};

/// The queried vector has no nonnegative representation in the generators.
class NotInCone : public Error {
 public:
  using Error::Error;
};

/// A cone (or the normal cones of a polyhedron) contains a line. `line()` is a
/// nonzero vector v with both v and -v in the cone.
class NotPointed : public Error {
 public:
  NotPointed(const std::string& what, std::vector<mpq_class> line)
      : Error(what), line_(std::move(line)) {}
  const std::vector<mpq_class>& line() const { return line_; }

 private:
  std::vector<mpq_class> line_;
};

}  // namespace plfan
