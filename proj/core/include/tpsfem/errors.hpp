#pragma once

#include <stdexcept>
#include <string>

namespace tpsfem {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A query point lies outside the mesh domain.
class PointOutsideDomain : public Error {
 public:
  using Error::Error;
};

/// An element has (numerically) zero area.
class DegenerateElement : public Error {
 public:
  using Error::Error;
};

/// The sample points lie on a single line, so the fitting problem is singular.
class CollinearSamples : public Error {
 public:
  using Error::Error;
};

/// An iterative solver hit its iteration cap before reaching tolerance.
class NoConvergence : public Error {
 public:
  using Error::Error;
};

/// A dense factorization failed or a matrix was found numerically singular.
class IllConditionedSystem : public Error {
 public:
  using Error::Error;
};

/// A function was evaluated outside its mathematical domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A file could not be opened, read, or parsed.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace tpsfem
