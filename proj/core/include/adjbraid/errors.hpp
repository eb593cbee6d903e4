#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace adjbraid {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GroundMismatch : public Error {
 public:
  using Error::Error;
};

/// A partition was required to be finer than another and is not.
class NotFiner : public Error {
 public:
  using Error::Error;
};

/// A subset reduces to the empty set modulo the support partition.
class EmptyModP : public Error {
 public:
  using Error::Error;
};

class OnHyperplane : public Error {
 public:
  explicit OnHyperplane(std::string subset)
      : Error("point lies on the hyperplane lambda_" + subset + " = 0"),
        subset_(std::move(subset)) {}
  const std::string& subset() const { return subset_; }

 private:
  std::string subset_;
};

class NotInFlat : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t pos)
      : Error(what + " at position " + std::to_string(pos)), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

class AmbiguousLayering : public Error {
 public:
  using Error::Error;
};

/// Source/target partitions of composed maps do not line up.
class BoundaryMismatch : public Error {
 public:
  using Error::Error;
};

class SupportMismatch : public Error {
 public:
  using Error::Error;
};

class NotSemisimple : public Error {
 public:
  using Error::Error;
};

class ArityMismatch : public Error {
 public:
  using Error::Error;
};

class OutOfRange : public Error {
 public:
  using Error::Error;
};

/// An internal consistency check failed. Indicates a bug, not bad input.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace adjbraid
