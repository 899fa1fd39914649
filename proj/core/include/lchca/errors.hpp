#ifndef LCHCA_ERRORS_HPP
#define LCHCA_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lchca {

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid input: precondition violation, mismatched fields, bad dimensions.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Input is structurally valid but exceeds the configured desk-scale limits
/// (factorization bounds, enumeration caps, search budgets).
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// The operation is only defined for a class of inputs this one is not in
/// (e.g. matrix order with a reducible characteristic polynomial).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Malformed serialized text (polynomials, matrices, CA specs, challenges).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Exact linear solve hit a rank-deficient matrix; carries the achieved rank.
class SingularMatrixError : public Error {
 public:
  SingularMatrixError(const std::string& msg, std::size_t rank)
      : Error(msg), rank_(rank) {}

  std::size_t rank() const noexcept { return rank_; }

 private:
  std::size_t rank_;
};

}  // namespace lchca

#endif  // LCHCA_ERRORS_HPP
