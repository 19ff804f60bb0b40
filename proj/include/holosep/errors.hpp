#pragma once

#include <stdexcept>
#include <string>

namespace holosep {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates a documented precondition on shape or structure
/// (non-square, non-Hermitian, non-unitary, dimension mismatch).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Scenario or report text does not conform to its schema.  `path` names the
/// offending field, e.g. `terms[0].matrix.im`.
class ParseError : public Error {
 public:
  ParseError(std::string path, const std::string& message)
      : Error(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class SingularityError : public Error {
 public:
  using Error::Error;
};

class RankError : public Error {
 public:
  using Error::Error;
};

/// An operation was called on a trajectory that does not satisfy its
/// physical precondition (e.g. a non-cyclic evolution where a cyclic one is
/// required).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Gate design rejected (zero winding, degenerate spectrum).
class DesignError : public Error {
 public:
  using Error::Error;
};

/// The (N, m) pair gives an amplitude |a1|^2 outside the open interval (0, 1).
class InfeasibleDesignError : public DesignError {
 public:
  InfeasibleDesignError(int winding, int branch, double amplitude_sq, const std::string& message)
      : DesignError(message), winding_(winding), branch_(branch), amplitude_sq_(amplitude_sq) {}
  int winding() const noexcept { return winding_; }
  int branch() const noexcept { return branch_; }
  double amplitude_sq() const noexcept { return amplitude_sq_; }

 private:
  int winding_;
  int branch_;
  double amplitude_sq_;
};

class TrackingError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values or loss of unitarity beyond repair.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace holosep
