#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace ptspin {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Shapes do not match (non-square operator, wrong block size, ...).
class DimensionError : public Error {
  public:
    using Error::Error;
};

/// Argument outside the mathematical domain of an operation (n = 0, N < 2, ...).
class DomainError : public Error {
  public:
    using Error::Error;
};

class IndexError : public Error {
  public:
    using Error::Error;
};

/// A physical parameter violates the constraints of its family.
class ParameterError : public Error {
  public:
    using Error::Error;
};

/// A required inverse does not exist to working precision.
/// `role()` names the factor that failed, e.g. "C - ik12 D".
class SingularityError : public Error {
  public:
    SingularityError(std::string role, const std::string& detail)
        : Error("singular " + role + ": " + detail), role_(std::move(role)) {}

    const std::string& role() const noexcept { return role_; }

  private:
    std::string role_;
};

class NumericalError : public Error {
  public:
    using Error::Error;
};

/// No admissible object satisfies the requested conditions.
/// `failed_condition()` is "parity" or "eigenvalue".
class ExistenceError : public Error {
  public:
    ExistenceError(std::string condition, const std::string& detail)
        : Error(detail), condition_(std::move(condition)) {}

    const std::string& failed_condition() const noexcept { return condition_; }

  private:
    std::string condition_;
};

/// The wavefunction was requested exactly on a coincidence plane.
class BoundaryPointError : public Error {
  public:
    using Error::Error;
};

/// Malformed input document.
class ParseError : public Error {
  public:
    using Error::Error;
};

} // namespace ptspin
