#pragma once

#include <stdexcept>
#include <string>

namespace riclab {

enum class ErrorKind {
  InvalidInput,       // non-finite entries, malformed arguments
  Domain,             // parameter outside the operation's domain (e.g. p < 1)
  Degenerate,         // rank-deficient input where full rank is required
  NotAPovm,           // frame fails the column-orthonormality check
  InvalidGram,        // Gram matrix is not a rank-d projector
  SingularBasis,      // post-measurement states linearly dependent
  NotInvertible,      // Born matrix inverse does not exist
  NotInformationallyComplete,
  OutOfRange,         // parametric bias outside (0, 3/4)
  Singularity,        // closed-form pole
  DimensionMismatch,
  Unsupported,
  Infeasible,         // optimizer found no feasible point
  FitError,
  Parse,
  Io,
};

const char* to_string(ErrorKind kind) noexcept;

/// Exception carrying a machine-readable kind; the CLI maps kinds to exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised by frame_to_device when ||F^T F - I||_2 exceeds tolerance.
class NotAPovmError : public Error {
 public:
  NotAPovmError(double residual, const std::string& what)
      : Error(ErrorKind::NotAPovm, what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace riclab
