#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace afwl {

enum class ErrorKind {
  Config,
  NonLorentzian,
  DegeneratePoint,
  AnnulusOutOfDomain,
  Instability,
  KernelTooLarge,
  DurationTooShort,
  ZeroInitialEnergy,
  Overflow,
  ChecksumMismatch,
  Io,
};

const char* to_string(ErrorKind kind);

/// Base error for the library. `kind()` distinguishes the failure so callers
/// (notably the CLI) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// True for failures of the numerics (as opposed to bad input or I/O).
  bool is_numerical() const noexcept {
    return kind_ == ErrorKind::Instability || kind_ == ErrorKind::Overflow ||
           kind_ == ErrorKind::NonLorentzian;
  }

 private:
  ErrorKind kind_;
};

/// Raised by the time stepper; carries the step at which the run blew up.
class InstabilityError : public Error {
 public:
  InstabilityError(std::int64_t step, double t, double norm)
      : Error(ErrorKind::Instability,
              "field norm " + std::to_string(norm) + " at step " + std::to_string(step) +
                  " (t=" + std::to_string(t) + ")"),
        step_(step),
        t_(t) {}

  std::int64_t step() const noexcept { return step_; }
  double time() const noexcept { return t_; }

 private:
  std::int64_t step_;
  double t_;
};

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) throw Error(kind, what);
}

}  // namespace afwl
