#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace excitran {

/// Base class for all library errors. `kind()` is a stable machine-readable
/// tag used by the CLI when it reports failures as JSON.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual const char* kind() const noexcept { return "error"; }
};

/// Input could not be parsed. Carries the offending line (1-based, 0 if
/// unknown) and a JSON-pointer-like field path when available.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0, std::string field = {})
      : Error(what), line_(line), field_(std::move(field)) {}
  const char* kind() const noexcept override { return "parse_error"; }
  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

/// A value parsed fine but violates a documented invariant.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what, std::string field = {})
      : Error(what), field_(std::move(field)) {}
  const char* kind() const noexcept override { return "validation_error"; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class DimensionError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "dimension_error"; }
};

/// The generator has a (numerically) zero eigenvalue, so no resolvent exists.
class NotInvertibleError : public Error {
 public:
  NotInvertibleError(const std::string& what, double rcond) : Error(what), rcond_(rcond) {}
  const char* kind() const noexcept override { return "not_invertible"; }
  double rcond() const noexcept { return rcond_; }

 private:
  double rcond_;
};

/// Adaptive integration could not meet its tolerance.
class StepUnderflowError : public Error {
 public:
  StepUnderflowError(const std::string& what, double time, double smallest_step)
      : Error(what), time_(time), smallest_step_(smallest_step) {}
  const char* kind() const noexcept override { return "step_underflow"; }
  double time() const noexcept { return time_; }
  double smallest_step() const noexcept { return smallest_step_; }

 private:
  double time_;
  double smallest_step_;
};

/// Quadrature reached its horizon cap with probability still in the system.
class HorizonError : public Error {
 public:
  HorizonError(const std::string& what, double horizon, double residual_trace)
      : Error(what), horizon_(horizon), residual_trace_(residual_trace) {}
  const char* kind() const noexcept override { return "horizon_exceeded"; }
  double horizon() const noexcept { return horizon_; }
  double residual_trace() const noexcept { return residual_trace_; }

 private:
  double horizon_;
  double residual_trace_;
};

}  // namespace excitran
