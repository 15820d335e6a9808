#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace expsys {

/// Base of every error raised by the library. `kind()` is a stable,
/// machine-readable tag used by the CLI for its one-line diagnostics.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept = 0;
};

/// Input lies outside the element space of the level it was given to.
class domain_error : public error {
 public:
  using error::error;
  const char* kind() const noexcept override { return "domain-error"; }
};

/// A certified (interval) computation could not decide a floor, a sign or
/// a comparison at the available precision.
class precision_exhausted : public error {
 public:
  using error::error;
  const char* kind() const noexcept override { return "precision-exhausted"; }
};

/// A truncated power series does not carry enough coefficients to decide
/// the requested quantity.
class truncation_inconclusive : public error {
 public:
  using error::error;
  const char* kind() const noexcept override { return "truncation-inconclusive"; }
};

class quadrature_failure : public error {
 public:
  using error::error;
  const char* kind() const noexcept override { return "quadrature-failure"; }
};

class singularity_on_path : public error {
 public:
  using error::error;
  const char* kind() const noexcept override { return "singularity-on-path"; }
};

/// Expression text could not be parsed; `position()` is a 0-based offset.
class parse_error : public error {
 public:
  parse_error(const std::string& message, std::size_t position)
      : error(message + " at position " + std::to_string(position)), position_(position) {}
  const char* kind() const noexcept override { return "parse-error"; }
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// A syntactically valid expression that has no meaning in the requested
/// element context (e.g. `sin` on a certified scalar).
class unsupported_in_context : public error {
 public:
  using error::error;
  const char* kind() const noexcept override { return "unsupported-in-context"; }
};

}  // namespace expsys
