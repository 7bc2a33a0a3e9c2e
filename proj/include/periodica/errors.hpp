#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace periodica {

// Root of every numerical or configuration failure raised by the library.
// The CLI maps UsageError to exit code 2 and everything else to 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class PrecisionError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

class DegenerateError : public Error {
 public:
  using Error::Error;
};

class OrderSearchError : public Error {
 public:
  using Error::Error;
};

class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, std::uint64_t step)
      : Error(what + " (step " + std::to_string(step) + ")"), step_(step) {}

  std::uint64_t step() const noexcept { return step_; }

 private:
  std::uint64_t step_;
};

/// Raised when a period is not accurate enough for the requested horizon.
/// Carries the quotient that would have been used so callers can report it.
class InadmissibleError : public Error {
 public:
  InadmissibleError(const std::string& what, int required_digits,
                    std::string quotient)
      : Error(what),
        required_digits_(required_digits),
        quotient_(std::move(quotient)) {}

  int required_digits() const noexcept { return required_digits_; }
  const std::string& quotient() const noexcept { return quotient_; }

 private:
  int required_digits_;
  std::string quotient_;
};

}  // namespace periodica
