#pragma once

#include <stdexcept>
#include <string>

namespace tact {

// Base for every error raised by the library. Callers that only care about
// "did the computation succeed" catch this.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Input outside the domain where a formula or optimizer is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Request exceeds a configured resource cap (e.g. dense 4^N storage).
class ResourceError : public Error {
 public:
  using Error::Error;
};

// Time stepping could not satisfy the channel invariants.
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double worst_residual)
      : Error(what), worst_residual_(worst_residual) {}
  double worst_residual() const noexcept { return worst_residual_; }

 private:
  double worst_residual_;
};

// A quantity that must be real or finite came out otherwise.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// The requested quantity is undefined at this point (zero mean spin,
// divergent field shift at J = 0, ...).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

}  // namespace tact
