#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace drip {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed document (wrong JSON shape, unknown statement op, ...).
class SchemaError : public Error {
  public:
    using Error::Error;
};

/// Well-formed document that violates a model invariant. `entity()` names the offender.
class ValidationError : public Error {
  public:
    ValidationError(const std::string& message, std::string entity)
        : Error(message), entity_(std::move(entity)) {}
    [[nodiscard]] const std::string& entity() const noexcept { return entity_; }

  private:
    std::string entity_;
};

class SpecError : public Error {
  public:
    using Error::Error;
};

class NotDeterministic : public Error {
  public:
    using Error::Error;
};

class AlphabetMismatch : public Error {
  public:
    using Error::Error;
};

class NoReleaseCallback : public Error {
  public:
    using Error::Error;
};

class StaleFix : public Error {
  public:
    using Error::Error;
};

class BudgetExceeded : public Error {
  public:
    using Error::Error;
};

} // namespace drip
