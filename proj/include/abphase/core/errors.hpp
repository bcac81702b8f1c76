#pragma once

#include <stdexcept>
#include <string>

namespace abphase {

/// Argument outside the mathematical domain of a function (e.g. K(k) at k = 1).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Violated precondition that is not geometric: open path where a loop is
/// required, mismatched endpoints, stacked gauges.
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Evaluation point, path or charge placed where a field or kernel is singular
/// or where the requested integral is undefined.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The 1/|x - x'| kernel is evaluated on its own source. Offset the point or
/// subdivide around the closest approach.
class SingularIntegrandError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

/// Closed-form approximation requested outside its validity regime.
class RegimeError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

/// Scenario document rejected by the strict schema. `where` is a JSON pointer
/// or a byte offset.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

}  // namespace abphase
