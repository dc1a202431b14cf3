#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace maas {

// Machine-readable error classes. The CLI maps each class to an exit code.
enum class ErrorClass {
  kInput,
  kInfeasibleDemand,
  kEmptyCore,
  kResourceLimit,
  kNumerical,
  kPrecondition,
  kInternal,
};

const char* to_string(ErrorClass c);

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, const std::string& what) : std::runtime_error(what), class_(cls) {}
  ErrorClass error_class() const noexcept { return class_; }

 private:
  ErrorClass class_;
};

// Malformed documents, invariant violations, references to missing entities.
class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(ErrorClass::kInput, what) {}
};

// Some OD pairs cannot be routed (no path, or capacities too small).
class InfeasibleDemandError : public Error {
 public:
  InfeasibleDemandError(const std::string& what, std::vector<std::pair<int, int>> ods)
      : Error(ErrorClass::kInfeasibleDemand, what), ods_(std::move(ods)) {}
  const std::vector<std::pair<int, int>>& offending_ods() const noexcept { return ods_; }

 private:
  std::vector<std::pair<int, int>> ods_;
};

// Node cap, time cap, or enumeration cap reached before a proven answer.
class ResourceLimitError : public Error {
 public:
  ResourceLimitError(const std::string& what, std::optional<double> incumbent = std::nullopt,
                     std::optional<double> bound = std::nullopt)
      : Error(ErrorClass::kResourceLimit, what), incumbent_(incumbent), bound_(bound) {}
  std::optional<double> incumbent() const noexcept { return incumbent_; }
  std::optional<double> bound() const noexcept { return bound_; }

 private:
  std::optional<double> incumbent_;
  std::optional<double> bound_;
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(ErrorClass::kNumerical, what) {}
};

class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what) : Error(ErrorClass::kPrecondition, what) {}
};

class InternalError : public Error {
 public:
  explicit InternalError(const std::string& what) : Error(ErrorClass::kInternal, what) {}
};

}  // namespace maas
