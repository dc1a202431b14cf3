#include "maas/error.hpp"

namespace maas {

const char* to_string(ErrorClass c) {
  switch (c) {
    case ErrorClass::kInput:
      return "input_error";
    case ErrorClass::kInfeasibleDemand:
      return "infeasible_demand";
    case ErrorClass::kEmptyCore:
      return "empty_core";
    case ErrorClass::kResourceLimit:
      return "resource_limit";
    case ErrorClass::kNumerical:
      return "numerical_error";
    case ErrorClass::kPrecondition:
      return "precondition_violated";
    case ErrorClass::kInternal:
      return "internal_error";
  }
  return "unknown";
}

}  // namespace maas
