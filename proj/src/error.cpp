#include "fstein/error.hpp"

namespace fstein {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::domain: return "domain";
    case ErrorCode::pole: return "pole";
    case ErrorCode::divergent: return "divergent";
    case ErrorCode::invalid_parameter: return "invalid_parameter";
    case ErrorCode::unknown_distribution: return "unknown_distribution";
    case ErrorCode::precondition: return "precondition";
    case ErrorCode::nonexistent_mean: return "nonexistent_mean";
    case ErrorCode::inversion: return "inversion";
    case ErrorCode::accuracy: return "accuracy";
    case ErrorCode::evaluation: return "evaluation";
    case ErrorCode::validation: return "validation";
    case ErrorCode::io: return "io";
  }
  return "unknown";
}

}  // namespace fstein
