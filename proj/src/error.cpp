#include "rwdir/error.hpp"

namespace rwdir {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidParameter: return "InvalidParameter";
    case ErrorCode::kInvalidSpec: return "InvalidSpec";
    case ErrorCode::kInvalidInput: return "InvalidInput";
    case ErrorCode::kInvalidState: return "InvalidState";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kUnsupportedSpec: return "UnsupportedSpec";
    case ErrorCode::kUnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::kObserverFailure: return "ObserverFailure";
    case ErrorCode::kTailExhausted: return "TailExhausted";
    case ErrorCode::kUnknownExample: return "UnknownExample";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace rwdir
