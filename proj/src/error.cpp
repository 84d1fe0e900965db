#include "instab/error.hpp"

namespace instab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::UnsupportedClass: return "UnsupportedClass";
    case ErrorCode::IndexUndefined: return "IndexUndefined";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::DegenerateFraction: return "DegenerateFraction";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NoSignChange: return "NoSignChange";
    case ErrorCode::MatchFailure: return "MatchFailure";
    case ErrorCode::NotFound: return "NotFound";
  }
  return "Unknown";
}

}  // namespace instab
