#include "pjlab/error.hpp"

namespace pjlab {

std::string_view to_string(ErrorCode c) {
    switch (c) {
    case ErrorCode::PartitionAxiomViolation: return "PartitionAxiomViolation";
    case ErrorCode::UnknownColor: return "UnknownColor";
    case ErrorCode::WindowMismatch: return "WindowMismatch";
    case ErrorCode::InvalidCandidate: return "InvalidCandidate";
    case ErrorCode::InvalidDualWitness: return "InvalidDualWitness";
    case ErrorCode::TooFewFunctions: return "TooFewFunctions";
    case ErrorCode::InsufficientLevels: return "InsufficientLevels";
    case ErrorCode::NotAColor: return "NotAColor";
    case ErrorCode::RowZero: return "RowZero";
    case ErrorCode::WindowTooSmall: return "WindowTooSmall";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::TooManyFailures: return "TooManyFailures";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::WindowExhausted: return "WindowExhausted";
    case ErrorCode::BadInput: return "BadInput";
    }
    return "Unknown";
}

}  // namespace pjlab
