#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pjlab {

enum class ErrorCode {
    PartitionAxiomViolation,
    UnknownColor,
    WindowMismatch,
    InvalidCandidate,
    InvalidDualWitness,
    TooFewFunctions,
    InsufficientLevels,
    NotAColor,
    RowZero,
    WindowTooSmall,
    TooShort,
    TooManyFailures,
    HypothesisViolated,
    Overflow,
    WindowExhausted,
    BadInput,
};

std::string_view to_string(ErrorCode c);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace pjlab
