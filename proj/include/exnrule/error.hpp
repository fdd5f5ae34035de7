#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace exn {

enum class ErrorCode {
    MissingValue,
    NonBinaryLabel,
    ParseError,
    IoError,
    DegenerateSplit,
    InvalidSubsetSize,
    DimensionMismatch,
    EmptyPool,
    ConfigInvalid,
    SingleClassTraining,
    ChainExhausted,
    DegenerateFolds,
    LengthMismatch,
    ProbOutOfRange,
    UnknownMetric,
    UnknownScenario,
};

std::string_view error_name(ErrorCode code) noexcept;

// Every failure surfaced by the library carries one of the named codes above;
// the CLI prints the name and exits nonzero.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace exn
