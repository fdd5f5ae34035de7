#include "exnrule/error.hpp"

namespace exn {

std::string_view error_name(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::MissingValue: return "MissingValue";
    case ErrorCode::NonBinaryLabel: return "NonBinaryLabel";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::DegenerateSplit: return "DegenerateSplit";
    case ErrorCode::InvalidSubsetSize: return "InvalidSubsetSize";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyPool: return "EmptyPool";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::SingleClassTraining: return "SingleClassTraining";
    case ErrorCode::ChainExhausted: return "ChainExhausted";
    case ErrorCode::DegenerateFolds: return "DegenerateFolds";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ProbOutOfRange: return "ProbOutOfRange";
    case ErrorCode::UnknownMetric: return "UnknownMetric";
    case ErrorCode::UnknownScenario: return "UnknownScenario";
    }
    return "UnknownError";
}

} // namespace exn
