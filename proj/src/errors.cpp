#include "mfgnet/errors.hpp"

namespace mfgnet {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::Parse: return "ParseError";
        case ErrorCode::Validation: return "ValidationError";
        case ErrorCode::CycleDetected: return "CycleDetected";
        case ErrorCode::Unreachable: return "Unreachable";
        case ErrorCode::BadEdge: return "BadEdge";
        case ErrorCode::PathLimit: return "PathLimit";
        case ErrorCode::EdgeNotOnPath: return "EdgeNotOnPath";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::SimplexViolation: return "SimplexViolation";
        case ErrorCode::DegenerateSimplex: return "DegenerateSimplex";
        case ErrorCode::MassBoundExceeded: return "MassBoundExceeded";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::Io: return "IoError";
    }
    return "UnknownError";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace mfgnet
