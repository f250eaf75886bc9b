#pragma once

#include <stdexcept>
#include <string>

namespace mfgnet {

enum class ErrorCode {
    Parse,
    Validation,
    CycleDetected,
    Unreachable,
    BadEdge,
    PathLimit,
    EdgeNotOnPath,
    OutOfRange,
    SimplexViolation,
    DegenerateSimplex,
    MassBoundExceeded,
    ShapeMismatch,
    Io,
};

const char* to_string(ErrorCode code) noexcept;

/// Library exception. Every failure raised by the core carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace mfgnet
