#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace parabolic {

enum class ErrorKind {
    InvalidGrid,
    UnresolvableCylinder,
    ShapeMismatch,
    NotParabolic,
    NonFinite,
    UnresolvableCube,
    NotValidated,
    LinearSolveFailure,
    TimeRangeError,
    SourceOutOfRange,
    ProbeOutOfRange,
    RangeError,
    NonCausal,
    InvalidConstants,
    AnchorsTooClose,
    WrapViolation,
    EmptyWindow,
    DegenerateFit,
    ConfigError,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries one of the kinds above so the
// CLI can map it onto an exit status.
class LabError : public std::runtime_error {
public:
    LabError(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace parabolic
