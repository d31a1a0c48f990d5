#include "parabolic/errors.hpp"

namespace parabolic {

std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::InvalidGrid: return "InvalidGrid";
    case ErrorKind::UnresolvableCylinder: return "UnresolvableCylinder";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::NotParabolic: return "NotParabolic";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::UnresolvableCube: return "UnresolvableCube";
    case ErrorKind::NotValidated: return "NotValidated";
    case ErrorKind::LinearSolveFailure: return "LinearSolveFailure";
    case ErrorKind::TimeRangeError: return "TimeRangeError";
    case ErrorKind::SourceOutOfRange: return "SourceOutOfRange";
    case ErrorKind::ProbeOutOfRange: return "ProbeOutOfRange";
    case ErrorKind::RangeError: return "RangeError";
    case ErrorKind::NonCausal: return "NonCausal";
    case ErrorKind::InvalidConstants: return "InvalidConstants";
    case ErrorKind::AnchorsTooClose: return "AnchorsTooClose";
    case ErrorKind::WrapViolation: return "WrapViolation";
    case ErrorKind::EmptyWindow: return "EmptyWindow";
    case ErrorKind::DegenerateFit: return "DegenerateFit";
    case ErrorKind::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

} // namespace parabolic
