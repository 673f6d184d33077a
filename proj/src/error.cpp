#include "wdisc/error.hpp"

namespace wdisc {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NonSquare: return "NonSquare";
        case ErrorKind::NotSymmetric: return "NotSymmetric";
        case ErrorKind::DimMismatch: return "DimMismatch";
        case ErrorKind::EmptyClass: return "EmptyClass";
        case ErrorKind::EmptyInput: return "EmptyInput";
        case ErrorKind::ZeroVector: return "ZeroVector";
        case ErrorKind::KTooLarge: return "KTooLarge";
        case ErrorKind::NonFinite: return "NonFinite";
        case ErrorKind::BadMagic: return "BadMagic";
        case ErrorKind::VersionUnsupported: return "VersionUnsupported";
        case ErrorKind::TruncatedPayload: return "TruncatedPayload";
        case ErrorKind::IoFailure: return "IoFailure";
        case ErrorKind::BadManifest: return "BadManifest";
        case ErrorKind::BadValue: return "BadValue";
        case ErrorKind::BadArgument: return "BadArgument";
        case ErrorKind::NotConverged: return "NotConverged";
        case ErrorKind::NotPSD: return "NotPSD";
        case ErrorKind::DegenerateModel: return "DegenerateModel";
    }
    return "UnknownError";
}

ErrorCategory category(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::BadArgument:
            return ErrorCategory::Usage;
        case ErrorKind::NotConverged:
        case ErrorKind::NotPSD:
        case ErrorKind::DegenerateModel:
            return ErrorCategory::Numerical;
        default:
            return ErrorCategory::Data;
    }
}

}  // namespace wdisc
