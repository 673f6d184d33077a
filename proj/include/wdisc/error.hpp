#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wdisc {

enum class ErrorKind {
    // shape / input errors
    NonSquare,
    NotSymmetric,
    DimMismatch,
    EmptyClass,
    EmptyInput,
    ZeroVector,
    KTooLarge,
    NonFinite,
    // file errors
    BadMagic,
    VersionUnsupported,
    TruncatedPayload,
    IoFailure,
    BadManifest,
    BadValue,
    // configuration errors
    BadArgument,
    // numerical failures
    NotConverged,
    NotPSD,
    DegenerateModel,
};

std::string_view to_string(ErrorKind kind);

/// Category used by the CLI to pick an exit code.
enum class ErrorCategory { Usage, Data, Numerical };

ErrorCategory category(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace wdisc
