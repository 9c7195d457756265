#pragma once

#include <stdexcept>
#include <string>

namespace scanplan {

// One code per failure class named in the module contracts. The C API maps
// these onto sp_status values; the CLI maps them onto exit codes.
enum class ErrorCode {
    InvalidArgument,
    EmptyMesh,
    EmptyCloud,
    EmptyInput,
    EmptyPlan,
    TooFewPoints,
    GridTooLarge,
    AllRemoved,
    NoGroundFound,
    MissingPrior,
    NoProgress,
    Infeasible,
    TooLarge,
    UnknownStart,
    ParseError,
    UnsupportedFeature,
    SchemaError,
    IoError,
    Internal,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

} // namespace scanplan
