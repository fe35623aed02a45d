#pragma once

#include <stdexcept>
#include <string>

namespace gm {

enum class ErrorCode {
    DisconnectedGraph,
    ZeroDegreeNode,
    SeriesDivergence,
    SingularMatrix,
    SpectralRadiusExceeded,
    NonFiniteKernel,
    LengthMismatch,
    NoEdges,
    GenerationFailed,
    MissingMeasure,
    DegenerateClasses,
    EmptyDataset,
    InvalidArgument,
    IoError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace gm
