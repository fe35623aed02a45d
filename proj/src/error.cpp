#include "gm/error.hpp"

namespace gm {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::DisconnectedGraph: return "disconnected graph";
        case ErrorCode::ZeroDegreeNode: return "zero-degree node";
        case ErrorCode::SeriesDivergence: return "series divergence";
        case ErrorCode::SingularMatrix: return "singular matrix";
        case ErrorCode::SpectralRadiusExceeded: return "spectral radius exceeded";
        case ErrorCode::NonFiniteKernel: return "non-finite kernel";
        case ErrorCode::LengthMismatch: return "length mismatch";
        case ErrorCode::NoEdges: return "no edges";
        case ErrorCode::GenerationFailed: return "generation failed";
        case ErrorCode::MissingMeasure: return "missing measure";
        case ErrorCode::DegenerateClasses: return "degenerate classes";
        case ErrorCode::EmptyDataset: return "empty dataset";
        case ErrorCode::InvalidArgument: return "invalid argument";
        case ErrorCode::IoError: return "io error";
    }
    return "unknown error";
}

}  // namespace gm
