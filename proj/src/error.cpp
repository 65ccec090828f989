#include "gaplab/error.hpp"

namespace gaplab {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "invalid argument";
        case ErrorKind::DimensionMismatch: return "dimension mismatch";
        case ErrorKind::Aliasing: return "aliasing";
        case ErrorKind::Resolution: return "insufficient resolution";
        case ErrorKind::InsufficientBand: return "insufficient band";
        case ErrorKind::ZeroFunction: return "zero function";
        case ErrorKind::UndefinedRatio: return "undefined ratio";
        case ErrorKind::IllConditionedWinding: return "ill-conditioned winding";
        case ErrorKind::SolverFailure: return "solver failure";
        case ErrorKind::Geometry: return "geometry error";
        case ErrorKind::UnsupportedKind: return "unsupported domain kind";
        case ErrorKind::Io: return "io error";
    }
    return "unknown error";
}

}  // namespace gaplab
