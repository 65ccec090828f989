#pragma once

#include <stdexcept>
#include <string>

namespace gaplab {

/// Failure categories surfaced by the library.  Every throw site picks the
/// kind that best describes what the caller can do about it.
enum class ErrorKind {
    InvalidArgument,        // malformed input: bad sizes, non-finite values, bad config
    DimensionMismatch,      // two signals/grids that must agree in size do not
    Aliasing,               // requested modes not representable on the sample grid
    Resolution,             // grid too coarse for the requested operation
    InsufficientBand,       // series does not carry enough modes for the request
    ZeroFunction,           // operation undefined for the identically-zero input
    UndefinedRatio,         // ratio-style quantity whose denominator vanishes
    IllConditionedWinding,  // curve passes too close to the origin to count turns
    SolverFailure,          // iterative solver stagnated before reaching tolerance
    Geometry,               // degenerate or invalid geometric data
    UnsupportedKind,        // operation not defined for this domain kind
    Io,                     // file or stream failure
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

}  // namespace gaplab
