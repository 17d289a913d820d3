#pragma once

#include <stdexcept>
#include <string>

namespace gcf {

/// Base class for all failures raised by this library.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A discrete principal radius dropped to (or below) the degeneracy tolerance.
struct NonConvexError : Error {
  using Error::Error;
};

/// Pole limit of a rotationally symmetric body disagrees with the
/// extrapolation from neighboring nodes.
struct PoleSingularError : Error {
  using Error::Error;
};

/// u touches zero where a positive power of u is required.
struct OriginOnBoundaryError : Error {
  using Error::Error;
};

/// A time step produced a non-convex iterate; the caller should retry
/// with a smaller dt.
struct StepRejectedError : Error {
  using Error::Error;
};

/// Adaptive stepping drove dt below the underflow guard.
struct StalledError : Error {
  using Error::Error;
};

struct InsufficientSnapshotsError : Error {
  using Error::Error;
};

struct RegimeViolationError : Error {
  using Error::Error;
};

struct DegenerateWindowError : Error {
  using Error::Error;
};

/// One of the moduli entering a fractional power went non-positive;
/// the iterate escaped the contraction region.
struct ModulusNonpositiveError : Error {
  using Error::Error;
};

/// Interval shrinking bottomed out without certified contraction.
struct NoContractionError : Error {
  using Error::Error;
};

struct ConvexityLostError : Error {
  using Error::Error;
};

struct BadRangeError : Error {
  using Error::Error;
};

struct InsufficientDecadesError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

struct PipelineError : Error {
  using Error::Error;
};

}  // namespace gcf
