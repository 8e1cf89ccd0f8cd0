#pragma once

#include <stdexcept>
#include <string>

namespace curveflow {

/// Base class for all solver errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateSegment : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct BadShapeParams   : Error { using Error::Error; };

struct NonpositiveGamma   : Error { using Error::Error; };
struct NotPositiveDefinite : Error { using Error::Error; };

struct SingularMatrix    : Error { using Error::Error; };
struct ResidualTooLarge  : Error { using Error::Error; };
struct FixedPointDiverged : Error { using Error::Error; };
struct BadSubstrate      : Error { using Error::Error; };

struct NonpositiveEnergy : Error { using Error::Error; };
struct EnergyIncreased   : Error { using Error::Error; };
struct OrientationHazard : Error { using Error::Error; };

struct NoRoot            : Error { using Error::Error; };
struct SelfIntersecting  : Error { using Error::Error; };
struct ZeroInitialArea   : Error { using Error::Error; };
struct MissingSnapshots  : Error { using Error::Error; };

/// Configuration / CLI input problems (exit code 2).
struct ValidationError : Error { using Error::Error; };

} // namespace curveflow
