#pragma once

#include <stdexcept>
#include <string>

namespace w3j {

// Base class for all domain errors thrown by this library. Callers that do
// not care about the precise failure mode can catch this one type.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Triangle inequality violated or degenerate (zero area).
struct TriangleViolation : Error { using Error::Error; };

// m1 + m2 + m3 != 0 where a closed configuration is required.
struct MSumViolation : Error { using Error::Error; };

// An argument is outside its admissible range (negative j, |m| > j,
// m off the lattice of j, malformed half-integer).
struct RangeViolation : Error { using Error::Error; };

// The m2 range of a requested recursion row is empty.
struct EmptyRow : Error { using Error::Error; };

// m3 = +-j3: the third vector is pinned to the z axis and the azimuth
// gamma is undefined.
struct DegenerateBeta : Error { using Error::Error; };

// A geometric construction was requested outside the classically allowed
// region (|cos gamma| > 1, or on/beyond the caustic).
struct NotAllowed : Error { using Error::Error; };

// A perpendicular component j_r^2 - m_r^2 vanishes where a formula
// divides by it.
struct DegeneratePerp : Error { using Error::Error; };

// Rotation axis is not a unit vector.
struct BadAxis : Error { using Error::Error; };

// A contour specification is internally inconsistent (wrong manifold /
// contour pairing, site index out of range, base point off the manifold).
struct BadSpec : Error { using Error::Error; };

// A base point where the winding determinant vanishes somewhere on the
// requested contour, so the Maslov index is undefined.
struct DegenerateBasePoint : Error { using Error::Error; };

// A flow leg of unknown kind reached the integrator.
struct UnknownFlow : Error { using Error::Error; };

// Prefactor calibration found no sign rule meeting the agreement threshold.
struct NoConsistentRule : Error { using Error::Error; };

} // namespace w3j
