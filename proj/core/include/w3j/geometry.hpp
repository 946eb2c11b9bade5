#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "w3j/errors.hpp"
#include "w3j/vec3.hpp"

namespace w3j {

// Classical angular momentum lengths. These are contour values (typically
// quantum labels shifted by one half), kept as plain doubles: the geometric
// layer knows nothing about lattices.
struct ContourTriple { double j1, j2, j3; };
struct MagneticTriple { double m1, m2, m3; };

// Shape of the vector triangle J1 + J2 + J3 = 0 with side lengths j_r.
// eta_r is the angle between the other two sides:
//   cos eta1 = (j1^2 - j2^2 - j3^2) / (2 j2 j3)   and cyclic.
struct TriangleShape {
    double eta1, eta2, eta3;
    double area;  // Heron: (1/4) sqrt((j1+j2+j3)(-j1+j2+j3)(j1-j2+j3)(j1+j2-j3))
};

// Throws TriangleViolation unless the triangle inequality holds strictly
// (degenerate zero-area triples included) with all j_r > 0.
TriangleShape triangle_shape(const ContourTriple& j);

// The closed triangle in its reference position: J3 along +z, J1 and J2 in
// the xz plane with J1 tilted toward +x.
struct VecConfig {
    Vec3 J1, J2, J3;
};

VecConfig reference_config(const ContourTriple& j);

enum class Branch { Principal, Secondary };

// Euler data carrying the reference triangle onto the m-constraints
// J_rz = m_r: first rotate by gamma about z, then by beta about y.
// gamma is empty when |cos_gamma| > 1 (no real solution).
struct Orientation {
    double beta;                 // arccos(m3 / j3), in [0, pi]
    double cos_gamma;            // may fall outside [-1, 1]
    std::optional<double> gamma; // principal branch in [0, pi], negated on Secondary
    Branch branch = Branch::Principal;
};

// Throws RangeViolation when |m_r| > j_r, DegenerateBeta when m3 = +-j3.
Orientation orientation(const ContourTriple& j, const MagneticTriple& m,
                        Branch branch = Branch::Principal);

enum class Region { Allowed, Caustic, Forbidden };

const char* to_string(Region r);

// Half-width of the |cos gamma| = 1 band classified as Caustic.
inline constexpr double default_caustic_band = 1e-9;

// Classically allowed / forbidden / caustic for the constraints J_rz = m_r.
// The degenerate orientation m3 = +-j3 counts as Caustic.
Region classify_region(const ContourTriple& j, const MagneticTriple& m,
                       double caustic_band = default_caustic_band);

// The reference triangle rotated to satisfy J_rz = m_r. Throws NotAllowed
// outside the allowed region (DegenerateBeta/RangeViolation pass through).
VecConfig rotated_config(const ContourTriple& j, const MagneticTriple& m,
                         Branch branch = Branch::Principal,
                         double caustic_band = default_caustic_band);

// Area of the triangle's shadow in the xy plane: (1/2) |z . (J1 x J2)|.
double projected_area(const VecConfig& c);

// Scalar observables on N-site configurations (J_1, ..., J_N) and their
// per-site gradients.
using ScalarField = std::function<double(std::span<const Vec3>)>;
using GradientField = std::function<std::vector<Vec3>(std::span<const Vec3>)>;

// Lie-Poisson bracket {f, g} = sum_r J_r . (grad_r f x grad_r g), the sign
// convention fixed by {J1z, J1x} = J1y. Gradients are central finite
// differences with step 1e-6 * max(1, |component|) unless analytic ones are
// supplied.
double lie_poisson(const ScalarField& f, const ScalarField& g,
                   std::span<const Vec3> point,
                   const GradientField& grad_f = {},
                   const GradientField& grad_g = {});

// {|J2 + J3|^2, |J1 + J2|^2} on a four-site configuration, evaluated in
// closed form: 4 J1 . (J2 x J3).
double tetra_bracket(const std::array<Vec3, 4>& J);

} // namespace w3j
