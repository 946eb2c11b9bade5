#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "w3j/geometry.hpp"

namespace w3j {

using cplx = std::complex<double>;

// One spin realized as a pair of oscillator amplitudes.
struct Spinor {
    cplx z1, z2;
};

// 2x2 complex matrix [[a, b], [c, d]].
struct Mat2 {
    cplx a, b, c, d;

    Spinor operator*(const Spinor& s) const {
        return {a * s.z1 + b * s.z2, c * s.z1 + d * s.z2};
    }
    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat2 dagger() const {
        return {std::conj(a), std::conj(c), std::conj(b), std::conj(d)};
    }
    cplx det() const { return a * d - b * c; }
};

struct SpinorConfig {
    std::array<Spinor, 3> z;
};

// J = (1/2) z^dag sigma z: J_x = Re(conj(z1) z2), J_y = Im(conj(z1) z2),
// J_z = (|z1|^2 - |z2|^2) / 2.
Vec3 spin_vector(const Spinor& z);

// I = (|z1|^2 + |z2|^2) / 2 = |J|.
double oscillator_energy(const Spinor& z);

// All three spin vectors plus their lengths.
VecConfig project(const SpinorConfig& c);
ContourTriple project_lengths(const SpinorConfig& c);

// u(n, theta) = cos(theta/2) - i sin(theta/2) n.sigma. Throws BadAxis unless
// |n| = 1 to within 1e-8 (the axis is renormalized before use).
Mat2 su2_axis_angle(const Vec3& axis, double theta);

using Mat3 = std::array<std::array<double, 3>, 3>;

// R_ij = (1/2) tr(u^dag sigma_i u sigma_j), the rotation with
// spin_vector(u z) = R spin_vector(z).
Mat3 su2_to_so3(const Mat2& u);

// Base point of the jm manifold: z_r = (sqrt(j_r + m_r), sqrt(j_r - m_r)),
// so every spin lies in the xz plane with J_rz = m_r.
SpinorConfig jm_reference(const ContourTriple& j, const MagneticTriple& m);

// Spinors projecting exactly onto reference_config(j).
SpinorConfig wigner_reference(const ContourTriple& j);

// Spinors over the rotated configuration: u(y, beta) u(z, gamma) applied to
// wigner_reference. Projects exactly onto rotated_config(j, m, branch).
SpinorConfig intersection_spinors(const ContourTriple& j, const MagneticTriple& m,
                                  Branch branch = Branch::Principal);

// Action of the intersection point through principal arguments:
//   S = sum_r [ j_r arg(conj(z_r1) conj(z_r2)) + m_r arg(conj(z_r1) z_r2) ]
// with arg taken in [-pi, pi). Flips sign under Principal -> Secondary.
double action_by_arg(const ContourTriple& j, const MagneticTriple& m,
                     Branch branch = Branch::Principal);

// One leg of a piecewise flow path, parametrized by t in [0, angle].
struct FlowLeg {
    enum class Kind {
        OscillatorPhase,  // z_{site,mode} -> e^{-it/2} z_{site,mode}
        SpinorPhase,      // z_site       -> e^{-it/2} z_site
        GlobalPhase,      // z_r          -> e^{-it/2} z_r  for all r
        ZRotation,        // z_site       -> diag(e^{-it/2}, e^{+it/2}) z_site
        RigidRotation,    // z_r          -> u(axis, t) z_r for all r
    };

    Kind kind;
    int site = 0;            // 0-based r, used by the per-spinor kinds
    int mode = 0;            // 0-based mu, used by OscillatorPhase
    Vec3 axis{0, 0, 1};      // used by RigidRotation
    double angle = 0;
};

// State at parameter t along one leg.
SpinorConfig flow_state(const SpinorConfig& start, const FlowLeg& leg, double t);

// Action integral S = Im integral sum_{r,mu} z_rmu d(conj(z_rmu)) along the
// concatenated legs, by the trapezoid rule with steps_per_leg panels per leg.
// The integrands reduce to conserved quantities (I_rmu, I_r, J_rz, n.J), so
// the quadrature is exact up to roundoff; the sampling is kept anyway as an
// independent check of the flow itself. Throws UnknownFlow on a bad kind.
double flow_action_integral(const SpinorConfig& start, std::span<const FlowLeg> legs,
                            int steps_per_leg = 10000);

} // namespace w3j
