#include "w3j/schwinger.hpp"

#include <cmath>
#include <numbers>

namespace w3j {

namespace {

constexpr double pi = std::numbers::pi;

// Principal argument mapped onto [-pi, pi): std::arg lands in (-pi, pi] and
// the single point +pi is folded to -pi so the branch cut is unambiguous.
double arg_pm(const cplx& c) {
    double a = std::arg(c);
    if (a >= pi) a -= 2 * pi;
    return a;
}

void check_site(int site) {
    if (site < 0 || site > 2)
        throw BadSpec("flow leg: site index out of range");
}

// Im sum_{r,mu} z_rmu d(conj z_rmu)/dt at the current state; every kind
// reduces to a conserved quantity of its own flow.
double flow_integrand(const SpinorConfig& c, const FlowLeg& leg) {
    switch (leg.kind) {
        case FlowLeg::Kind::OscillatorPhase: {
            check_site(leg.site);
            if (leg.mode < 0 || leg.mode > 1)
                throw BadSpec("flow leg: mode index out of range");
            const cplx& z = (leg.mode == 0) ? c.z[static_cast<std::size_t>(leg.site)].z1
                                            : c.z[static_cast<std::size_t>(leg.site)].z2;
            return 0.5 * std::norm(z);
        }
        case FlowLeg::Kind::SpinorPhase:
            check_site(leg.site);
            return oscillator_energy(c.z[static_cast<std::size_t>(leg.site)]);
        case FlowLeg::Kind::GlobalPhase:
            return oscillator_energy(c.z[0]) + oscillator_energy(c.z[1]) +
                   oscillator_energy(c.z[2]);
        case FlowLeg::Kind::ZRotation:
            check_site(leg.site);
            return spin_vector(c.z[static_cast<std::size_t>(leg.site)]).z;
        case FlowLeg::Kind::RigidRotation: {
            const double n = norm(leg.axis);
            if (std::fabs(n - 1.0) > 1e-8)
                throw BadAxis("flow leg: rotation axis must be a unit vector");
            const Vec3 total = spin_vector(c.z[0]) + spin_vector(c.z[1]) + spin_vector(c.z[2]);
            return dot(leg.axis * (1.0 / n), total);
        }
    }
    throw UnknownFlow("flow leg: unrecognized kind");
}

} // namespace

Vec3 spin_vector(const Spinor& z) {
    const cplx c = std::conj(z.z1) * z.z2;
    return {c.real(), c.imag(), 0.5 * (std::norm(z.z1) - std::norm(z.z2))};
}

double oscillator_energy(const Spinor& z) {
    return 0.5 * (std::norm(z.z1) + std::norm(z.z2));
}

VecConfig project(const SpinorConfig& c) {
    return {spin_vector(c.z[0]), spin_vector(c.z[1]), spin_vector(c.z[2])};
}

ContourTriple project_lengths(const SpinorConfig& c) {
    return {oscillator_energy(c.z[0]), oscillator_energy(c.z[1]), oscillator_energy(c.z[2])};
}

Mat2 su2_axis_angle(const Vec3& axis, double theta) {
    const double n = norm(axis);
    if (std::fabs(n - 1.0) > 1e-8)
        throw BadAxis("su2_axis_angle: axis must be a unit vector");
    const Vec3 u = axis * (1.0 / n);
    const double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
    // cos(theta/2) 1 - i sin(theta/2) n.sigma
    return {cplx(c, -s * u.z), cplx(-s * u.y, -s * u.x),
            cplx(s * u.y, -s * u.x), cplx(c, s * u.z)};
}

Mat3 su2_to_so3(const Mat2& u) {
    const Mat2 sigma[3] = {
        {cplx(0), cplx(1), cplx(1), cplx(0)},
        {cplx(0), cplx(0, -1), cplx(0, 1), cplx(0)},
        {cplx(1), cplx(0), cplx(0), cplx(-1)},
    };
    const Mat2 ud = u.dagger();
    Mat3 R;
    for (int i = 0; i < 3; ++i) {
        const Mat2 p = (ud * sigma[i]) * u;
        for (int k = 0; k < 3; ++k) {
            const Mat2& s = sigma[k];
            const cplx tr = p.a * s.a + p.b * s.c + p.c * s.b + p.d * s.d;
            R[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = 0.5 * tr.real();
        }
    }
    return R;
}

SpinorConfig jm_reference(const ContourTriple& j, const MagneticTriple& m) {
    const double js[3] = {j.j1, j.j2, j.j3};
    const double ms[3] = {m.m1, m.m2, m.m3};
    SpinorConfig c;
    for (int r = 0; r < 3; ++r) {
        if (js[r] < 0 || std::fabs(ms[r]) > js[r])
            throw RangeViolation("jm_reference: need 0 <= |m_r| <= j_r");
        c.z[static_cast<std::size_t>(r)] = {cplx(std::sqrt(js[r] + ms[r])),
                                            cplx(std::sqrt(js[r] - ms[r]))};
    }
    return c;
}

SpinorConfig wigner_reference(const ContourTriple& j) {
    const TriangleShape s = triangle_shape(j);
    return {{
        Spinor{cplx(std::sqrt(2 * j.j1) * std::cos(0.5 * s.eta2)),
               cplx(std::sqrt(2 * j.j1) * std::sin(0.5 * s.eta2))},
        Spinor{cplx(std::sqrt(2 * j.j2) * std::cos(0.5 * s.eta1)),
               cplx(-std::sqrt(2 * j.j2) * std::sin(0.5 * s.eta1))},
        Spinor{cplx(std::sqrt(2 * j.j3)), cplx(0)},
    }};
}

SpinorConfig intersection_spinors(const ContourTriple& j, const MagneticTriple& m,
                                  Branch branch) {
    const Orientation o = orientation(j, m, branch);
    if (!o.gamma)
        throw NotAllowed("intersection_spinors: configuration is not classically allowed");
    const Mat2 u = su2_axis_angle({0, 1, 0}, o.beta) * su2_axis_angle({0, 0, 1}, *o.gamma);
    SpinorConfig c = wigner_reference(j);
    for (auto& z : c.z) z = u * z;
    return c;
}

double action_by_arg(const ContourTriple& j, const MagneticTriple& m, Branch branch) {
    const SpinorConfig c = intersection_spinors(j, m, branch);
    const double js[3] = {j.j1, j.j2, j.j3};
    const double ms[3] = {m.m1, m.m2, m.m3};
    double S = 0;
    for (int r = 0; r < 3; ++r) {
        const Spinor& z = c.z[static_cast<std::size_t>(r)];
        S += js[r] * arg_pm(std::conj(z.z1) * std::conj(z.z2)) +
             ms[r] * arg_pm(std::conj(z.z1) * z.z2);
    }
    return S;
}

SpinorConfig flow_state(const SpinorConfig& start, const FlowLeg& leg, double t) {
    SpinorConfig c = start;
    const cplx ph = std::polar(1.0, -0.5 * t);
    switch (leg.kind) {
        case FlowLeg::Kind::OscillatorPhase: {
            check_site(leg.site);
            if (leg.mode < 0 || leg.mode > 1)
                throw BadSpec("flow leg: mode index out of range");
            Spinor& z = c.z[static_cast<std::size_t>(leg.site)];
            (leg.mode == 0 ? z.z1 : z.z2) *= ph;
            return c;
        }
        case FlowLeg::Kind::SpinorPhase: {
            check_site(leg.site);
            Spinor& z = c.z[static_cast<std::size_t>(leg.site)];
            z.z1 *= ph;
            z.z2 *= ph;
            return c;
        }
        case FlowLeg::Kind::GlobalPhase:
            for (auto& z : c.z) { z.z1 *= ph; z.z2 *= ph; }
            return c;
        case FlowLeg::Kind::ZRotation: {
            check_site(leg.site);
            Spinor& z = c.z[static_cast<std::size_t>(leg.site)];
            z.z1 *= ph;
            z.z2 *= std::conj(ph);
            return c;
        }
        case FlowLeg::Kind::RigidRotation: {
            const Mat2 u = su2_axis_angle(leg.axis, t);
            for (auto& z : c.z) z = u * z;
            return c;
        }
    }
    throw UnknownFlow("flow_state: unrecognized leg kind");
}

double flow_action_integral(const SpinorConfig& start, std::span<const FlowLeg> legs,
                            int steps_per_leg) {
    if (steps_per_leg < 1)
        throw RangeViolation("flow_action_integral: steps_per_leg must be positive");
    double S = 0;
    SpinorConfig cur = start;
    for (const FlowLeg& leg : legs) {
        const double h = leg.angle / steps_per_leg;
        double acc = 0.5 * flow_integrand(cur, leg);
        for (int i = 1; i < steps_per_leg; ++i)
            acc += flow_integrand(flow_state(cur, leg, i * h), leg);
        const SpinorConfig end = flow_state(cur, leg, leg.angle);
        acc += 0.5 * flow_integrand(end, leg);
        S += acc * h;
        cur = end;
    }
    return S;
}

} // namespace w3j
