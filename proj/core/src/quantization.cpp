#include "w3j/quantization.hpp"

#include <algorithm>
#include <cmath>

namespace w3j {

namespace {

constexpr double pi = std::numbers::pi;

void check_site(int site) {
    if (site < 0 || site > 2)
        throw BadSpec("contour spec: site index out of range");
}

// Base point must actually lie on the requested manifold before any loop is
// traced from it.
void check_manifold(const ContourSpec& s) {
    if (s.manifold != Manifold::Wigner) return;
    const VecConfig c = project(s.base);
    const ContourTriple I = project_lengths(s.base);
    const Vec3 total = c.J1 + c.J2 + c.J3;
    const double scale = I.j1 + I.j2 + I.j3;
    if (norm(total) > 1e-8 * std::max(1.0, scale))
        throw BadSpec("contour spec: base point is off the Wigner manifold (sum J != 0)");
}

// Winding determinant of the manifold at a state: the product of all six
// conjugated amplitudes on the torus, the three antisymmetric pair brackets
// on the Wigner manifold.
cplx winding_det(Manifold manifold, const SpinorConfig& c) {
    if (manifold == Manifold::JmTorus) {
        cplx d = 1;
        for (const Spinor& z : c.z) d *= std::conj(z.z1) * std::conj(z.z2);
        return d;
    }
    auto pair = [&](int r, int s) {
        const Spinor& zr = c.z[static_cast<std::size_t>(r)];
        const Spinor& zs = c.z[static_cast<std::size_t>(s)];
        return std::conj(zr.z1) * std::conj(zs.z2) - std::conj(zr.z2) * std::conj(zs.z1);
    };
    return pair(0, 1) * pair(1, 2) * pair(2, 0);
}

} // namespace

ContourTriple contour_values(const std::array<HalfInt, 3>& jqu) {
    return {jqu[0].to_double() + 0.5, jqu[1].to_double() + 0.5, jqu[2].to_double() + 0.5};
}

BsReport bs_check(const std::array<HalfInt, 3>& jqu, const std::array<HalfInt, 3>& m) {
    const auto violated =
        selection_check({jqu[0], jqu[1], jqu[2], m[0], m[1], m[2]});
    auto ok = [&](SelectionRule r) {
        return std::find(violated.begin(), violated.end(), r) == violated.end();
    };
    return {ok(SelectionRule::NonnegativeJ), ok(SelectionRule::MLattice),
            ok(SelectionRule::JSumInteger), ok(SelectionRule::MSum),
            ok(SelectionRule::Triangle)};
}

std::vector<FlowLeg> contour_legs(const ContourSpec& s) {
    check_manifold(s);
    switch (s.kind) {
        case ContourKind::FirstBasis:
            check_site(s.site);
            return {{FlowLeg::Kind::SpinorPhase, s.site, 0, {0, 0, 1}, 4 * pi}};
        case ContourKind::SecondBasis:
            if (s.manifold == Manifold::Wigner)
                throw BadSpec("contour spec: the second basis loop lives on the torus only");
            check_site(s.site);
            return {{FlowLeg::Kind::OscillatorPhase, s.site, 0, {0, 0, 1}, 4 * pi}};
        case ContourKind::C4:
            if (s.manifold != Manifold::Wigner)
                throw BadSpec("contour spec: C4 lives on the Wigner manifold only");
            // A 2 pi global phase reaches -z; the full rotation (u = -1 at
            // 2 pi) brings it back, so the concatenation is a closed loop.
            return {{FlowLeg::Kind::GlobalPhase, 0, 0, {0, 0, 1}, 2 * pi},
                    {FlowLeg::Kind::RigidRotation, 0, 0, s.axis, 2 * pi}};
    }
    throw BadSpec("contour spec: unrecognized contour kind");
}

ContourData basis_contour_data(const ContourSpec& s) {
    const auto legs = contour_legs(s);  // validates manifold/contour pairing
    (void)legs;

    const ContourTriple I = project_lengths(s.base);
    const double js[3] = {I.j1, I.j2, I.j3};

    // Basis loops keep |det M| constant, so degeneracy at the base point is
    // degeneracy along the whole loop.
    const double scale = std::max({1.0, js[0], js[1], js[2]});
    if (std::abs(winding_det(s.manifold, s.base)) < 1e-12 * scale * scale * scale)
        throw DegenerateBasePoint("basis_contour_data: winding determinant vanishes at the base point");

    switch (s.kind) {
        case ContourKind::FirstBasis:
            return {4 * pi * js[s.site], 4};
        case ContourKind::SecondBasis: {
            const VecConfig c = project(s.base);
            const double mz = (s.site == 0 ? c.J1 : s.site == 1 ? c.J2 : c.J3).z;
            return {2 * pi * (js[s.site] + mz), 2};
        }
        case ContourKind::C4:
            return {2 * pi * (js[0] + js[1] + js[2]), 6};
    }
    throw BadSpec("contour spec: unrecognized contour kind");
}

int maslov_winding(const ContourSpec& s, int samples_per_4pi) {
    if (samples_per_4pi < 4)
        throw RangeViolation("maslov_winding: need at least 4 samples per 4 pi");
    const auto legs = contour_legs(s);

    const cplx d0 = winding_det(s.manifold, s.base);
    const double floor_mag = 1e-10 * std::abs(d0);
    if (std::abs(d0) == 0.0)
        throw DegenerateBasePoint("maslov_winding: winding determinant vanishes at the base point");

    double total = 0;
    SpinorConfig cur = s.base;
    cplx prev = d0;
    for (const FlowLeg& leg : legs) {
        const int steps = std::max(
            16, static_cast<int>(std::ceil(samples_per_4pi * std::fabs(leg.angle) / (4 * pi))));
        const double h = leg.angle / steps;
        for (int i = 1; i <= steps; ++i) {
            const cplx d = winding_det(s.manifold, flow_state(cur, leg, i * h));
            if (std::abs(d) < floor_mag)
                throw DegenerateBasePoint("maslov_winding: winding determinant collapses along the loop");
            total += std::arg(d / prev);
            prev = d;
        }
        cur = flow_state(cur, leg, leg.angle);
    }

    const double w = total / (2 * pi);
    const long rounded = std::lround(w);
    if (std::fabs(w - static_cast<double>(rounded)) > 1e-6)
        throw BadSpec("maslov_winding: contour did not close (non-integer winding)");
    return 2 * static_cast<int>(rounded);
}

HomotopyCheck homotopy_consistency(const SpinorConfig& wigner_base, const Vec3& rotation_axis,
                                   double rel_tol) {
    const ContourSpec c4{Manifold::Wigner, ContourKind::C4, 0, wigner_base, rotation_axis};
    const auto legs4 = contour_legs(c4);
    HomotopyCheck h;
    h.action_c4 = flow_action_integral(wigner_base, legs4);
    h.maslov_c4 = maslov_winding(c4);

    h.action_sum = 0;
    h.maslov_sum = 0;
    for (int r = 0; r < 3; ++r) {
        const ContourSpec cr{Manifold::Wigner, ContourKind::FirstBasis, r, wigner_base};
        h.action_sum += flow_action_integral(wigner_base, contour_legs(cr));
        h.maslov_sum += maslov_winding(cr);
    }

    const double scale = std::max(1.0, std::fabs(h.action_sum));
    h.pass = std::fabs(2 * h.action_c4 - h.action_sum) <= rel_tol * scale &&
             2 * h.maslov_c4 == h.maslov_sum;
    return h;
}

QuantizeReport quantize(const ContourTriple& j, const MagneticTriple& m, Manifold manifold,
                        double tol) {
    const double js[3] = {j.j1, j.j2, j.j3};
    const double ms[3] = {m.m1, m.m2, m.m3};

    QuantizeReport rep;
    rep.pass = true;

    // Nearest lattice values: j on {1/2, 1, 3/2, ...}, then m on the lattice
    // {-(j - 1/2), ..., j - 1/2} of the chosen j. Rounding is half-away-from-
    // zero on the doubled values, which keeps the reports deterministic.
    for (int r = 0; r < 3; ++r) {
        const double tj = std::max(0.0, std::round(2.0 * (js[r] - 0.5)));  // doubled label
        const double jn = 0.5 * tj + 0.5;
        const double mq = jn - 0.5 - std::round(jn - 0.5 - ms[r]);
        const double mn = std::clamp(mq, -(jn - 0.5), jn - 0.5);
        rep.nearest_j[static_cast<std::size_t>(r)] = jn;
        rep.nearest_m[static_cast<std::size_t>(r)] = mn;
        if (std::fabs(jn - js[r]) > tol || std::fabs(mn - ms[r]) > tol) rep.pass = false;
    }

    if (manifold == Manifold::Wigner) {
        // The label sum must be an integer. If rounding broke that, shift the
        // single component that costs least, toward its raw value on a tie.
        const double lsum = (rep.nearest_j[0] - 0.5) + (rep.nearest_j[1] - 0.5) +
                            (rep.nearest_j[2] - 0.5);
        if (std::fabs(lsum - std::round(lsum)) > 0.25) {
            int best = -1;
            double best_cost = 0;
            double best_dir = 0;
            for (int r = 0; r < 3; ++r) {
                const auto ur = static_cast<std::size_t>(r);
                for (double dir : {+0.5, -0.5}) {
                    const double cand = rep.nearest_j[ur] + dir;
                    if (cand < 0.5) continue;
                    const double cost =
                        std::fabs(cand - js[ur]) - std::fabs(rep.nearest_j[ur] - js[ur]);
                    if (best < 0 || cost < best_cost - 1e-15) {
                        best = r;
                        best_cost = cost;
                        best_dir = dir;
                    }
                }
            }
            const auto ub = static_cast<std::size_t>(best);
            rep.nearest_j[ub] += best_dir;
            const double jn = rep.nearest_j[ub];
            const double mq = jn - 0.5 - std::round(jn - 0.5 - ms[ub]);
            rep.nearest_m[ub] = std::clamp(mq, -(jn - 0.5), jn - 0.5);
            rep.pass = false;
        }

        // Raw values must satisfy the integrality condition themselves.
        const double raw = (js[0] - 0.5) + (js[1] - 0.5) + (js[2] - 0.5);
        if (std::fabs(raw - std::round(raw)) > tol) rep.pass = false;
    }

    return rep;
}

} // namespace w3j
