#include "w3j/semiclassical.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

namespace w3j {

namespace {

constexpr double pi = std::numbers::pi;

double clamp1(double x) { return std::clamp(x, -1.0, 1.0); }

} // namespace

ActionAngles action_angles(const ContourTriple& j, const MagneticTriple& m) {
    const TriangleShape sh = triangle_shape(j);
    const Orientation o = orientation(j, m);
    if (!o.gamma)
        throw NotAllowed("action_angles: configuration is not classically allowed");

    const double p1 = (j.j1 - m.m1) * (j.j1 + m.m1);
    const double p2 = (j.j2 - m.m2) * (j.j2 + m.m2);
    const double p3 = (j.j3 - m.m3) * (j.j3 + m.m3);
    if (p1 <= 0 || p2 <= 0 || p3 <= 0)
        throw DegeneratePerp("action_angles: some j_r^2 - m_r^2 vanishes");
    const double q1 = std::sqrt(p1), q2 = std::sqrt(p2), q3 = std::sqrt(p3);

    const double s1 = j.j1 * j.j1, s2 = j.j2 * j.j2, s3 = j.j3 * j.j3;
    const double d4 = 4.0 * sh.area;

    ActionAngles a;
    a.psi1 = std::acos(clamp1((s1 * (m.m3 - m.m2) + m.m1 * (s3 - s2)) / (d4 * q1)));
    a.psi2 = std::acos(clamp1((s2 * (m.m1 - m.m3) + m.m2 * (s1 - s3)) / (d4 * q2)));
    a.psi3 = std::acos(clamp1((s3 * (m.m2 - m.m1) + m.m3 * (s2 - s1)) / (d4 * q3)));
    a.phi1 = std::acos(clamp1((s2 - s3 - s1 - 2 * m.m1 * m.m3) / (2 * q1 * q3)));
    a.phi2 = -std::acos(clamp1((s1 - s3 - s2 - 2 * m.m2 * m.m3) / (2 * q2 * q3)));
    a.phi3 = 0.0;
    return a;
}

double action_phase(const ContourTriple& j, const MagneticTriple& m) {
    const ActionAngles a = action_angles(j, m);
    return j.j1 * a.psi1 + j.j2 * a.psi2 + j.j3 * a.psi3 +
           m.m1 * a.phi1 + m.m2 * a.phi2 + m.m3 * a.phi3;
}

int SignRule::sign(const ThreeJArgs& args) const {
    const int tw = a * args.j1.twice() + b * args.j2.twice() + c * args.j3.twice() +
                   d * args.m1.twice() + e * args.m2.twice() + f * args.m3.twice() + 2 * g;
    if (tw % 2 != 0) return 0;
    return ((tw / 2) % 2 != 0) ? -1 : 1;
}

std::string SignRule::str() const {
    const int coef[6] = {a, b, c, d, e, f};
    const char* name[6] = {"j1", "j2", "j3", "m1", "m2", "m3"};
    std::string exp;
    for (int i = 0; i < 6; ++i) {
        if (coef[i] == 0) continue;
        if (exp.empty())
            exp += (coef[i] < 0) ? "-" : "";
        else
            exp += (coef[i] < 0) ? " - " : " + ";
        exp += name[i];
    }
    if (g != 0) exp += exp.empty() ? "1" : " + 1";
    if (exp.empty()) exp = "0";
    return "(-1)^(" + exp + ")";
}

AsymptoticResult asymptotic_threej(const ThreeJArgs& args, const SignRule& rule,
                                   double caustic_band) {
    AsymptoticResult res;
    const int rs = rule.sign(args);
    res.prefactor_sign = (rs == 0) ? 1 : rs;

    const ContourTriple j{args.j1.to_double() + 0.5, args.j2.to_double() + 0.5,
                          args.j3.to_double() + 0.5};
    const MagneticTriple m{args.m1.to_double(), args.m2.to_double(), args.m3.to_double()};

    if (!selection_check(args).empty()) {
        // The symbol vanishes identically; classify when the classical data
        // still describes a sensible triangle, otherwise call it forbidden.
        res.value = 0.0;
        try {
            res.region = classify_region(j, m, caustic_band);
        } catch (const Error&) {
            res.region = Region::Forbidden;
        }
        return res;
    }

    // Admissible quantum labels always sit strictly inside the classical
    // domain after the half-shift, so this cannot throw.
    res.region = classify_region(j, m, caustic_band);
    if (res.region != Region::Allowed) return res;

    const double S = action_phase(j, m);
    const TriangleShape sh = triangle_shape(j);
    const Orientation o = orientation(j, m);
    const double delta_z = sh.area * std::sin(o.beta) * std::fabs(std::sin(*o.gamma));
    const double amp = 1.0 / std::sqrt(2 * pi * delta_z);

    double c = std::cos(S + 0.25 * pi);
    if (args.m1.twice() == 0 && args.m2.twice() == 0 && args.m3.twice() == 0) {
        // With every m_r = 0 the action is (pi/2) sum(j_r + 1/2), making
        // cos(S + pi/4) = -cos((pi/2) sum j_r): an exact zero when the label
        // sum is odd, matching the parity zero of the exact symbol.
        const long jsum = (args.j1 + args.j2 + args.j3).twice() / 2;
        if (jsum % 2 != 0) c = 0.0;
    }

    res.action = S;
    res.amplitude = amp;
    res.value = res.prefactor_sign * c * amp;
    return res;
}

double rule_agreement(const SignRule& rule, std::span<const ThreeJArgs> grid) {
    std::size_t total = 0, hits = 0;
    for (const ThreeJArgs& args : grid) {
        const double exact = threej_float(args);
        if (exact == 0.0) continue;
        const AsymptoticResult r = asymptotic_threej(args, rule);
        if (r.region != Region::Allowed || !r.value || *r.value == 0.0) continue;
        ++total;
        if ((*r.value < 0) == (exact < 0)) ++hits;
    }
    return total ? static_cast<double>(hits) / static_cast<double>(total) : 0.0;
}

Calibration calibrate_prefactor(std::span<const ThreeJArgs> grid) {
    if (grid.empty())
        throw RangeViolation("calibrate_prefactor: empty grid");

    // Per-entry data independent of the rule: the exact sign and the sign of
    // the oscillatory factor. Only usable entries participate.
    struct Entry { const ThreeJArgs* args; int exact_sign; int cos_sign; };
    std::vector<Entry> entries;
    entries.reserve(grid.size());
    for (const ThreeJArgs& args : grid) {
        const double exact = threej_float(args);
        if (exact == 0.0) continue;
        const AsymptoticResult r = asymptotic_threej(args, SignRule{});  // +1 prefactor
        if (r.region != Region::Allowed || !r.value || *r.value == 0.0) continue;
        entries.push_back({&args, exact < 0 ? -1 : 1, *r.value < 0 ? -1 : 1});
    }

    // Candidates in deterministic order: the textbook rule first, then the
    // whole family by L1 weight with lexicographic tie-break.
    std::vector<SignRule> candidates{textbook_sign_rule};
    {
        std::vector<SignRule> family;
        for (int a = -1; a <= 1; ++a)
        for (int b = -1; b <= 1; ++b)
        for (int c = -1; c <= 1; ++c)
        for (int d = -1; d <= 1; ++d)
        for (int e = -1; e <= 1; ++e)
        for (int f = -1; f <= 1; ++f)
        for (int g = 0; g <= 1; ++g)
            family.push_back({a, b, c, d, e, f, g});
        std::stable_sort(family.begin(), family.end(), [](const SignRule& x, const SignRule& y) {
            const int wx = std::abs(x.a) + std::abs(x.b) + std::abs(x.c) +
                           std::abs(x.d) + std::abs(x.e) + std::abs(x.f) + x.g;
            const int wy = std::abs(y.a) + std::abs(y.b) + std::abs(y.c) +
                           std::abs(y.d) + std::abs(y.e) + std::abs(y.f) + y.g;
            if (wx != wy) return wx < wy;
            return std::tie(x.a, x.b, x.c, x.d, x.e, x.f, x.g) <
                   std::tie(y.a, y.b, y.c, y.d, y.e, y.f, y.g);
        });
        for (const SignRule& r : family)
            if (!(r == textbook_sign_rule)) candidates.push_back(r);
    }

    for (const SignRule& rule : candidates) {
        std::size_t hits = 0;
        for (const Entry& e : entries) {
            const int s = rule.sign(*e.args);
            if (s != 0 && s * e.cos_sign == e.exact_sign) ++hits;
        }
        const double agreement =
            entries.empty() ? 0.0
                            : static_cast<double>(hits) / static_cast<double>(entries.size());
        if (agreement >= 0.999)
            return {rule, agreement, grid.size()};
    }
    throw NoConsistentRule("calibrate_prefactor: no rule reaches 99.9% agreement");
}

} // namespace w3j
