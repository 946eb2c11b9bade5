#include "w3j/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace w3j {

namespace {

double clamp1(double x) { return std::clamp(x, -1.0, 1.0); }

// Central differences, step scaled to the component magnitude.
std::vector<Vec3> fd_gradient(const ScalarField& f, std::span<const Vec3> point) {
    std::vector<Vec3> grad(point.size());
    std::vector<Vec3> w(point.begin(), point.end());
    for (std::size_t r = 0; r < w.size(); ++r) {
        double* comp[3] = {&w[r].x, &w[r].y, &w[r].z};
        double* out[3] = {&grad[r].x, &grad[r].y, &grad[r].z};
        for (int c = 0; c < 3; ++c) {
            const double v0 = *comp[c];
            const double h = 1e-6 * std::max(1.0, std::fabs(v0));
            *comp[c] = v0 + h;
            const double fp = f(w);
            *comp[c] = v0 - h;
            const double fm = f(w);
            *comp[c] = v0;
            *out[c] = (fp - fm) / (2 * h);
        }
    }
    return grad;
}

} // namespace

const char* to_string(Region r) {
    switch (r) {
        case Region::Allowed:   return "allowed";
        case Region::Caustic:   return "caustic";
        case Region::Forbidden: return "forbidden";
    }
    return "?";
}

TriangleShape triangle_shape(const ContourTriple& j) {
    if (!(j.j1 > 0) || !(j.j2 > 0) || !(j.j3 > 0))
        throw TriangleViolation("triangle_shape: side lengths must be positive");
    const double h1 = -j.j1 + j.j2 + j.j3;
    const double h2 = j.j1 - j.j2 + j.j3;
    const double h3 = j.j1 + j.j2 - j.j3;
    if (!(h1 > 0) || !(h2 > 0) || !(h3 > 0))
        throw TriangleViolation("triangle_shape: triangle inequality fails (or is degenerate)");

    TriangleShape s;
    s.eta1 = std::acos(clamp1((j.j1 * j.j1 - j.j2 * j.j2 - j.j3 * j.j3) / (2 * j.j2 * j.j3)));
    s.eta2 = std::acos(clamp1((j.j2 * j.j2 - j.j3 * j.j3 - j.j1 * j.j1) / (2 * j.j3 * j.j1)));
    s.eta3 = std::acos(clamp1((j.j3 * j.j3 - j.j1 * j.j1 - j.j2 * j.j2) / (2 * j.j1 * j.j2)));
    s.area = 0.25 * std::sqrt((j.j1 + j.j2 + j.j3) * h1 * h2 * h3);
    return s;
}

VecConfig reference_config(const ContourTriple& j) {
    const TriangleShape s = triangle_shape(j);
    return {
        {j.j1 * std::sin(s.eta2), 0, j.j1 * std::cos(s.eta2)},
        {-j.j2 * std::sin(s.eta1), 0, j.j2 * std::cos(s.eta1)},
        {0, 0, j.j3},
    };
}

Orientation orientation(const ContourTriple& j, const MagneticTriple& m, Branch branch) {
    const TriangleShape s = triangle_shape(j);
    if (std::fabs(m.m1) > j.j1 || std::fabs(m.m2) > j.j2 || std::fabs(m.m3) > j.j3)
        throw RangeViolation("orientation: |m_r| > j_r");

    Orientation o;
    o.branch = branch;
    // Test the inputs, not sin(beta): sin(acos(-1)) is 1.2e-16, not zero.
    if (std::fabs(m.m3) == j.j3)
        throw DegenerateBeta("orientation: m3 = +-j3 leaves gamma undefined");
    o.beta = std::acos(clamp1(m.m3 / j.j3));
    const double sb = std::sin(o.beta);

    o.cos_gamma = (j.j1 * std::cos(o.beta) * std::cos(s.eta2) - m.m1) /
                  (j.j1 * sb * std::sin(s.eta2));
    if (std::fabs(o.cos_gamma) <= 1.0) {
        const double g = std::acos(o.cos_gamma);
        o.gamma = (branch == Branch::Secondary) ? -g : g;
    }
    return o;
}

Region classify_region(const ContourTriple& j, const MagneticTriple& m, double caustic_band) {
    try {
        const Orientation o = orientation(j, m);
        const double c = std::fabs(o.cos_gamma);
        if (c < 1.0 - caustic_band) return Region::Allowed;
        if (c <= 1.0 + caustic_band) return Region::Caustic;
        return Region::Forbidden;
    } catch (const DegenerateBeta&) {
        return Region::Caustic;
    }
}

VecConfig rotated_config(const ContourTriple& j, const MagneticTriple& m, Branch branch,
                         double caustic_band) {
    const Orientation o = orientation(j, m, branch);
    if (!o.gamma || std::fabs(o.cos_gamma) >= 1.0 - caustic_band)
        throw NotAllowed("rotated_config: configuration is not classically allowed");

    const double cb = std::cos(o.beta), sb = std::sin(o.beta);
    const double cg = std::cos(*o.gamma), sg = std::sin(*o.gamma);
    // R_y(beta) R_z(gamma)
    auto rot = [&](const Vec3& v) {
        const Vec3 a{v.x * cg - v.y * sg, v.x * sg + v.y * cg, v.z};
        return Vec3{a.x * cb + a.z * sb, a.y, -a.x * sb + a.z * cb};
    };
    const VecConfig ref = reference_config(j);
    return {rot(ref.J1), rot(ref.J2), rot(ref.J3)};
}

double projected_area(const VecConfig& c) {
    return 0.5 * std::fabs(cross(c.J1, c.J2).z);
}

double lie_poisson(const ScalarField& f, const ScalarField& g, std::span<const Vec3> point,
                   const GradientField& grad_f, const GradientField& grad_g) {
    const std::vector<Vec3> df = grad_f ? grad_f(point) : fd_gradient(f, point);
    const std::vector<Vec3> dg = grad_g ? grad_g(point) : fd_gradient(g, point);
    if (df.size() != point.size() || dg.size() != point.size())
        throw RangeViolation("lie_poisson: gradient length does not match the configuration");

    double sum = 0;
    for (std::size_t r = 0; r < point.size(); ++r)
        sum += dot(point[r], cross(df[r], dg[r]));
    return sum;
}

double tetra_bracket(const std::array<Vec3, 4>& J) {
    return 4.0 * dot(J[0], cross(J[1], J[2]));
}

} // namespace w3j
