#pragma once

#include <array>
#include <numbers>

#include "w3j/exact.hpp"
#include "w3j/schwinger.hpp"

namespace w3j {

// Quantum labels to classical contour values: j_r -> j_r + 1/2.
ContourTriple contour_values(const std::array<HalfInt, 3>& jqu);

// Bohr-Sommerfeld admissibility of quantum labels, condition by condition.
// pass() holds exactly when selection_check() comes back empty.
struct BsReport {
    bool j_nonnegative;
    bool m_lattice;
    bool j_sum_integer;
    bool m_sum_zero;
    bool triangle;

    bool pass() const {
        return j_nonnegative && m_lattice && j_sum_integer && m_sum_zero && triangle;
    }
};

BsReport bs_check(const std::array<HalfInt, 3>& jqu, const std::array<HalfInt, 3>& m);

enum class Manifold { JmTorus, Wigner };

// Basis loops whose action and Maslov data quantize the manifolds:
//   JmTorus  FirstBasis r: spinor-r phase loop,     action 4 pi j_r,        mu 4
//   JmTorus  SecondBasis r: single-mode phase loop, action 2 pi (j_r + m_r), mu 2
//   Wigner   FirstBasis r: spinor-r phase loop,     action 4 pi j_r,        mu 4
//   Wigner   C4: global phase + full rigid rotation, action 2 pi sum j_r,   mu 6
enum class ContourKind { FirstBasis, SecondBasis, C4 };

struct ContourSpec {
    Manifold manifold;
    ContourKind kind;
    int site = 0;          // 0-based r for the basis loops
    SpinorConfig base;
    Vec3 axis{0, 0, 1};    // rotation axis of the C4 loop
};

// Concrete flow legs tracing the specified loop from its base point.
// Throws BadSpec on an inconsistent spec (SecondBasis on Wigner, C4 on the
// torus, site out of range, Wigner base point with sum J != 0).
std::vector<FlowLeg> contour_legs(const ContourSpec& spec);

struct ContourData {
    double action;
    int maslov;
};

// Closed-form action and Maslov index of a basis loop, from the projected
// base point data. Same error conditions as contour_legs, plus
// DegenerateBasePoint when the winding determinant vanishes at the base.
ContourData basis_contour_data(const ContourSpec& spec);

// Maslov index as twice the winding number of the manifold's determinant
// det M along the loop: the product of all six conj(z_rmu) on the torus,
// D12 D23 D31 with D_rs = conj(z_r1) conj(z_s2) - conj(z_r2) conj(z_s1) on
// the Wigner manifold. The phase is unwrapped over at least samples_per_4pi
// points per 4 pi of flow parameter. Throws DegenerateBasePoint when |det M|
// collapses along the loop.
int maslov_winding(const ContourSpec& spec, int samples_per_4pi = 4096);

// Check of the loop identity 2 C4 ~ C1 + C2 + C3 on the Wigner manifold:
// actions integrated by quadrature, Maslov indices by winding.
struct HomotopyCheck {
    double action_c4, action_sum;   // 2*action_c4 should equal action_sum
    int maslov_c4, maslov_sum;      // 2*maslov_c4 should equal maslov_sum
    bool pass;
};

HomotopyCheck homotopy_consistency(const SpinorConfig& wigner_base,
                                   const Vec3& rotation_axis = {0, 0, 1},
                                   double rel_tol = 1e-10);

// Do classical contour values sit on the quantized lattice? On either
// manifold j_r - 1/2 must be a nonnegative half-integer and m_r must lie on
// the lattice {-(j_r - 1/2), ..., j_r - 1/2}; the Wigner manifold further
// needs sum_r (j_r - 1/2) to be an integer. Failures come with the nearest
// quantized values.
struct QuantizeReport {
    bool pass;
    std::array<double, 3> nearest_j;
    std::array<double, 3> nearest_m;
};

QuantizeReport quantize(const ContourTriple& j, const MagneticTriple& m,
                        Manifold manifold, double tol = 1e-9);

// Liouville volumes of the quantizing manifolds.
inline constexpr double jm_torus_volume =
    512.0 * std::numbers::pi * std::numbers::pi * std::numbers::pi *
    std::numbers::pi * std::numbers::pi * std::numbers::pi;  // (2 pi)^3 (4 pi)^3
inline constexpr double wigner_volume =
    512.0 * std::numbers::pi * std::numbers::pi * std::numbers::pi *
    std::numbers::pi * std::numbers::pi;  // 2^9 pi^5
inline constexpr double intersection_volume =
    128.0 * std::numbers::pi * std::numbers::pi * std::numbers::pi *
    std::numbers::pi;  // (1/2) (4 pi)^4

} // namespace w3j
