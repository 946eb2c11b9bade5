#pragma once

#include <optional>
#include <span>

#include "w3j/exact.hpp"
#include "w3j/geometry.hpp"

namespace w3j {

// Vertex and dihedral-style angles entering the stationary-phase action.
// For m = 0: every psi_r = pi/2, phi1 = eta2, phi2 = -eta1, phi3 = 0.
struct ActionAngles {
    double psi1, psi2, psi3;  // each in [0, pi]
    double phi1, phi2, phi3;  // phi1 in [0, pi], phi2 in [-pi, 0], phi3 = 0
};

// Closed-form angles at the classical configuration. Requires the allowed
// region; throws NotAllowed on |cos gamma| > 1, DegeneratePerp when some
// j_r^2 = m_r^2 (the formulas divide by sqrt(j_r^2 - m_r^2)).
ActionAngles action_angles(const ContourTriple& j, const MagneticTriple& m);

// S = sum_r (j_r psi_r + m_r phi_r). Equals action_by_arg on the principal
// branch to roundoff.
double action_phase(const ContourTriple& j, const MagneticTriple& m);

// Sign prefactor family (-1)^(a j1 + b j2 + c j3 + d m1 + e m2 + f m3 + g)
// with a..f in {-1, 0, 1} and g in {0, 1}. A rule only applies when its
// exponent is an integer for the arguments at hand.
struct SignRule {
    int a = 0, b = 0, c = 0, d = 0, e = 0, f = 0, g = 0;

    // +1 or -1; 0 when the exponent is not an integer for these arguments.
    int sign(const ThreeJArgs& args) const;
    std::string str() const;
    bool operator==(const SignRule&) const = default;
};

// Default prefactor: (-1)^(j3 - j1 - j2 + 1), equivalently (-1)^(j1+j2-j3+1)
// since j1 + j2 - j3 is an integer for every admissible symbol. Calibration
// against the exact oracle selects this rule on mixed integer/half-integer
// grids; the textbook candidate (-1)^(j1 - j2 - m3) disagrees with the exact
// sign on about half of any large admissible grid.
inline constexpr SignRule default_sign_rule{-1, -1, 1, 0, 0, 0, 1};

// Textbook candidate, tried first during calibration.
inline constexpr SignRule textbook_sign_rule{1, -1, 0, 0, 0, -1, 0};

struct AsymptoticResult {
    Region region;
    std::optional<double> value;      // present when Allowed, or exactly 0.0
                                      // for selection-violating input and for
                                      // the all-m-zero odd-parity case
    std::optional<double> action;     // S, present when Allowed
    std::optional<double> amplitude;  // 1 / sqrt(2 pi Delta_z), when Allowed
    int prefactor_sign = 1;
};

// Stationary-phase estimate of threej(jqu; m) at quantum arguments: each
// j_r is shifted to j_r + 1/2 once, m_r used unshifted, and in the allowed
// region
//   value = prefactor_sign * cos(S + pi/4) / sqrt(2 pi Delta_z).
// Caustic and forbidden regions report the region with no value. Selection
// violations report value = 0 exactly. When all m_r = 0 and sum j_r is odd
// the cosine vanishes identically and value is exactly 0.0.
AsymptoticResult asymptotic_threej(const ThreeJArgs& args,
                                   const SignRule& rule = default_sign_rule,
                                   double caustic_band = default_caustic_band);

// Fraction of grid entries whose exact sign the rule reproduces. Entries
// with zero exact value are skipped; entries where the rule's exponent is
// not an integer count as disagreements.
double rule_agreement(const SignRule& rule, std::span<const ThreeJArgs> grid);

struct Calibration {
    SignRule rule;
    double agreement;        // of the returned rule
    std::size_t grid_size;
};

// Search the whole rule family against the exact oracle over an admissible,
// classically allowed grid. The textbook candidate is evaluated first; after
// that candidates are ordered by L1 weight |a|+...+|f|+g, ties broken
// lexicographically, and the first rule reaching 99.9% agreement wins.
// Throws NoConsistentRule when nothing reaches the threshold, RangeViolation
// on an empty grid.
Calibration calibrate_prefactor(std::span<const ThreeJArgs> grid);

} // namespace w3j
