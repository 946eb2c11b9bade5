#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "w3j/errors.hpp"
#include "w3j/halfint.hpp"

namespace w3j {

struct ThreeJArgs {
    HalfInt j1, j2, j3;
    HalfInt m1, m2, m3;
};

enum class SelectionRule {
    NonnegativeJ,  // some j_r < 0
    MLattice,      // some m_r outside {-j_r, ..., j_r} or off j_r's lattice
    JSumInteger,   // j1 + j2 + j3 not an integer
    MSum,          // m1 + m2 + m3 != 0
    Triangle,      // |j1 - j2| <= j3 <= j1 + j2 fails
};

const char* to_string(SelectionRule r);

// Violated selection rules for a candidate symbol; empty means admissible.
// Every rule is checked independently, so a wildly malformed input reports
// all of its problems at once.
std::vector<SelectionRule> selection_check(const ThreeJArgs& a);

// A 3j value in the exact form sign * sqrt(square), with square a
// nonnegative rational in lowest terms. sign == 0 (and square == 0) both for
// selection-violating input and for admissible symbols whose sum vanishes.
struct ExactSurd {
    int sign = 0;
    mpq_class square = 0;

    // Nearest double, computed through mantissa/exponent splitting so values
    // far outside double range convert without overflow.
    double to_double() const;

    // "+sqrt(2/15)", "-sqrt(2/35)", "0".
    std::string str() const;
};

ExactSurd exact_threej(const ThreeJArgs& a);

// Same value as exact_threej().to_double() but skips the final gcd
// reduction, which matters when evaluating large grids.
double threej_float(const ThreeJArgs& a);

// One recursion row at fixed (j1, j2, j3, m1): m2 runs in integer steps over
// [max(-j2, -j3 - m1), min(j2, j3 - m1)] and m3 = -m1 - m2 throughout.
struct MRow {
    HalfInt m2_min;
    std::vector<double> values;  // values[k] at m2 = m2_min + k

    HalfInt m2_max() const {
        return m2_min + HalfInt(static_cast<int>(values.size()) - 1);
    }

    // 0 outside the stored range (the symbol vanishes there).
    double at(HalfInt m2) const {
        int k = (m2.twice() - m2_min.twice()) / 2;
        if ((m2.twice() - m2_min.twice()) % 2 != 0) return 0.0;
        if (k < 0 || k >= static_cast<int>(values.size())) return 0.0;
        return values[static_cast<std::size_t>(k)];
    }
};

// Whole row by three-term recursion in m2, stabilized by running the
// iteration from both ends and matching in the interior. Normalized through
// sum_{m2} (2 j1 + 1) value^2 = 1 (unitarity of the recoupling that fixes
// m1), overall sign matched to exact_threej at the largest entry.
// Throws RangeViolation for bad j or m1, EmptyRow when no m2 is admissible
// (including a triangle-violating triple, which has no row at all).
MRow threej_m_row(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt m1);

// Exact-rational orthogonality defect, accumulated over every m3 column:
//   sum_{m3} | (2 j3 + 1) sum_{m1} threej(j1 j2 j3; m1 -m3-m1 m3)^2 - 1 |.
// Zero exactly for admissible (j1, j2, j3); a triangle-violating triple
// leaves every column empty and returns 2 j3 + 1.
mpq_class orthogonality_residual(HalfInt j1, HalfInt j2, HalfInt j3);

} // namespace w3j
