#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include <w3j/errors.hpp>
#include <w3j/exact.hpp>
#include <w3j/halfint.hpp>

using namespace w3j;

// ---------------------------------------------------------------------------
// Independent oracle. Straight Racah sum with per-term rational arithmetic:
// no shared denominator, no incremental updates, nothing in common with the
// library implementation except the formula itself.
//
//   3j = (-1)^(j1-j2-m3) sqrt(D2 * Pm) * sum_t (-1)^t / d_t,
//   d_t = t! (j1+j2-j3-t)! (j1-m1-t)! (j2+m2-t)! (j3-j2+m1+t)! (j3-j1-m2+t)!
//   D2  = (j1+j2-j3)! (j1-j2+j3)! (-j1+j2+j3)! / (j1+j2+j3+1)!
//   Pm  = prod_r (j_r - m_r)! (j_r + m_r)!
// ---------------------------------------------------------------------------
namespace {

mpz_class fact(long n) {
    mpz_class f = 1;
    for (long k = 2; k <= n; ++k) f *= k;
    return f;
}

struct OracleValue {
    int sign = 0;           // sign of the full 3j value
    mpq_class square = 0;   // value^2 as an exact rational
};

// All arguments as twice-values.
OracleValue oracle_threej(int tj1, int tj2, int tj3, int tm1, int tm2, int tm3) {
    OracleValue out;
    // Selection rules, kept deliberately pedestrian.
    if (tj1 < 0 || tj2 < 0 || tj3 < 0) return out;
    if (tm1 + tm2 + tm3 != 0) return out;
    if ((tj1 + tj2 + tj3) % 2 != 0) return out;
    if (std::abs(tm1) > tj1 || std::abs(tm2) > tj2 || std::abs(tm3) > tj3) return out;
    if ((tj1 + tm1) % 2 != 0 || (tj2 + tm2) % 2 != 0 || (tj3 + tm3) % 2 != 0) return out;
    if (tj3 > tj1 + tj2 || tj3 < std::abs(tj1 - tj2)) return out;

    const long A = (tj1 + tj2 - tj3) / 2;
    const long B = (tj1 - tm1) / 2;
    const long C = (tj2 + tm2) / 2;
    const long D = (tj3 - tj2 + tm1) / 2;
    const long E = (tj3 - tj1 - tm2) / 2;

    mpq_class sum = 0;
    for (long t = std::max({0L, -D, -E}); t <= std::min({A, B, C}); ++t) {
        mpq_class term(1, 1);
        term /= mpq_class(fact(t));
        term /= mpq_class(fact(A - t));
        term /= mpq_class(fact(B - t));
        term /= mpq_class(fact(C - t));
        term /= mpq_class(fact(D + t));
        term /= mpq_class(fact(E + t));
        if (t % 2 != 0) term = -term;
        sum += term;
    }
    if (sum == 0) return out;

    mpq_class d2(fact(A) * fact((tj1 - tj2 + tj3) / 2) * fact((-tj1 + tj2 + tj3) / 2),
                 fact((tj1 + tj2 + tj3) / 2 + 1));
    d2.canonicalize();
    mpq_class pm(fact((tj1 - tm1) / 2) * fact((tj1 + tm1) / 2) *
                 fact((tj2 - tm2) / 2) * fact((tj2 + tm2) / 2) *
                 fact((tj3 - tm3) / 2) * fact((tj3 + tm3) / 2));

    const long phase = (tj1 - tj2 - tm3) / 2;
    const int phase_sign = (((phase % 2) + 2) % 2 == 0) ? 1 : -1;
    out.sign = phase_sign * sgn(sum);
    out.square = d2 * pm * sum * sum;
    out.square.canonicalize();
    return out;
}

OracleValue oracle_threej(const ThreeJArgs& a) {
    return oracle_threej(a.j1.twice(), a.j2.twice(), a.j3.twice(),
                         a.m1.twice(), a.m2.twice(), a.m3.twice());
}

}  // namespace

TEST_CASE("half-integer parsing and formatting") {
    CHECK(HalfInt(3).twice() == 6);
    CHECK(HalfInt::from_twice(3).str() == "3/2");
    CHECK(HalfInt(-2).str() == "-2");
    CHECK(HalfInt::from_twice(3).to_double() == 1.5);
    CHECK(HalfInt::from_twice(4).is_integer());
    CHECK(!HalfInt::from_twice(3).is_integer());

    CHECK(HalfInt::parse("3") == HalfInt(3));
    CHECK(HalfInt::parse("-2") == HalfInt(-2));
    CHECK(HalfInt::parse("3/2") == HalfInt::from_twice(3));
    CHECK(HalfInt::parse("-5/2") == HalfInt::from_twice(-5));
    CHECK(HalfInt::parse("1.5") == HalfInt::from_twice(3));
    CHECK(HalfInt::parse("-0.5") == HalfInt::from_twice(-1));
    CHECK(!HalfInt::parse("x"));
    CHECK(!HalfInt::parse("1.3"));
    CHECK(!HalfInt::parse("3/4"));
    CHECK(!HalfInt::parse(""));

    CHECK(HalfInt(1) + HalfInt::from_twice(1) == HalfInt::from_twice(3));
    CHECK(abs(HalfInt(-3)) == HalfInt(3));
    CHECK(HalfInt(2) > HalfInt::from_twice(3));
}

TEST_CASE("selection rules") {
    auto rules = [](int j1, int j2, int j3, int m1, int m2, int m3) {
        return selection_check(ThreeJArgs{j1, j2, j3, m1, m2, m3});
    };
    CHECK(rules(1, 1, 2, 0, 0, 0).empty());
    {
        const auto v = rules(1, 1, 1, 1, 1, 1);
        REQUIRE(v.size() == 1);
        CHECK(v[0] == SelectionRule::MSum);
    }
    {
        const auto v = rules(1, 1, 3, 0, 0, 0);
        REQUIRE(v.size() == 1);
        CHECK(v[0] == SelectionRule::Triangle);
        CHECK(std::string(to_string(v[0])) == "triangle");
    }
    {
        const auto v = rules(1, 1, 2, 2, -1, -1);
        REQUIRE(v.size() == 1);
        CHECK(v[0] == SelectionRule::MLattice);
    }
    {
        // j2 = 3/2 with integer m2 is off the lattice.
        const ThreeJArgs a{HalfInt(1), HalfInt::from_twice(3), HalfInt::from_twice(5),
                           HalfInt(0), HalfInt(1), HalfInt(-1)};
        const auto v = selection_check(a);
        REQUIRE(v.size() == 1);
        CHECK(v[0] == SelectionRule::MLattice);
    }
    {
        const ThreeJArgs a{HalfInt(-1), HalfInt(1), HalfInt(2),
                           HalfInt(0), HalfInt(0), HalfInt(0)};
        const auto v = selection_check(a);
        CHECK(!v.empty());
        CHECK(v[0] == SelectionRule::NonnegativeJ);
    }
    {
        // Half-integer total j.
        const ThreeJArgs a{HalfInt::from_twice(1), HalfInt(1), HalfInt(1),
                           HalfInt::from_twice(1), HalfInt(0),
                           HalfInt::from_twice(-1)};
        const auto v = selection_check(a);
        CHECK(std::find(v.begin(), v.end(), SelectionRule::JSumInteger) != v.end());
    }
}

TEST_CASE("frozen exact values") {
    // Square roots frozen from an independent computer-algebra evaluation.
    struct Case {
        const char* j1; const char* j2; const char* j3;
        const char* m1; const char* m2; const char* m3;
        int sign; const char* square;
    };
    const Case cases[] = {
        {"1", "1", "0", "1", "-1", "0", +1, "1/3"},
        {"1", "1", "2", "0", "0", "0", +1, "2/15"},
        {"2", "2", "2", "0", "0", "0", -1, "2/35"},
        {"3/2", "3/2", "1", "1/2", "1/2", "-1", +1, "2/15"},
        {"5", "6", "7", "2", "-3", "1", -1, "1587/923780"},
        {"21/2", "10", "15/2", "5/2", "-6", "7/2", +1, "38663/9132825"},
        {"20", "20", "20", "1", "2", "-3", -1, "3942933930/18128893780549"},
        {"8", "8", "8", "0", "0", "0", +1, "490/96577"},
        {"9", "8", "7", "0", "0", "0", +1, "504/96577"},
    };
    for (const auto& c : cases) {
        CAPTURE(c.j1); CAPTURE(c.j2); CAPTURE(c.j3);
        CAPTURE(c.m1); CAPTURE(c.m2); CAPTURE(c.m3);
        const ThreeJArgs a{*HalfInt::parse(c.j1), *HalfInt::parse(c.j2),
                           *HalfInt::parse(c.j3), *HalfInt::parse(c.m1),
                           *HalfInt::parse(c.m2), *HalfInt::parse(c.m3)};
        const auto got = exact_threej(a);
        CHECK(got.sign == c.sign);
        CHECK(got.square == mpq_class(c.square));
        // And the oracle agrees with the frozen value too.
        const auto ref = oracle_threej(a);
        CHECK(ref.sign == c.sign);
        CHECK(ref.square == mpq_class(c.square));
    }
}

TEST_CASE("exact values match the oracle exhaustively for 2j <= 6") {
    int checked = 0;
    for (int tj1 = 0; tj1 <= 6; ++tj1)
    for (int tj2 = 0; tj2 <= 6; ++tj2)
    for (int tj3 = std::abs(tj1 - tj2); tj3 <= std::min(6, tj1 + tj2); ++tj3) {
        if ((tj1 + tj2 + tj3) % 2 != 0) continue;
        for (int tm1 = -tj1; tm1 <= tj1; tm1 += 2)
        for (int tm2 = -tj2; tm2 <= tj2; tm2 += 2) {
            const int tm3 = -tm1 - tm2;
            if (std::abs(tm3) > tj3) continue;
            const ThreeJArgs a{HalfInt::from_twice(tj1), HalfInt::from_twice(tj2),
                               HalfInt::from_twice(tj3), HalfInt::from_twice(tm1),
                               HalfInt::from_twice(tm2), HalfInt::from_twice(tm3)};
            const auto lib = exact_threej(a);
            const auto ref = oracle_threej(a);
            CHECK(lib.sign == ref.sign);
            CHECK(lib.square == ref.square);
            ++checked;
        }
    }
    CHECK(checked > 300);
}

TEST_CASE("trivial and violating arguments") {
    const auto one = exact_threej(ThreeJArgs{0, 0, 0, 0, 0, 0});
    CHECK(one.sign == 1);
    CHECK(one.square == 1);
    CHECK(one.str() == "+sqrt(1/1)");
    CHECK(threej_float(ThreeJArgs{0, 0, 0, 0, 0, 0}) == 1.0);

    const auto zero = exact_threej(ThreeJArgs{1, 1, 3, 0, 0, 0});
    CHECK(zero.sign == 0);
    CHECK(zero.square == 0);
    CHECK(zero.str() == "0");
    CHECK(threej_float(ThreeJArgs{1, 1, 3, 0, 0, 0}) == 0.0);

    // Parity zero inside the selection rules: sum is an odd integer.
    const auto parity = exact_threej(ThreeJArgs{1, 1, 1, 0, 0, 0});
    CHECK(parity.sign == 0);
    CHECK(threej_float(ThreeJArgs{1, 1, 1, 0, 0, 0}) == 0.0);

    CHECK(exact_threej(ThreeJArgs{1, 1, 1, 1, 1, 1}).sign == 0);
    CHECK(threej_float(ThreeJArgs{1, 1, 2, 0, 0, 0}) ==
          doctest::Approx(std::sqrt(2.0 / 15.0)).epsilon(1e-14));
}

TEST_CASE("column permutation and sign-flip symmetries, exhaustive 2j <= 6") {
    for (int tj1 = 0; tj1 <= 6; ++tj1)
    for (int tj2 = 0; tj2 <= 6; ++tj2)
    for (int tj3 = std::abs(tj1 - tj2); tj3 <= std::min(6, tj1 + tj2); ++tj3) {
        if ((tj1 + tj2 + tj3) % 2 != 0) continue;
        const int par = ((tj1 + tj2 + tj3) / 2) % 2 == 0 ? 1 : -1;
        for (int tm1 = -tj1; tm1 <= tj1; tm1 += 2)
        for (int tm2 = -tj2; tm2 <= tj2; tm2 += 2) {
            const int tm3 = -tm1 - tm2;
            if (std::abs(tm3) > tj3) continue;
            auto H = [](int t) { return HalfInt::from_twice(t); };
            const auto v = exact_threej(
                ThreeJArgs{H(tj1), H(tj2), H(tj3), H(tm1), H(tm2), H(tm3)});

            // Even rotations: (123) -> (231) -> (312).
            const auto r1 = exact_threej(
                ThreeJArgs{H(tj2), H(tj3), H(tj1), H(tm2), H(tm3), H(tm1)});
            const auto r2 = exact_threej(
                ThreeJArgs{H(tj3), H(tj1), H(tj2), H(tm3), H(tm1), H(tm2)});
            CHECK(r1.sign == v.sign);
            CHECK(r1.square == v.square);
            CHECK(r2.sign == v.sign);
            CHECK(r2.square == v.square);

            // All three transpositions pick up (-1)^(j1+j2+j3).
            const auto s12 = exact_threej(
                ThreeJArgs{H(tj2), H(tj1), H(tj3), H(tm2), H(tm1), H(tm3)});
            const auto s13 = exact_threej(
                ThreeJArgs{H(tj3), H(tj2), H(tj1), H(tm3), H(tm2), H(tm1)});
            const auto s23 = exact_threej(
                ThreeJArgs{H(tj1), H(tj3), H(tj2), H(tm1), H(tm3), H(tm2)});
            for (const auto* s : {&s12, &s13, &s23}) {
                CHECK(s->sign == par * v.sign);
                CHECK(s->square == v.square);
            }

            // Negating every m does the same.
            const auto neg = exact_threej(
                ThreeJArgs{H(tj1), H(tj2), H(tj3), H(-tm1), H(-tm2), H(-tm3)});
            CHECK(neg.sign == par * v.sign);
            CHECK(neg.square == v.square);
        }
    }
}

TEST_CASE("orthogonality residual") {
    CHECK(orthogonality_residual(1, 1, 2) == 0);
    CHECK(orthogonality_residual(0, 0, 0) == 0);
    CHECK(orthogonality_residual(HalfInt::from_twice(1), HalfInt::from_twice(1),
                                 HalfInt(1)) == 0);
    CHECK(orthogonality_residual(HalfInt::from_twice(21), HalfInt(10),
                                 HalfInt::from_twice(15)) == 0);
    CHECK(orthogonality_residual(7, 8, 14) == 0);
    CHECK(orthogonality_residual(10, 10, 10) == 0);
    // Triangle violated: every m3 column is empty, one unit of defect each.
    CHECK(orthogonality_residual(1, 1, 3) == 7);
}

TEST_CASE("m-row: spec'd small rows") {
    {
        const MRow row = threej_m_row(1, 1, 0, 1);
        REQUIRE(row.values.size() == 1);
        CHECK(row.m2_min == HalfInt(-1));
        CHECK(row.m2_max() == HalfInt(-1));
        CHECK(row.values[0] ==
              doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
        CHECK(row.values[0] > 0);
        CHECK(row.at(HalfInt(-1)) == row.values[0]);
        CHECK(row.at(HalfInt(0)) == 0.0);
        CHECK(row.at(HalfInt(5)) == 0.0);
    }
    {
        const MRow row = threej_m_row(1, 1, 2, 0);
        CHECK(row.at(HalfInt(0)) ==
              doctest::Approx(std::sqrt(2.0 / 15.0)).epsilon(1e-14));
    }
    CHECK_THROWS_AS((void)threej_m_row(1, 1, 3, 0), EmptyRow);
    CHECK_THROWS_AS((void)threej_m_row(1, 1, 2, 2), RangeViolation);
    CHECK_THROWS_AS((void)threej_m_row(-1, 1, 2, 0), RangeViolation);
    // m1 off the half-integer lattice of j1.
    CHECK_THROWS_AS((void)threej_m_row(HalfInt(1), HalfInt(1), HalfInt(2),
                                       HalfInt::from_twice(1)),
                    RangeViolation);
}

TEST_CASE("m-row matches exact values and the sum rule") {
    struct Probe {
        int tj1, tj2, tj3, tm1;
    };
    const Probe probes[] = {
        {2, 2, 2, 0},     {2, 2, 2, 2},    {4, 6, 8, 2},
        {7, 7, 2, 1},     {3, 5, 4, -3},   {40, 38, 30, 4},
        {11, 21, 18, -5}, {60, 60, 60, 0}, {61, 41, 50, 3},
    };
    for (const auto& p : probes) {
        CAPTURE(p.tj1); CAPTURE(p.tj2); CAPTURE(p.tj3); CAPTURE(p.tm1);
        const HalfInt j1 = HalfInt::from_twice(p.tj1);
        const HalfInt j2 = HalfInt::from_twice(p.tj2);
        const HalfInt j3 = HalfInt::from_twice(p.tj3);
        const HalfInt m1 = HalfInt::from_twice(p.tm1);
        const MRow row = threej_m_row(j1, j2, j3, m1);

        double row_max = 0;
        for (double v : row.values) row_max = std::max(row_max, std::abs(v));
        REQUIRE(row_max > 0);

        double norm = 0, worst = 0;
        for (std::size_t k = 0; k < row.values.size(); ++k) {
            const HalfInt m2 =
                HalfInt::from_twice(row.m2_min.twice() + 2 * int(k));
            const HalfInt m3 = HalfInt(0) - m1 - m2;
            norm += (j1.to_double() * 2.0 + 1.0) * row.values[k] * row.values[k];
            const double ex = threej_float(ThreeJArgs{j1, j2, j3, m1, m2, m3});
            worst = std::max(worst, std::abs(row.values[k] - ex));
        }
        // Row normalization: sum_m2 (2 j1 + 1) v^2 = 1, signs matching exact.
        CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(worst <= 1e-10 * row_max);
    }
}

TEST_CASE("m-row at large j stays accurate") {
    const MRow row = threej_m_row(500, 510, 505, 3);
    double row_max = 0;
    for (double v : row.values) row_max = std::max(row_max, std::abs(v));

    // Sample exact values across the row, including both edges and the bulk.
    const std::size_t n = row.values.size();
    for (std::size_t k : {std::size_t{0}, std::size_t{1}, n / 4, n / 2,
                          3 * n / 4, n - 2, n - 1}) {
        const HalfInt m2 = HalfInt::from_twice(row.m2_min.twice() + 2 * int(k));
        const HalfInt m3 = HalfInt(0) - HalfInt(3) - m2;
        const double ex =
            threej_float(ThreeJArgs{500, 510, 505, 3, m2, m3});
        CHECK(std::abs(row.values[k] - ex) <= 1e-10 * row_max);
    }
}

TEST_CASE("float conversion survives huge magnitudes") {
    // At 2j = 1000 the rational square underflows any naive double path;
    // the mantissa/exponent split must still deliver full precision.
    const ThreeJArgs a{500, 500, 500, 13, -2, -11};
    const auto surd = exact_threej(a);
    CHECK(surd.sign != 0);
    const double v = threej_float(a);
    CHECK(std::isfinite(v));
    CHECK(v != 0.0);
    CHECK(std::abs(v) < 1.0);

    // Check against the oracle square through logarithms.
    const auto ref = oracle_threej(a);
    REQUIRE(ref.sign == surd.sign);
    CHECK(ref.square == surd.square);
}
