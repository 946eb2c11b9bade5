#include "w3j/exact.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <numeric>

namespace w3j {

namespace {

// n! with a per-thread cache so concurrent evaluation needs no locking.
// Factorials up to a few thousand cost only a few MB per thread. A deque
// keeps earlier references valid while the cache grows mid-expression.
const mpz_class& factorial(long n) {
    thread_local std::deque<mpz_class> cache(1, mpz_class(1));
    while (static_cast<long>(cache.size()) <= n)
        cache.push_back(cache.back() * static_cast<unsigned long>(cache.size()));
    return cache[static_cast<std::size_t>(n)];
}

// Unreduced value^2 = num / den plus the sign; reduction is deferred so the
// float path can skip it.
struct RawSurd {
    int sign = 0;
    mpz_class num = 0, den = 1;
};

// Racah single sum with one common denominator: the term at t is the integer
//   N_t = tmax! (A-tmin)! (B-tmin)! (C-tmin)! (D+tmax)! (E+tmax)! / d_t,
//   d_t = t! (A-t)! (B-t)! (C-t)! (D+t)! (E+t)!,
// and consecutive terms are related by exact integer ratios, so the whole
// sum costs one short multiply and one exact divide per term.
RawSurd threej_raw(const ThreeJArgs& a) {
    RawSurd out;
    if (!selection_check(a).empty()) return out;

    const long A = (a.j1 + a.j2 - a.j3).twice() / 2;
    const long B = (a.j1 - a.m1).twice() / 2;
    const long C = (a.j2 + a.m2).twice() / 2;
    const long D = (a.j3 - a.j2 + a.m1).twice() / 2;
    const long E = (a.j3 - a.j1 - a.m2).twice() / 2;

    // Admissible arguments always leave a nonempty range here.
    const long tmin = std::max({0L, -D, -E});
    const long tmax = std::min({A, B, C});

    mpz_class nt;
    {
        mpz_class hi = factorial(tmax) * factorial(D + tmax) * factorial(E + tmax);
        mpz_class lo = factorial(tmin) * factorial(D + tmin) * factorial(E + tmin);
        mpz_divexact(nt.get_mpz_t(), hi.get_mpz_t(), lo.get_mpz_t());
    }
    mpz_class sum = (tmin % 2 == 0) ? nt : -nt;
    for (long t = tmin; t < tmax; ++t) {
        // Each factor is bounded by the j sums, so the fused products stay
        // far below 64-bit range for any realistic arguments.
        nt *= static_cast<unsigned long>((A - t) * (B - t) * (C - t));
        mpz_divexact_ui(nt.get_mpz_t(), nt.get_mpz_t(),
                        static_cast<unsigned long>((t + 1) * (D + t + 1) * (E + t + 1)));
        if ((t + 1) % 2 == 0) sum += nt; else sum -= nt;
    }
    if (sum == 0) return out;

    const long a2 = (a.j1 - a.j2 + a.j3).twice() / 2;
    const long a3 = (-a.j1 + a.j2 + a.j3).twice() / 2;
    const long b = (a.j1 + a.j2 + a.j3).twice() / 2 + 1;

    mpz_class fmag = factorial((a.j1 + a.m1).twice() / 2) * factorial(B)
                   * factorial(C) * factorial((a.j2 - a.m2).twice() / 2)
                   * factorial((a.j3 + a.m3).twice() / 2)
                   * factorial((a.j3 - a.m3).twice() / 2);

    mpz_class denom = factorial(tmax) * factorial(A - tmin) * factorial(B - tmin)
                    * factorial(C - tmin) * factorial(D + tmax) * factorial(E + tmax);

    // Overall phase (-1)^(j1 - j2 - m3); the exponent is an integer whenever
    // the selection rules pass.
    const long phase = (a.j1 - a.j2 - a.m3).twice() / 2;

    out.sign = sgn(sum) * ((phase % 2 != 0) ? -1 : 1);
    out.num = factorial(A) * factorial(a2) * factorial(a3) * fmag * sum * sum;
    out.den = factorial(b) * denom * denom;
    return out;
}

// sign * sqrt(num / den) in double precision via mantissa/exponent splits,
// immune to overflow of the huge integers involved.
double surd_to_double(int sign, const mpz_class& num, const mpz_class& den) {
    if (sign == 0) return 0.0;
    long en = 0, ed = 0;
    double dn = mpz_get_d_2exp(&en, num.get_mpz_t());
    double dd = mpz_get_d_2exp(&ed, den.get_mpz_t());
    long e = en - ed;
    double r = dn / dd;
    if (e & 1L) { r *= 2.0; e -= 1; }
    return sign * std::ldexp(std::sqrt(r), static_cast<int>(e / 2));
}

} // namespace

const char* to_string(SelectionRule r) {
    switch (r) {
        case SelectionRule::NonnegativeJ: return "nonnegative-j";
        case SelectionRule::MLattice:     return "m-lattice";
        case SelectionRule::JSumInteger:  return "j-sum-integer";
        case SelectionRule::MSum:         return "m-sum";
        case SelectionRule::Triangle:     return "triangle";
    }
    return "?";
}

std::vector<SelectionRule> selection_check(const ThreeJArgs& a) {
    std::vector<SelectionRule> out;
    const HalfInt js[3] = {a.j1, a.j2, a.j3};
    const HalfInt ms[3] = {a.m1, a.m2, a.m3};

    bool j_neg = false, m_bad = false;
    for (int r = 0; r < 3; ++r) {
        if (js[r].twice() < 0) j_neg = true;
        const int d = js[r].twice() - ms[r].twice();
        const int s = js[r].twice() + ms[r].twice();
        if (d % 2 != 0 || d < 0 || s < 0) m_bad = true;
    }
    if (j_neg) out.push_back(SelectionRule::NonnegativeJ);
    if (m_bad) out.push_back(SelectionRule::MLattice);
    if ((a.j1 + a.j2 + a.j3).twice() % 2 != 0) out.push_back(SelectionRule::JSumInteger);
    if ((a.m1 + a.m2 + a.m3).twice() != 0) out.push_back(SelectionRule::MSum);
    if (abs(a.j1 - a.j2) > a.j3 || a.j3 > a.j1 + a.j2) out.push_back(SelectionRule::Triangle);
    return out;
}

double ExactSurd::to_double() const {
    return surd_to_double(sign, square.get_num(), square.get_den());
}

std::string ExactSurd::str() const {
    if (sign == 0) return "0";
    std::string s = (sign > 0) ? "+sqrt(" : "-sqrt(";
    s += square.get_num().get_str();
    s += '/';
    s += square.get_den().get_str();
    s += ')';
    return s;
}

ExactSurd exact_threej(const ThreeJArgs& a) {
    RawSurd raw = threej_raw(a);
    ExactSurd out;
    out.sign = raw.sign;
    if (raw.sign != 0) {
        out.square = mpq_class(raw.num, raw.den);
        out.square.canonicalize();
    }
    return out;
}

double threej_float(const ThreeJArgs& a) {
    RawSurd raw = threej_raw(a);
    return surd_to_double(raw.sign, raw.num, raw.den);
}

MRow threej_m_row(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt m1) {
    if (j1.twice() < 0 || j2.twice() < 0 || j3.twice() < 0)
        throw RangeViolation("threej_m_row: negative j");
    if ((j1 + j2 + j3).twice() % 2 != 0)
        throw RangeViolation("threej_m_row: j1 + j2 + j3 must be an integer");
    {
        const int d = j1.twice() - m1.twice();
        if (d % 2 != 0 || d < 0 || j1.twice() + m1.twice() < 0)
            throw RangeViolation("threej_m_row: m1 = " + m1.str() +
                                 " is not on the lattice of j1 = " + j1.str());
    }
    if (abs(j1 - j2) > j3 || j3 > j1 + j2)
        throw EmptyRow("threej_m_row: (" + j1.str() + ", " + j2.str() + ", " +
                       j3.str() + ") violates the triangle inequality");

    const HalfInt lo = std::max(-j2, HalfInt(0) - j3 - m1);
    const HalfInt hi = std::min(j2, j3 - m1);
    if (lo > hi)
        throw EmptyRow("threej_m_row: empty m2 range for m1 = " + m1.str());
    const int n = (hi - lo).twice() / 2 + 1;

    const double dj1 = j1.to_double(), dj2 = j2.to_double(), dj3 = j3.to_double();
    const double dm1 = m1.to_double();
    const double x0 = lo.to_double();

    // Three-term recursion at site k (m2 = x0 + k):
    //   T(k) f(k-1) + B(k) f(k) + T(k+1) f(k+1) = 0,
    // from the matrix elements of J1^2 = (J2 + J3)^2 in the product basis.
    // T(0) and T(n) vanish identically at the true row edges.
    auto T = [&](int k) {
        const double x = x0 + k, m3 = -dm1 - x;
        return std::sqrt((dj2 - x + 1) * (dj2 + x) * (dj3 + m3 + 1) * (dj3 - m3));
    };
    auto Bc = [&](int k) {
        const double x = x0 + k, m3 = -dm1 - x;
        return dj2 * (dj2 + 1) + dj3 * (dj3 + 1) - dj1 * (dj1 + 1) + 2 * x * m3;
    };

    constexpr double tiny = 1e-150, huge_lim = 1e150;
    std::vector<double> f(static_cast<std::size_t>(n), 0.0);

    // Forward sweep from the left edge. In the left forbidden zone this
    // tracks the growing (physical) solution; stop at the first downturn of
    // the envelope, which marks the oscillatory window.
    int turn = n - 1;
    f[0] = tiny;
    for (int k = 1; k < n; ++k) {
        const double prev = (k >= 2) ? T(k - 1) * f[k - 1 - 1] : 0.0;
        f[static_cast<std::size_t>(k)] =
            -(Bc(k - 1) * f[static_cast<std::size_t>(k - 1)] + prev) / T(k);
        if (std::fabs(f[static_cast<std::size_t>(k)]) > huge_lim)
            for (int i = 0; i <= k; ++i) f[static_cast<std::size_t>(i)] *= tiny;
        if (k >= 2 && std::fabs(f[static_cast<std::size_t>(k)]) <
                          std::fabs(f[static_cast<std::size_t>(k - 1)])) {
            turn = k - 1;
            break;
        }
    }

    if (turn < n - 1) {
        // Backward sweep from the right edge down to the matching point,
        // then glue with a least-squares ratio over the two-point overlap.
        std::vector<double> g(static_cast<std::size_t>(n), 0.0);
        g[static_cast<std::size_t>(n - 1)] = tiny;
        for (int k = n - 2; k >= turn; --k) {
            const double next2 = (k + 2 <= n - 1) ? T(k + 2) * g[static_cast<std::size_t>(k + 2)] : 0.0;
            g[static_cast<std::size_t>(k)] =
                -(Bc(k + 1) * g[static_cast<std::size_t>(k + 1)] + next2) / T(k + 1);
            if (std::fabs(g[static_cast<std::size_t>(k)]) > huge_lim)
                for (int i = n - 1; i >= k; --i) g[static_cast<std::size_t>(i)] *= tiny;
        }
        double num = 0, den = 0;
        for (int k = turn; k <= std::min(turn + 1, n - 1); ++k) {
            num += f[static_cast<std::size_t>(k)] * g[static_cast<std::size_t>(k)];
            den += g[static_cast<std::size_t>(k)] * g[static_cast<std::size_t>(k)];
        }
        const double ratio = num / den;
        for (int k = turn; k < n; ++k)
            f[static_cast<std::size_t>(k)] = ratio * g[static_cast<std::size_t>(k)];
    }

    // Normalize through sum_{m2} (2 j1 + 1) f^2 = 1.
    double fmax = 0;
    for (double v : f) fmax = std::max(fmax, std::fabs(v));
    double ssq = 0;
    for (double v : f) { const double u = v / fmax; ssq += u * u; }
    const double scale = 1.0 / (fmax * std::sqrt(ssq * (j1.twice() + 1.0)));
    for (double& v : f) v *= scale;

    // Pin the overall sign against one exact evaluation, taken at the
    // largest surviving entry (skipping accidental exact zeros).
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int p, int q) {
        return std::fabs(f[static_cast<std::size_t>(p)]) >
               std::fabs(f[static_cast<std::size_t>(q)]);
    });
    for (int k : order) {
        const HalfInt m2 = HalfInt::from_twice(lo.twice() + 2 * k);
        const double ex = threej_float({j1, j2, j3, m1, m2, HalfInt(0) - m1 - m2});
        if (ex == 0.0) continue;
        if ((ex < 0) != (f[static_cast<std::size_t>(k)] < 0))
            for (double& v : f) v = -v;
        break;
    }

    return MRow{lo, std::move(f)};
}

mpq_class orthogonality_residual(HalfInt j1, HalfInt j2, HalfInt j3) {
    // Unitarity column by column: for every m3 on the lattice of j3,
    //   (2 j3 + 1) sum_{m1, m2 = -m3-m1} (3j)^2 = 1.
    // The residual adds up |column - 1| over all columns, so it vanishes
    // exactly iff every column obeys the sum rule.
    mpq_class total = 0;
    for (int tm3 = -j3.twice(); tm3 <= j3.twice(); tm3 += 2) {
        mpq_class acc = 0;
        for (int tm1 = -j1.twice(); tm1 <= j1.twice(); tm1 += 2) {
            const int tm2 = -tm3 - tm1;
            if (std::abs(tm2) > j2.twice()) continue;
            const ThreeJArgs a{j1, j2, j3,
                               HalfInt::from_twice(tm1), HalfInt::from_twice(tm2),
                               HalfInt::from_twice(tm3)};
            RawSurd raw = threej_raw(a);
            if (raw.sign == 0) continue;
            mpq_class q(raw.num, raw.den);
            q.canonicalize();
            acc += q;
        }
        acc *= j3.twice() + 1;
        acc -= 1;
        total += abs(acc);
    }
    return total;
}

} // namespace w3j
