#pragma once

#include <compare>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>

namespace w3j {

// Half-integer stored as twice its value, so arithmetic on angular momentum
// labels stays exact. HalfInt(3) is j = 3; HalfInt::from_twice(3) is j = 3/2.
class HalfInt {
public:
    constexpr HalfInt() = default;
    constexpr HalfInt(int whole) : twice_(2 * whole) {}

    static constexpr HalfInt from_twice(int t) {
        HalfInt h;
        h.twice_ = t;
        return h;
    }

    constexpr int twice() const { return twice_; }
    constexpr bool is_integer() const { return twice_ % 2 == 0; }
    constexpr double to_double() const { return 0.5 * twice_; }

    // Whole-number value; only meaningful when is_integer().
    constexpr int whole() const { return twice_ / 2; }

    constexpr HalfInt operator-() const { return from_twice(-twice_); }
    constexpr HalfInt operator+(HalfInt o) const { return from_twice(twice_ + o.twice_); }
    constexpr HalfInt operator-(HalfInt o) const { return from_twice(twice_ - o.twice_); }
    constexpr HalfInt& operator+=(HalfInt o) { twice_ += o.twice_; return *this; }
    constexpr HalfInt& operator-=(HalfInt o) { twice_ -= o.twice_; return *this; }

    constexpr auto operator<=>(const HalfInt&) const = default;

    // "3/2", "-1/2" for proper half-integers, plain "2", "-1" otherwise.
    std::string str() const {
        if (is_integer()) return std::to_string(whole());
        return std::to_string(twice_) + "/2";
    }

    // Accepts "3", "-2", "3/2", "-5/2", and the decimal forms "1.5", "2.0".
    // Anything that does not land exactly on the half-integer lattice fails.
    static std::optional<HalfInt> parse(std::string_view s);

private:
    int twice_ = 0;
};

constexpr HalfInt abs(HalfInt h) {
    return h.twice() < 0 ? -h : h;
}

inline std::optional<HalfInt> HalfInt::parse(std::string_view s) {
    if (s.empty()) return std::nullopt;
    std::string buf(s);
    char* end = nullptr;

    auto slash = buf.find('/');
    if (slash != std::string::npos) {
        long num = std::strtol(buf.c_str(), &end, 10);
        if (end != buf.c_str() + slash) return std::nullopt;
        long den = std::strtol(buf.c_str() + slash + 1, &end, 10);
        if (*end != '\0') return std::nullopt;
        if (den == 2) return from_twice(static_cast<int>(num));
        if (den == 1) return from_twice(static_cast<int>(2 * num));
        return std::nullopt;
    }

    auto dot = buf.find('.');
    if (dot != std::string::npos) {
        double v = std::strtod(buf.c_str(), &end);
        if (*end != '\0') return std::nullopt;
        double tw = 2.0 * v;
        long t = static_cast<long>(tw >= 0 ? tw + 0.5 : tw - 0.5);
        if (tw != static_cast<double>(t)) return std::nullopt;
        return from_twice(static_cast<int>(t));
    }

    long v = std::strtol(buf.c_str(), &end, 10);
    if (*end != '\0') return std::nullopt;
    return from_twice(static_cast<int>(2 * v));
}

} // namespace w3j
