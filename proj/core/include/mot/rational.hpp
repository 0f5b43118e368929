#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <string>

namespace mot {

// All values in this library are exact rationals; sup/inf over finite
// structures are exact max/min, so every identity we test is an equality,
// not a tolerance check.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Rat rat(long long p, long long q = 1) { return Rat(Int(p), Int(q)); }

inline Rat rat_abs(const Rat& x) { return x < 0 ? Rat(-x) : x; }

inline int rat_sign(const Rat& x) { return x < 0 ? -1 : (x > 0 ? 1 : 0); }

// Truncated subtraction: max(x - y, 0).
inline Rat tsub(const Rat& x, const Rat& y) { return x > y ? Rat(x - y) : Rat(0); }

// Prints "p/q" (always with an explicit denominator, e.g. "3/10", "0/1").
inline std::string rat_str(const Rat& x) {
    return numerator(x).str() + "/" + denominator(x).str();
}

// Parses "p/q" or a bare integer "p". Returns nullopt on malformed input.
std::optional<Rat> rat_parse(const std::string& text);

}  // namespace mot
