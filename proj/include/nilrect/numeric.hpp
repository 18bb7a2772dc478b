// numeric.hpp
// Exact arithmetic primitives shared by the whole library.
//
// Everything downstream (rectangle scaling, chart bookkeeping, parameter
// inequalities) depends on floor computations being exact: a single float
// rounding error silently corrupts containment laws.  We therefore use
// arbitrary-precision integers and rationals throughout and never touch
// floating point.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace nilrect {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Floor division with sign convention floor(a/b) for b > 0.
inline Int floor_div(const Int& a, const Int& b) {
    if (b <= 0) throw std::invalid_argument("floor_div: divisor must be positive");
    Int q = a / b, r = a % b;
    if (r != 0 && a < 0) --q;
    return q;
}

// Ceiling division for b > 0.
inline Int ceil_div(const Int& a, const Int& b) {
    return -floor_div(-a, b);
}

// floor(lambda * x) for a rational lambda, exact.
inline Int floor_mul(const Rat& lambda, const Int& x) {
    return floor_div(numerator(lambda) * x, denominator(lambda));
}

// ceil(lambda * x) for a rational lambda, exact.
inline Int ceil_mul(const Rat& lambda, const Int& x) {
    return ceil_div(numerator(lambda) * x, denominator(lambda));
}

inline std::string rat_str(const Rat& r) {
    std::string s = numerator(r).str();
    if (denominator(r) != 1) s += "/" + denominator(r).str();
    return s;
}

// Deterministic 64-bit PRNG (splitmix64).  We roll our own so that the
// stream is identical across standard libraries and platforms; std::
// distributions do not guarantee that.
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    // Uniform in [0, n) for n > 0 (rejection-free modulo; bias is
    // irrelevant for test-instance generation and fully deterministic).
    std::uint64_t below(std::uint64_t n) { return next() % n; }
    // Uniform in [lo, hi] inclusive.
    long long range(long long lo, long long hi) {
        return lo + static_cast<long long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }
};

} // namespace nilrect
