#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "dynsketch/errors.hpp"

namespace dynsketch {

// Primes are capped at 62 bits so a*b fits the 124 bits of unsigned __int128.
inline constexpr std::uint64_t kMaxPrime = (std::uint64_t{1} << 62);

inline std::uint64_t addmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    std::uint64_t s = a + b;  // a,b < p <= 2^62, no overflow
    return s >= p ? s - p : s;
}

inline std::uint64_t submod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return a >= b ? a - b : a + p - b;
}

inline std::uint64_t negmod(std::uint64_t a, std::uint64_t p) {
    return a == 0 ? 0 : p - a;
}

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

inline std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t p) {
    std::uint64_t acc = 1 % p;
    base %= p;
    while (exp > 0) {
        if (exp & 1) acc = mulmod(acc, base, p);
        base = mulmod(base, base, p);
        exp >>= 1;
    }
    return acc;
}

/// Multiplicative inverse in Z_p, p prime.
inline std::uint64_t invmod(std::uint64_t a, std::uint64_t p) {
    if (a % p == 0) throw ZeroInverseError("inverse of zero mod " + std::to_string(p));
    return powmod(a, p - 2, p);
}

/// Deterministic Miller-Rabin; the witness set covers all n < 2^64.
inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % q == 0) return n == q;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

/// Prime field descriptor: modulus plus the seed all sampling derives from.
struct FieldSpec {
    std::uint64_t prime = 0;
    std::uint64_t seed = 0;

    bool operator==(const FieldSpec&) const = default;

    void validate() const {
        if (!is_prime(prime)) throw Error("field modulus " + std::to_string(prime) + " is not prime");
    }
};

/// Smallest prime >= ceil(2n/delta), so the n/p failure term stays below delta.
inline FieldSpec choose_prime(std::uint64_t n, double delta, std::uint64_t seed = 0) {
    if (n < 1) throw Error("choose_prime: n must be >= 1");
    if (!(delta > 0.0 && delta < 1.0)) throw Error("choose_prime: delta must be in (0,1)");
    double target = std::ceil(2.0 * static_cast<double>(n) / delta);
    if (!(target < static_cast<double>(kMaxPrime))) {
        throw Error("choose_prime: required modulus exceeds the 62-bit word bound");
    }
    std::uint64_t candidate = static_cast<std::uint64_t>(target);
    if (candidate < 2) candidate = 2;
    while (!is_prime(candidate)) ++candidate;
    return FieldSpec{candidate, seed};
}

/// Seeded generator with bias-free bounded draws; all sketch randomness flows
/// through one of these so identical seeds give identical sketches.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform draw from [0, bound) by rejection.
    std::uint64_t uniform_below(std::uint64_t bound) {
        if (bound == 0) throw Error("uniform_below: zero bound");
        std::uint64_t threshold = (~bound + 1) % bound;  // 2^64 mod bound
        for (;;) {
            std::uint64_t r = engine_();
            if (r >= threshold) return r % bound;
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace dynsketch
