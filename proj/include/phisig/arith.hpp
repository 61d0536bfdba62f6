#pragma once

// Exact multiplicative arithmetic on 64-bit integers: factorizations,
// phi, sigma, Omega and the z-rough / z-smooth split.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "error.hpp"

namespace phisig {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline constexpr u64 u64_max = std::numeric_limits<u64>::max();

inline u64 checked_mul(u64 a, u64 b) {
    u128 r = static_cast<u128>(a) * b;
    if (r > u64_max)
        fail(ErrorKind::overflow, "integer overflow: " + std::to_string(a) + " * " + std::to_string(b));
    return static_cast<u64>(r);
}

inline u64 checked_pow(u64 base, unsigned exp) {
    u64 r = 1;
    for (unsigned i = 0; i < exp; ++i)
        r = checked_mul(r, base);
    return r;
}

/// Largest integer k with k <= z, clamped to [0, u64_max]. Integer p satisfies
/// p > z exactly when p > floor_to_u64(z).
inline u64 floor_to_u64(double z) {
    if (!(z >= 0.0))
        return 0;
    if (z >= 18446744073709551616.0)
        return u64_max;
    return static_cast<u64>(std::floor(z));
}

struct PrimePower {
    u64 prime;
    unsigned exponent;

    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Canonical factorization: primes strictly increasing, exponents >= 1,
/// and `value()` the product. The only mutator, `push_back`, keeps all three.
class Factorization {
  public:
    Factorization() = default;

    void push_back(u64 prime, unsigned exponent) {
        if (exponent == 0 || prime < 2)
            fail(ErrorKind::domain, "invalid prime power " + std::to_string(prime) + "^" +
                                        std::to_string(exponent));
        if (!factors_.empty() && factors_.back().prime >= prime)
            fail(ErrorKind::domain, "primes must be strictly increasing");
        value_ = checked_mul(value_, checked_pow(prime, exponent));
        factors_.push_back({prime, exponent});
    }

    const std::vector<PrimePower>& factors() const noexcept { return factors_; }
    u64 value() const noexcept { return value_; }
    bool empty() const noexcept { return factors_.empty(); }

    auto begin() const noexcept { return factors_.begin(); }
    auto end() const noexcept { return factors_.end(); }

    friend bool operator==(const Factorization&, const Factorization&) = default;

  private:
    std::vector<PrimePower> factors_;
    u64 value_ = 1;
};

inline u64 phi(const Factorization& f) {
    u64 r = 1;
    for (auto [p, e] : f)
        r *= checked_pow(p, e - 1) * (p - 1);
    return r;
}

/// sigma(p^e) = 1 + p + ... + p^e, exact; throws on overflow.
inline u64 sigma_prime_power(u64 p, unsigned e) {
    u128 term = 1, sum = 1;
    for (unsigned i = 0; i < e; ++i) {
        term *= p;
        sum += term;
        if (sum > u64_max)
            fail(ErrorKind::overflow,
                 "sigma(" + std::to_string(p) + "^" + std::to_string(e) + ") exceeds 64 bits");
    }
    return static_cast<u64>(sum);
}

inline u64 sigma(const Factorization& f) {
    u64 r = 1;
    for (auto [p, e] : f)
        r = checked_mul(r, sigma_prime_power(p, e));
    return r;
}

inline unsigned big_omega(const Factorization& f) {
    unsigned r = 0;
    for (auto [p, e] : f)
        r += e;
    return r;
}

/// Omega counted only over primes p > z (strict).
inline unsigned big_omega_above(const Factorization& f, double z) {
    const u64 zf = floor_to_u64(z);
    unsigned r = 0;
    for (auto [p, e] : f)
        if (p > zf)
            r += e;
    return r;
}

struct RoughSmooth {
    u64 rough;
    u64 smooth;

    friend bool operator==(const RoughSmooth&, const RoughSmooth&) = default;
};

inline RoughSmooth rough_smooth_split(const Factorization& f, double z) {
    const u64 zf = floor_to_u64(z);
    RoughSmooth r{1, 1};
    for (auto [p, e] : f)
        (p > zf ? r.rough : r.smooth) *= checked_pow(p, e);
    return r;
}

inline u64 largest_prime_factor(const Factorization& f) {
    return f.empty() ? 1 : f.factors().back().prime;
}

namespace detail {

inline u64 mulmod(u64 a, u64 b, u64 m) {
    return static_cast<u64>(static_cast<u128>(a) * b % m);
}

inline u64 powmod(u64 a, u64 e, u64 m) {
    u64 r = 1 % m;
    a %= m;
    for (; e; e >>= 1, a = mulmod(a, a, m))
        if (e & 1)
            r = mulmod(r, a, m);
    return r;
}

} // namespace detail

/// Deterministic Miller-Rabin for the full 64-bit range.
inline bool is_prime(u64 n) {
    if (n < 2)
        return false;
    for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % p == 0)
            return n == p;
    }
    u64 d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        u64 x = detail::powmod(a, d, n);
        if (x == 1 || x == n - 1)
            continue;
        bool composite = true;
        for (unsigned r = 1; r < s; ++r) {
            x = detail::mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite)
            return false;
    }
    return true;
}

/// Trial division with a 2,3-wheel. Fine for inputs up to ~1e14.
inline Factorization factorize_trial(u64 m) {
    if (m == 0)
        fail(ErrorKind::domain, "cannot factor 0");
    Factorization f;
    auto strip = [&](u64 p) {
        unsigned e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        if (e)
            f.push_back(p, e);
    };
    strip(2);
    strip(3);
    for (u64 p = 5; p <= m / p; p += 6) {
        strip(p);
        strip(p + 2);
    }
    if (m > 1)
        f.push_back(m, 1);
    return f;
}

/// floor(d^(1/e)) for e >= 1.
inline u64 integer_root(u64 d, unsigned e) {
    if (e == 1 || d < 2)
        return d;
    auto pow_le = [&](u64 r) {
        u128 acc = 1;
        for (unsigned i = 0; i < e; ++i) {
            acc *= r;
            if (acc > d)
                return false;
        }
        return true;
    };
    u64 r = static_cast<u64>(std::pow(static_cast<double>(d), 1.0 / e));
    while (r > 0 && !pow_le(r))
        --r;
    while (pow_le(r + 1))
        ++r;
    return r;
}

/// All positive divisors, ascending.
inline std::vector<u64> divisors(const Factorization& f) {
    std::vector<u64> ds{1};
    for (auto [p, e] : f) {
        const std::size_t n = ds.size();
        u64 pk = 1;
        for (unsigned k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < n; ++i)
                ds.push_back(ds[i] * pk);
        }
    }
    std::sort(ds.begin(), ds.end());
    return ds;
}

} // namespace phisig
