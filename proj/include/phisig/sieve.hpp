#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "arith.hpp"

namespace phisig {

struct SieveOptions {
    /// Upper bound on the bytes held by the spf table.
    std::uint64_t memory_budget = std::uint64_t{1} << 32;
};

/// Smallest-prime-factor table over [2, limit], plus the ascending list of
/// primes up to limit. Immutable once built and safe to share across threads.
class FactorSieve {
  public:
    static constexpr u64 max_limit = 0xFFFFFFFFull;

    explicit FactorSieve(u64 limit, const SieveOptions& opts = {}) : limit_(limit) {
        check_limit(limit, opts);
        spf_.assign(limit + 1, 0);
        // linear sieve: each composite is written once, by its smallest prime
        for (u64 i = 2; i <= limit; ++i) {
            if (spf_[i] == 0) {
                spf_[i] = static_cast<std::uint32_t>(i);
                primes_.push_back(static_cast<std::uint32_t>(i));
            }
            const u64 si = spf_[i];
            for (std::uint32_t p : primes_) {
                if (p > si || i * p > limit)
                    break;
                spf_[i * p] = p;
            }
        }
    }

    u64 limit() const noexcept { return limit_; }

    std::uint32_t spf(u64 m) const {
        check_range(m, "spf");
        return spf_[m];
    }

    const std::vector<std::uint32_t>& primes() const noexcept { return primes_; }

    bool contains(u64 m) const noexcept { return m <= limit_; }

    bool is_prime(u64 m) const {
        check_range(m, "is_prime");
        return m >= 2 && spf_[m] == m;
    }

    Factorization factorize(u64 m) const {
        if (m == 0)
            fail(ErrorKind::domain, "cannot factor 0");
        check_range(m, "factorize");
        Factorization f;
        while (m > 1) {
            const std::uint32_t p = spf_[m];
            unsigned e = 0;
            do {
                m /= p;
                ++e;
            } while (spf_[m] == p && m > 1);
            f.push_back(p, e);
        }
        return f;
    }

    /// Calls fn(p, e) for each prime power of m, ascending, without allocating.
    template <class Fn>
    void for_each_prime_power(u64 m, Fn&& fn) const {
        check_range(m, "factorize");
        while (m > 1) {
            const std::uint32_t p = spf_[m];
            unsigned e = 0;
            do {
                m /= p;
                ++e;
            } while (m > 1 && spf_[m] == p);
            fn(u64{p}, e);
        }
    }

    /// Factor any m: sieve lookup when in range, otherwise trial division by
    /// the sieve's primes, falling back to plain trial division.
    Factorization factorize_any(u64 m) const {
        if (m == 0)
            fail(ErrorKind::domain, "cannot factor 0");
        if (m <= limit_)
            return factorize(m);
        const u64 last = primes_.empty() ? 1 : primes_.back();
        if (static_cast<u128>(last) * last < m)
            return factorize_trial(m);
        Factorization f;
        for (std::uint32_t p : primes_) {
            if (u64{p} * p > m)
                break;
            unsigned e = 0;
            while (m % p == 0) {
                m /= p;
                ++e;
            }
            if (e)
                f.push_back(p, e);
            if (m <= limit_) {
                for_each_prime_power(m, [&](u64 q, unsigned k) { f.push_back(q, k); });
                return f;
            }
        }
        if (m > 1)
            f.push_back(m, 1);
        return f;
    }

    bool is_prime_any(u64 m) const { return m <= limit_ ? is_prime(m) : phisig::is_prime(m); }

    /// Number of primes p <= x.
    u64 prime_count(double x) const {
        if (x < 2.0)
            return 0;
        const u64 xf = floor_to_u64(x);
        check_range(xf, "prime_count");
        return static_cast<u64>(
            std::upper_bound(primes_.begin(), primes_.end(), xf) - primes_.begin());
    }

    // Cache file: "SPF1", limit as u64 LE, then spf[2..limit] as u32 LE.
    void save(const std::filesystem::path& path) const {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out)
            fail(ErrorKind::format, "cannot open " + path.string() + " for writing");
        out.write("SPF1", 4);
        std::array<char, 8> lim{};
        for (int i = 0; i < 8; ++i)
            lim[i] = static_cast<char>((limit_ >> (8 * i)) & 0xFF);
        out.write(lim.data(), 8);
        std::vector<char> buf;
        buf.reserve(1 << 20);
        for (u64 m = 2; m <= limit_; ++m) {
            const std::uint32_t v = spf_[m];
            for (int i = 0; i < 4; ++i)
                buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
            if (buf.size() >= (1 << 20)) {
                out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
                buf.clear();
            }
        }
        out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
        if (!out)
            fail(ErrorKind::format, "write failed: " + path.string());
    }

    static FactorSieve load(const std::filesystem::path& path, const SieveOptions& opts = {}) {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            fail(ErrorKind::format, "cannot open sieve cache " + path.string());
        std::array<unsigned char, 12> head{};
        in.read(reinterpret_cast<char*>(head.data()), 12);
        if (in.gcount() != 12 || std::memcmp(head.data(), "SPF1", 4) != 0)
            fail(ErrorKind::format, "sieve cache: bad magic or header in " + path.string());
        u64 limit = 0;
        for (int i = 0; i < 8; ++i)
            limit |= u64{head[4 + i]} << (8 * i);
        check_limit(limit, opts);

        const u64 expected = 12 + 4 * (limit - 1);
        std::error_code ec;
        const auto size = std::filesystem::file_size(path, ec);
        if (ec || size != expected)
            fail(ErrorKind::format, "sieve cache: size " + std::to_string(size) + " != expected " +
                                        std::to_string(expected) + " (truncated or corrupt)");

        FactorSieve s;
        s.limit_ = limit;
        s.spf_.assign(limit + 1, 0);
        std::vector<unsigned char> buf(4 * (limit - 1));
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
        if (static_cast<u64>(in.gcount()) != buf.size())
            fail(ErrorKind::format, "sieve cache: truncated payload");
        for (u64 m = 2; m <= limit; ++m) {
            const unsigned char* b = &buf[4 * (m - 2)];
            const std::uint32_t v = std::uint32_t{b[0]} | (std::uint32_t{b[1]} << 8) |
                                    (std::uint32_t{b[2]} << 16) | (std::uint32_t{b[3]} << 24);
            const u64 cof = v ? m / v : 0;
            if (v < 2 || v > m || m % v != 0 ||
                (v != m && (s.spf_[v] != v || (cof > 1 && s.spf_[cof] < v))))
                fail(ErrorKind::format, "sieve cache: invalid entry at " + std::to_string(m));
            s.spf_[m] = v;
            if (v == m)
                s.primes_.push_back(v);
        }
        // entries claiming primality must survive Eratosthenes
        for (std::uint32_t p : s.primes_) {
            if (u64{p} * p > limit)
                break;
            for (u64 j = u64{p} * p; j <= limit; j += p)
                if (s.spf_[j] > p)
                    fail(ErrorKind::format, "sieve cache: invalid entry at " + std::to_string(j));
        }
        return s;
    }

  private:
    FactorSieve() = default;

    static void check_limit(u64 limit, const SieveOptions& opts) {
        if (limit < 2)
            fail(ErrorKind::domain, "sieve limit must be >= 2");
        if (limit > max_limit)
            fail(ErrorKind::resource, "sieve limit " + std::to_string(limit) + " exceeds 2^32-1");
        const double bytes = 4.0 * static_cast<double>(limit + 1);
        if (bytes > static_cast<double>(opts.memory_budget))
            fail(ErrorKind::resource, "sieve limit " + std::to_string(limit) +
                                          " exceeds memory budget of " +
                                          std::to_string(opts.memory_budget) + " bytes");
    }

    void check_range(u64 m, const char* what) const {
        if (m > limit_)
            fail(ErrorKind::out_of_range, std::string(what) + ": " + std::to_string(m) +
                                              " exceeds sieve limit " + std::to_string(limit_));
    }

    u64 limit_ = 0;
    std::vector<std::uint32_t> spf_;
    std::vector<std::uint32_t> primes_;
};

} // namespace phisig
