#pragma once

// Exact preimage sets of phi, sigma and composition words.
//
// phi: m = prod p_i^e_i has phi(m) = prod p_i^(e_i - 1) (p_i - 1), so every
// prime of m satisfies (p - 1) | n. Primes are chosen in increasing order and
// each choice divides the remaining cofactor, which makes every m reachable
// along exactly one path.
//
// sigma: each prime power of m contributes a divisor d = sigma(p^e) of n.
// For e = 1, p = d - 1; for e >= 2, p = floor(d^(1/e)) since
// p^e < sigma(p^e) < (p + 1)^e. Distinct primes, increasing order.

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "arith.hpp"
#include "sieve.hpp"
#include "word.hpp"

namespace phisig {

inline constexpr u64 default_preimage_cap = 1'000'000;

struct PreimageOptions {
    u64 cap = default_preimage_cap;
    /// Optional factoring accelerator; results never depend on it.
    const FactorSieve* sieve = nullptr;
};

namespace detail {

inline Factorization factor_for(u64 n, const PreimageOptions& opts) {
    return opts.sieve ? opts.sieve->factorize_any(n) : factorize_trial(n);
}

inline bool prime_for(u64 p, const PreimageOptions& opts) {
    return opts.sieve ? opts.sieve->is_prime_any(p) : is_prime(p);
}

class PreimageCollector {
  public:
    PreimageCollector(u64 n, u64 cap, const char* fn) : n_(n), cap_(cap), fn_(fn) {}

    void record(u64 m) {
        out_.push_back(m);
        if (out_.size() > cap_) {
            out_.pop_back();
            std::sort(out_.begin(), out_.end());
            throw TruncationError(std::string(fn_) + " preimages of " + std::to_string(n_) +
                                      " exceed cap " + std::to_string(cap_),
                                  std::move(out_));
        }
    }

    std::vector<u64> finish() {
        std::sort(out_.begin(), out_.end());
        return std::move(out_);
    }

  private:
    u64 n_;
    u64 cap_;
    const char* fn_;
    std::vector<u64> out_;
};

inline void phi_search(const std::vector<u64>& primes, std::size_t idx, u64 rest, u64 m,
                       PreimageCollector& out) {
    if (rest == 1)
        out.record(m);
    for (std::size_t i = idx; i < primes.size(); ++i) {
        const u64 p = primes[i];
        if (p - 1 > rest)
            break;
        if (rest % (p - 1) != 0)
            continue;
        u64 r = rest / (p - 1);
        u64 mm = checked_mul(m, p);
        for (;;) {
            phi_search(primes, i + 1, r, mm, out);
            if (r % p != 0)
                break;
            r /= p;
            mm = checked_mul(mm, p);
        }
    }
}

struct SigmaCandidate {
    u64 prime;
    // (d, e) with sigma(prime^e) = d, e ascending
    std::vector<std::pair<u64, unsigned>> powers;
};

inline void sigma_search(const std::vector<SigmaCandidate>& cands, std::size_t idx, u64 rest,
                         u64 m, PreimageCollector& out) {
    if (rest == 1)
        out.record(m);
    for (std::size_t i = idx; i < cands.size(); ++i) {
        const auto& c = cands[i];
        if (c.prime + 1 > rest)
            break;
        for (auto [d, e] : c.powers) {
            if (d > rest)
                break;
            if (rest % d == 0)
                sigma_search(cands, i + 1, rest / d, checked_mul(m, checked_pow(c.prime, e)), out);
        }
    }
}

} // namespace detail

/// {m : phi(m) = n}, ascending. Throws TruncationError past opts.cap.
inline std::vector<u64> phi_preimages(u64 n, const PreimageOptions& opts = {}) {
    if (n == 0)
        fail(ErrorKind::domain, "phi_preimages: n must be >= 1");
    detail::PreimageCollector out(n, opts.cap, "phi");
    // phi(m) is even for m > 2
    if (n > 1 && n % 2 == 1)
        return out.finish();
    std::vector<u64> primes;
    for (u64 d : divisors(detail::factor_for(n, opts)))
        if (d + 1 > d && detail::prime_for(d + 1, opts))
            primes.push_back(d + 1);
    detail::phi_search(primes, 0, n, 1, out);
    return out.finish();
}

/// {m : sigma(m) = n}, ascending. Throws TruncationError past opts.cap.
inline std::vector<u64> sigma_preimages(u64 n, const PreimageOptions& opts = {}) {
    if (n == 0)
        fail(ErrorKind::domain, "sigma_preimages: n must be >= 1");
    detail::PreimageCollector out(n, opts.cap, "sigma");
    std::map<u64, std::vector<std::pair<u64, unsigned>>> by_prime;
    for (u64 d : divisors(detail::factor_for(n, opts))) {
        if (d < 3)
            continue;
        if (detail::prime_for(d - 1, opts))
            by_prime[d - 1].emplace_back(d, 1u);
        // sigma(p^e) >= 2^(e+1) - 1
        for (unsigned e = 2; e < 64 && (u64{1} << (e + 1)) - 1 <= d; ++e) {
            const u64 p = integer_root(d, e);
            if (p < 2)
                break;
            u128 s = 1, t = 1;
            for (unsigned i = 0; i < e; ++i) {
                t *= p;
                s += t;
            }
            if (s == d && detail::prime_for(p, opts))
                by_prime[p].emplace_back(d, e);
        }
    }
    std::vector<detail::SigmaCandidate> cands;
    for (auto& [p, powers] : by_prime) {
        std::sort(powers.begin(), powers.end());
        cands.push_back({p, std::move(powers)});
    }
    detail::sigma_search(cands, 0, n, 1, out);
    return out.finish();
}

inline std::vector<u64> preimages(ArithFn fn, u64 n, const PreimageOptions& opts = {}) {
    return fn == ArithFn::phi ? phi_preimages(n, opts) : sigma_preimages(n, opts);
}

/// Full inverse-image tree of a word at one target. Level j (1-based) is the
/// preimage of `target` under the outermost j symbols of `word`.
struct PreimageLevels {
    u64 target = 0;
    ArithWord word;
    std::vector<std::vector<u64>> levels;
    bool truncated = false;

    const std::vector<u64>& deepest() const { return levels.back(); }
    bool complete() const { return !truncated && levels.size() == word.size(); }
};

/// Builds levels breadth-first. When a level would exceed opts.cap the
/// partial level is kept, `truncated` is set and construction stops.
inline PreimageLevels iterated_preimages(const ArithWord& word, u64 n,
                                         const PreimageOptions& opts = {}) {
    if (n == 0)
        fail(ErrorKind::domain, "iterated_preimages: n must be >= 1");
    PreimageLevels out{n, word, {}, false};
    std::vector<u64> frontier{n};
    for (std::size_t j = 0; j < word.size(); ++j) {
        std::vector<u64> level;
        for (u64 target : frontier) {
            PreimageOptions step = opts;
            step.cap = opts.cap - level.size();
            try {
                auto part = preimages(word[j], target, step);
                level.insert(level.end(), part.begin(), part.end());
            } catch (const TruncationError& e) {
                level.insert(level.end(), e.partial().begin(), e.partial().end());
                out.truncated = true;
                break;
            }
        }
        // preimage sets of distinct targets are disjoint
        std::sort(level.begin(), level.end());
        out.levels.push_back(std::move(level));
        if (out.truncated)
            break;
        frontier = out.levels.back();
    }
    return out;
}

/// #{m : word(m) = n}. Never returns a truncated count.
inline u64 count_preimages(const ArithWord& word, u64 n, const PreimageOptions& opts = {}) {
    auto lv = iterated_preimages(word, n, opts);
    if (lv.truncated)
        throw TruncationError("count_preimages(" + word.to_string() + ", " + std::to_string(n) +
                                  "): level " + std::to_string(lv.levels.size()) +
                                  " exceeds cap " + std::to_string(opts.cap),
                              lv.levels.back());
    return lv.deepest().size();
}

} // namespace phisig
