#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "arith.hpp"
#include "inverse.hpp"
#include "parallel.hpp"
#include "sieve.hpp"
#include "word.hpp"

namespace phisig {

/// Smallest integer argument for which log log log n is defined and the
/// L-type gauges make sense (n > e^e).
inline constexpr double l_domain_floor = 16.0;

/// L_{k,beta}(n) = exp(log n (log log log n)^beta / (log log n)^k).
inline double l_k_beta(double n, unsigned k, double beta) {
    if (!(n >= l_domain_floor))
        fail(ErrorKind::domain, "L-function requires n >= 16, got " + std::to_string(n));
    if (k == 0)
        fail(ErrorKind::domain, "L-function requires k >= 1");
    const double l1 = std::log(n);
    const double l2 = std::log(l1);
    const double l3 = std::log(l2);
    return std::exp(l1 * std::pow(l3, beta) / std::pow(l2, static_cast<double>(k)));
}

/// L(n) = L_{1,1}(n).
inline double big_l(double n) {
    if (!(n >= l_domain_floor))
        fail(ErrorKind::domain, "L-function requires n >= 16, got " + std::to_string(n));
    const double l1 = std::log(n);
    const double l2 = std::log(l1);
    return std::exp(l1 * std::log(l2) / l2);
}

/// n log(2n): the size bound on preimages used when partitioning.
inline double search_limit(u64 n) {
    if (n == 0)
        fail(ErrorKind::domain, "search_limit: n must be >= 1");
    const double nd = static_cast<double>(n);
    return nd * std::log(2.0 * nd);
}

struct Lemma3Ratios {
    double c1_hat;
    u64 argmax;
    double c2_hat;
    u64 argmin;
};

/// max sigma(n)/(n log log 3n) and min phi(n) log log(3n)/n over a range, with
/// witnesses. Ties go to the smallest n.
inline Lemma3Ratios lemma3_ratios(const FactorSieve& sieve, u64 n_min, u64 n_max,
                                  const ScanOptions& opts = {}) {
    if (n_min < 1 || n_min > n_max)
        fail(ErrorKind::domain, "lemma3_ratios: need 1 <= n_min <= n_max");
    if (n_max > sieve.limit())
        fail(ErrorKind::out_of_range, "lemma3_ratios: n_max exceeds sieve limit");
    const Lemma3Ratios init{-std::numeric_limits<double>::infinity(), 0,
                            std::numeric_limits<double>::infinity(), 0};
    auto merge = [](Lemma3Ratios a, const Lemma3Ratios& b) {
        if (b.c1_hat > a.c1_hat) {
            a.c1_hat = b.c1_hat;
            a.argmax = b.argmax;
        }
        if (b.c2_hat < a.c2_hat) {
            a.c2_hat = b.c2_hat;
            a.argmin = b.argmin;
        }
        return a;
    };
    return chunked_reduce(
        n_min, n_max + 1, opts, init,
        [&](u64 lo, u64 hi) {
            Lemma3Ratios r = init;
            for (u64 n = lo; n < hi; ++n) {
                const auto f = sieve.factorize(n);
                const double nd = static_cast<double>(n);
                const double ll = std::log(std::log(3.0 * nd));
                r = merge(r, {static_cast<double>(sigma(f)) / (nd * ll), n,
                              static_cast<double>(phi(f)) * ll / nd, n});
            }
            return r;
        },
        merge);
}

/// #{n <= x : d | a(n)}.
inline u64 count_multiples(const FactorSieve& sieve, ArithFn fn, u64 d, double x,
                           const ScanOptions& opts = {}) {
    if (d == 0)
        fail(ErrorKind::domain, "count_multiples: d must be >= 1");
    const u64 xf = floor_to_u64(x);
    if (xf > sieve.limit())
        fail(ErrorKind::out_of_range, "count_multiples: x exceeds sieve limit");
    return chunked_reduce(
        1, xf + 1, opts, u64{0},
        [&](u64 lo, u64 hi) {
            u64 c = 0;
            for (u64 n = lo; n < hi; ++n)
                c += apply(fn, sieve.factorize(n)) % d == 0 ? 1 : 0;
            return c;
        },
        [](u64 a, u64 b) { return a + b; });
}

/// (x/d) (8 l log^2(e x))^l with l = Omega(d).
inline double lemma4_bound(u64 d, double x) {
    if (d < 2)
        fail(ErrorKind::domain, "lemma4_bound: d must be >= 2");
    if (!(x >= 1.0))
        fail(ErrorKind::domain, "lemma4_bound: x must be >= 1");
    const double l = big_omega(factorize_trial(d));
    const double lg = std::log(std::exp(1.0) * x);
    return x / static_cast<double>(d) * std::pow(8.0 * l * lg * lg, l);
}

struct BoundParams {
    unsigned k = 1;
    double alpha = 0.5;
    double beta = 0.0;
    double eta = 0.5;

    /// alpha < beta + 1 < k, needed when both are used in one argument.
    bool chain_ok() const { return alpha < beta + 1.0 && beta + 1.0 < k; }
};

enum class Part { P, Q, R };

inline std::string_view to_string(Part p) {
    return p == Part::P ? "P" : (p == Part::Q ? "Q" : "R");
}

struct PartitionEntry {
    u64 ell;
    Part part;
    unsigned omega_above_z;
    unsigned omega;
    u64 preimages;
};

struct PartitionReport {
    u64 n = 0;
    unsigned k = 0;
    ArithFn fn = ArithFn::phi;
    std::string inner_word;
    double alpha = 0;
    double eta = 0;
    double x = 0;
    double z = 0;
    /// Lemma-1 weight (log log x)^(1 - eta) associated with the P bound.
    double A = 0;
    double threshold_P = 0;
    double threshold_Q = 0;
    std::vector<u64> S, P, Q, R;
    std::vector<PartitionEntry> entries;
    u64 total_P = 0, total_Q = 0, total_R = 0;

    u64 total() const { return total_P + total_Q + total_R; }
};

/// Splits S = inner_word^{-1}(n) into
///   P: Omega_{>z}(l) >= log L_{k+1,alpha}(x)
///   Q: not P, Omega(l) >= log x / (log log x)^(k + 1/2)
///   R: the rest
/// with x = n log 2n, z = exp(sqrt(log log x)), and totals of #a^{-1}(l).
inline PartitionReport partition_pqr(ArithFn fn, const ArithWord& inner_word, u64 n, double alpha,
                                     double eta, const PreimageOptions& popts = {}) {
    if (n < 16)
        fail(ErrorKind::domain, "partition_pqr: n must be >= 16");
    const unsigned k = static_cast<unsigned>(inner_word.size());
    if (!(alpha < static_cast<double>(k)))
        fail(ErrorKind::domain, "partition_pqr: alpha must be < k");
    if (!(eta > 0.0 && eta < 1.0))
        fail(ErrorKind::domain, "partition_pqr: eta must lie in (0,1)");

    PartitionReport r;
    r.n = n;
    r.k = k;
    r.fn = fn;
    r.inner_word = inner_word.to_string();
    r.alpha = alpha;
    r.eta = eta;
    r.x = search_limit(n);
    const double lx = std::log(r.x);
    const double llx = std::log(lx);
    r.z = std::exp(std::sqrt(llx));
    r.A = std::pow(llx, 1.0 - eta);
    r.threshold_P = std::log(l_k_beta(r.x, k + 1, alpha));
    r.threshold_Q = lx / std::pow(llx, static_cast<double>(k) + 0.5);

    const auto levels = iterated_preimages(inner_word, n, popts);
    if (levels.truncated)
        throw TruncationError("partition_pqr: preimage set of " + std::to_string(n) +
                                  " exceeds cap",
                              levels.levels.back());
    r.S = levels.deepest();
    for (u64 ell : r.S) {
        const auto f = popts.sieve ? popts.sieve->factorize_any(ell) : factorize_trial(ell);
        PartitionEntry e{ell, Part::R, big_omega_above(f, r.z), big_omega(f), 0};
        if (e.omega_above_z >= r.threshold_P)
            e.part = Part::P;
        else if (e.omega >= r.threshold_Q)
            e.part = Part::Q;
        e.preimages = preimages(fn, ell, popts).size();
        switch (e.part) {
        case Part::P: r.P.push_back(ell); r.total_P += e.preimages; break;
        case Part::Q: r.Q.push_back(ell); r.total_Q += e.preimages; break;
        case Part::R: r.R.push_back(ell); r.total_R += e.preimages; break;
        }
        r.entries.push_back(e);
    }
    return r;
}

struct Theorem1Row {
    u64 n;
    std::optional<u64> count;
    std::optional<double> ratio;
    std::string error;
};

struct Theorem1Scan {
    std::string word;
    double beta = 0;
    std::vector<Theorem1Row> rows;
    double max_ratio = 0;
    u64 argmax = 0;
};

/// N = #word^{-1}(n) and N L_{k,beta+1}(n)/n for each n in [n_min, n_max].
/// Rows whose enumeration hits the cap carry an error marker instead.
inline Theorem1Scan theorem1_scan(const ArithWord& word, double beta, u64 n_min, u64 n_max,
                                  const PreimageOptions& popts = {},
                                  const ScanOptions& opts = {}) {
    if (n_min < 16)
        fail(ErrorKind::domain, "theorem1_scan: n_min must be >= 16");
    if (n_min > n_max)
        fail(ErrorKind::domain, "theorem1_scan: n_min > n_max");
    const unsigned k = static_cast<unsigned>(word.size());
    Theorem1Scan s{word.to_string(), beta, {}, 0.0, 0};
    ScanOptions row_opts = opts;
    row_opts.chunk_size = 256;
    s.rows = parallel_map(n_min, n_max + 1, row_opts, [&](u64 n) {
        Theorem1Row row{n, {}, {}, {}};
        try {
            const u64 c = count_preimages(word, n, popts);
            row.count = c;
            row.ratio = c == 0 ? 0.0
                               : static_cast<double>(c) *
                                     l_k_beta(static_cast<double>(n), k, beta + 1.0) /
                                     static_cast<double>(n);
        } catch (const TruncationError&) {
            row.error = "truncated";
        }
        return row;
    });
    for (const auto& row : s.rows)
        if (row.ratio && (s.argmax == 0 || *row.ratio > s.max_ratio)) {
            s.max_ratio = *row.ratio;
            s.argmax = row.n;
        }
    return s;
}

} // namespace phisig
