#pragma once

// Moment sums sum_{n <= x} A^Omega_{>z}(a(n)) and sum_{n <= x} B^Omega(a(n)),
// next to the exponents a Rankin-type argument yields for them.
//
// Omega and Omega_{>z} are additive, so for n = prod p^e the exponent of a(n)
// is the sum over prime powers of Omega(a(p^e)). For phi that is
// (e - 1) + Omega(p - 1); for sigma with e = 1 it is Omega(p + 1). Only
// sigma(p^e) with e >= 2 needs a general factorization. This keeps the
// required sieve headroom at floor(x) + 1 rather than max a(n).

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <variant>

#include "arith.hpp"
#include "numeric.hpp"
#include "parallel.hpp"
#include "sieve.hpp"
#include "word.hpp"

namespace phisig {

/// Parameters for the large-prime-factor moment. `from_eta` derives z and A
/// from (x, eta); `custom` sets them directly and marks the report.
struct MomentParamsA {
    double x = 0;
    double eta = 0;
    double z = 0;
    double A = 0;
    bool eta_derived = true;

    static MomentParamsA from_eta(double x, double eta) {
        if (!(x >= 16.0))
            fail(ErrorKind::domain, "MomentParamsA: x must be >= 16");
        if (!(eta > 0.0 && eta < 1.0))
            fail(ErrorKind::domain, "MomentParamsA: eta must lie in (0,1)");
        const double ll = std::log(std::log(x));
        return {x, eta, std::exp(std::sqrt(ll)), std::pow(ll, 1.0 - eta), true};
    }

    static MomentParamsA custom(double x, double A, double z) {
        if (!(x >= 1.0))
            fail(ErrorKind::domain, "MomentParamsA: x must be >= 1");
        if (!(A >= 0.0) || !(z >= 1.0))
            fail(ErrorKind::domain, "MomentParamsA: need A >= 0 and z >= 1");
        return {x, 0.0, z, A, false};
    }

    /// A < z^(1/3): the regime in which the analytic exponent is meaningful.
    bool analytic_regime() const { return A < std::cbrt(z); }
};

enum class RankinVariant { quarter, third };

inline std::string_view to_string(RankinVariant v) {
    return v == RankinVariant::quarter ? "quarter" : "third";
}

inline RankinVariant parse_variant(std::string_view s) {
    if (s == "quarter")
        return RankinVariant::quarter;
    if (s == "third")
        return RankinVariant::third;
    fail(ErrorKind::usage, "unknown variant '" + std::string(s) + "' (quarter|third)");
}

struct MomentParamsB {
    double B = 1;
    double x = 0;
    RankinVariant variant = RankinVariant::quarter;

    static MomentParamsB make(double B, double x, RankinVariant variant) {
        if (!(B >= 1.0 && B < std::cbrt(2.0)))
            fail(ErrorKind::domain, "MomentParamsB: B must satisfy 1 <= B < 2^(1/3)");
        if (!(x >= 1.0))
            fail(ErrorKind::domain, "MomentParamsB: x must be >= 1");
        return {B, x, variant};
    }
};

struct AnalyticExponent {
    double exponent;
    double c;
};

inline constexpr std::string_view proof_shape_label =
    "proof-shape exponent: O-constants taken as 1; a trend indicator, not a proven bound";

struct MomentReport {
    std::variant<MomentParamsA, MomentParamsB> params;
    ArithFn fn = ArithFn::phi;
    double empirical_sum = 0;
    double empirical_log_excess = 0;
    std::optional<AnalyticExponent> analytic;
    std::string analytic_note;
    u64 n_terms = 0;
};

/// c = 1 + A / ((log x)^(1/(A+1)) (log z)^((A-1)/(A+1))) and
/// exponent = (c-1) log x + Gamma(A) / ((c-1)^A (log z)^(A-1)).
inline AnalyticExponent analytic_exponent_rough(const MomentParamsA& p) {
    if (!(p.A > 0.0) || !(p.z > 1.0) || !(p.x >= 16.0))
        fail(ErrorKind::domain, "analytic_exponent_rough: need A > 0, z > 1, x >= 16");
    const double lx = std::log(p.x);
    const double lz = std::log(p.z);
    const double c =
        1.0 + p.A / (std::pow(lx, 1.0 / (p.A + 1.0)) * std::pow(lz, (p.A - 1.0) / (p.A + 1.0)));
    if (!(c < 2.0))
        fail(ErrorKind::domain,
             "analytic_exponent_rough: Rankin parameter c = " + std::to_string(c) +
                 " is not in (1,2)");
    const double cm1 = c - 1.0;
    return {cm1 * lx + gamma_fn(p.A) / (std::pow(cm1, p.A) * std::pow(lz, p.A - 1.0)), c};
}

/// quarter: c = 1 + (log x)^(-1/4), exponent (c-1) log x + (c-1)^(-3).
/// third:   c = 1 + (log x)^(-1/3), exponent (c-1) log x + (c-1)^(-B).
inline AnalyticExponent analytic_exponent_total(const MomentParamsB& p) {
    if (!(p.x >= 16.0))
        fail(ErrorKind::domain, "analytic_exponent_total: x must be >= 16");
    const double lx = std::log(p.x);
    if (p.variant == RankinVariant::quarter) {
        const double cm1 = std::pow(lx, -0.25);
        return {cm1 * lx + 1.0 / (cm1 * cm1 * cm1), 1.0 + cm1};
    }
    const double cm1 = std::pow(lx, -1.0 / 3.0);
    return {cm1 * lx + 1.0 / std::pow(cm1, p.B), 1.0 + cm1};
}

/// Multiplicative g with g(p^e) = A^e - A^(e-1) for p > z and 0 otherwise,
/// so that sum_{r | d} g(r) = A^Omega_{>z}(d).
inline double g_value(const Factorization& f, double A, double z) {
    if (!(A >= 0.0) || !(z >= 1.0))
        fail(ErrorKind::domain, "g_value: need A >= 0 and z >= 1");
    const u64 zf = floor_to_u64(z);
    double r = 1.0;
    for (auto [p, e] : f) {
        if (p <= zf)
            return 0.0;
        r *= std::pow(A, static_cast<double>(e)) - std::pow(A, static_cast<double>(e - 1));
    }
    return r;
}

namespace detail {

/// base^k for k = 0..64 via pow, so per-term values are independent of order.
inline std::array<double, 65> power_table(double base) {
    std::array<double, 65> t{};
    for (int k = 0; k <= 64; ++k)
        t[k] = std::pow(base, k);
    return t;
}

struct OmegaCounts {
    unsigned total = 0;
    unsigned above = 0;
};

/// Omega(a(n)) and Omega_{>z}(a(n)) from the factorization of n.
inline OmegaCounts omega_of_image(const FactorSieve& sieve, ArithFn fn, u64 n, u64 zf) {
    OmegaCounts oc;
    auto count_into = [&](u64 m) {
        sieve.for_each_prime_power(m, [&](u64 q, unsigned k) {
            oc.total += k;
            if (q > zf)
                oc.above += k;
        });
    };
    sieve.for_each_prime_power(n, [&](u64 p, unsigned e) {
        if (fn == ArithFn::phi) {
            oc.total += e - 1;
            if (p > zf)
                oc.above += e - 1;
            count_into(p - 1);
        } else if (e == 1) {
            count_into(p + 1);
        } else {
            for (auto [q, k] : sieve.factorize_any(sigma_prime_power(p, e))) {
                oc.total += k;
                if (q > zf)
                    oc.above += k;
            }
        }
    });
    return oc;
}

inline void check_moment_range(const FactorSieve& sieve, ArithFn fn, u64 nmax, const char* what) {
    const u64 need = fn == ArithFn::sigma ? nmax + 1 : nmax;
    if (need > sieve.limit())
        fail(ErrorKind::out_of_range, std::string(what) + ": needs sieve limit >= " +
                                          std::to_string(need) + ", have " +
                                          std::to_string(sieve.limit()));
}

template <class Term>
double stream_sum(const FactorSieve& sieve, ArithFn fn, u64 nmax, double z,
                  const ScanOptions& opts, Term&& term) {
    const u64 zf = floor_to_u64(z);
    auto total = chunked_reduce(
        1, nmax + 1, opts, CompensatedSum{},
        [&](u64 lo, u64 hi) {
            CompensatedSum s;
            for (u64 n = lo; n < hi; ++n)
                s.add(term(omega_of_image(sieve, fn, n, zf)));
            return s;
        },
        [](CompensatedSum acc, const CompensatedSum& part) {
            acc.merge(part);
            return acc;
        });
    return total.value();
}

} // namespace detail

/// sum_{n <= x} A^Omega_{>z}(a(n)), streamed over the sieve.
inline MomentReport empirical_moment_rough(const FactorSieve& sieve, ArithFn fn,
                                           const MomentParamsA& p, const ScanOptions& opts = {}) {
    const u64 nmax = floor_to_u64(p.x);
    detail::check_moment_range(sieve, fn, nmax, "empirical_moment_rough");
    const auto pw = detail::power_table(p.A);
    MomentReport r;
    r.params = p;
    r.fn = fn;
    r.n_terms = nmax;
    r.empirical_sum = detail::stream_sum(sieve, fn, nmax, p.z, opts,
                                         [&](detail::OmegaCounts oc) { return pw[oc.above]; });
    r.empirical_log_excess = std::log(r.empirical_sum / p.x);
    try {
        r.analytic = analytic_exponent_rough(p);
        r.analytic_note = std::string(proof_shape_label);
        if (!p.analytic_regime())
            r.analytic_note += "; A >= z^(1/3), outside the regime where the bound applies";
    } catch (const Error& e) {
        r.analytic_note = std::string("analytic exponent unavailable: ") + e.what();
    }
    if (!p.eta_derived)
        r.analytic_note += "; A and z overridden";
    return r;
}

/// sum_{n <= x} B^Omega(a(n)), streamed over the sieve.
inline MomentReport empirical_moment_total(const FactorSieve& sieve, ArithFn fn,
                                           const MomentParamsB& p, const ScanOptions& opts = {}) {
    const u64 nmax = floor_to_u64(p.x);
    detail::check_moment_range(sieve, fn, nmax, "empirical_moment_total");
    const auto pw = detail::power_table(p.B);
    MomentReport r;
    r.params = p;
    r.fn = fn;
    r.n_terms = nmax;
    r.empirical_sum = detail::stream_sum(sieve, fn, nmax, u64_max, opts,
                                         [&](detail::OmegaCounts oc) { return pw[oc.total]; });
    r.empirical_log_excess = std::log(r.empirical_sum / p.x);
    try {
        r.analytic = analytic_exponent_total(p);
        r.analytic_note = std::string(proof_shape_label);
    } catch (const Error& e) {
        r.analytic_note = std::string("analytic exponent unavailable: ") + e.what();
    }
    return r;
}

/// S(T) = sum_{p <= T} A^Omega_{>z}(a(p)), using a(p) = p - 1 or p + 1.
inline double rough_prime_moment_sum(const FactorSieve& sieve, double T, ArithFn fn, double A,
                                     double z) {
    if (!(A >= 0.0) || !(z >= 1.0))
        fail(ErrorKind::domain, "rough_prime_moment_sum: need A >= 0 and z >= 1");
    if (T < 2.0)
        return 0.0;
    const u64 tmax = floor_to_u64(T);
    detail::check_moment_range(sieve, fn, tmax, "rough_prime_moment_sum");
    const u64 zf = floor_to_u64(z);
    const auto pw = detail::power_table(A);
    CompensatedSum s;
    for (std::uint32_t p : sieve.primes()) {
        if (p > tmax)
            break;
        unsigned above = 0;
        sieve.for_each_prime_power(fn == ArithFn::phi ? p - 1 : u64{p} + 1,
                                   [&](u64 q, unsigned k) {
                                       if (q > zf)
                                           above += k;
                                   });
        s.add(pw[above]);
    }
    return s.value();
}

} // namespace phisig
