#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "arith.hpp"
#include "parallel.hpp"
#include "sieve.hpp"

namespace phisig {

namespace detail {

inline bool is_smooth(const FactorSieve& sieve, u64 m, u64 yf) {
    bool ok = true;
    sieve.for_each_prime_power(m, [&](u64 p, unsigned) { ok = ok && p <= yf; });
    return ok;
}

inline u64 checked_floor(const FactorSieve& sieve, double x, const char* what) {
    if (!(x >= 0.0))
        fail(ErrorKind::domain, std::string(what) + ": x must be >= 0");
    const u64 xf = floor_to_u64(x);
    if (xf > sieve.limit())
        fail(ErrorKind::out_of_range, std::string(what) + ": x = " + std::to_string(xf) +
                                          " exceeds sieve limit " + std::to_string(sieve.limit()));
    return xf;
}

inline void check_y(double y, const char* what) {
    if (!(y >= 1.0))
        fail(ErrorKind::domain, std::string(what) + ": y must be >= 1");
}

template <class Pred>
u64 count_range(u64 first, u64 last, const ScanOptions& opts, Pred&& pred) {
    return chunked_reduce(
        first, last, opts, u64{0},
        [&](u64 lo, u64 hi) {
            u64 c = 0;
            for (u64 n = lo; n < hi; ++n)
                c += pred(n) ? 1 : 0;
            return c;
        },
        [](u64 a, u64 b) { return a + b; });
}

} // namespace detail

/// Psi(x, y): n <= x with no prime factor above y; n = 1 always counts.
inline u64 psi_count(const FactorSieve& sieve, double x, double y, const ScanOptions& opts = {}) {
    detail::check_y(y, "psi_count");
    const u64 xf = detail::checked_floor(sieve, x, "psi_count");
    const u64 yf = floor_to_u64(y);
    return detail::count_range(1, xf + 1, opts,
                               [&](u64 n) { return detail::is_smooth(sieve, n, yf); });
}

/// Pi(x, y): primes p <= x with p - 1 free of primes above y; p = 2 always counts.
inline u64 pi_smooth_shifted(const FactorSieve& sieve, double x, double y,
                             const ScanOptions& opts = {}) {
    detail::check_y(y, "pi_smooth_shifted");
    const u64 xf = detail::checked_floor(sieve, x, "pi_smooth_shifted");
    const u64 yf = floor_to_u64(y);
    const auto& primes = sieve.primes();
    const u64 np = sieve.prime_count(static_cast<double>(xf));
    return detail::count_range(0, np, opts, [&](u64 i) {
        return detail::is_smooth(sieve, u64{primes[i]} - 1, yf);
    });
}

struct SmoothCounts {
    double x = 0;
    double y = 0;
    u64 psi = 0;
    u64 pi_smooth = 0;
    u64 pi_x = 0;
    double lhs = 0;
    double rhs = 0;
    /// lhs / rhs, absent when pi_smooth = 0.
    std::optional<double> ratio;
};

/// Both sides of Psi(x,y)/x ~ Pi(x,y)/pi(x).
inline SmoothCounts hypothesis1_report(const FactorSieve& sieve, double x, double y,
                                       const ScanOptions& opts = {}) {
    if (!(x >= y))
        fail(ErrorKind::domain, "hypothesis1_report: requires x >= y");
    SmoothCounts r;
    r.x = x;
    r.y = y;
    r.psi = psi_count(sieve, x, y, opts);
    r.pi_smooth = pi_smooth_shifted(sieve, x, y, opts);
    r.pi_x = sieve.prime_count(x);
    r.lhs = static_cast<double>(r.psi) / x;
    r.rhs = r.pi_x ? static_cast<double>(r.pi_smooth) / static_cast<double>(r.pi_x) : 0.0;
    if (r.pi_smooth > 0)
        r.ratio = r.lhs / r.rhs;
    return r;
}

/// Phi_k(x, y): m <= x whose k-th phi iterate has no prime factor above y.
inline u64 phi_smooth_count(const FactorSieve& sieve, unsigned k, double x, double y,
                            const ScanOptions& opts = {}) {
    detail::check_y(y, "phi_smooth_count");
    const u64 xf = detail::checked_floor(sieve, x, "phi_smooth_count");
    const u64 yf = floor_to_u64(y);
    return detail::count_range(1, xf + 1, opts, [&](u64 m) {
        u64 v = m;
        for (unsigned i = 0; i < k && v > 1; ++i)
            v = phi(sieve.factorize(v));
        return detail::is_smooth(sieve, v, yf);
    });
}

/// Dickman rho on a grid aligned with the integers. The delay equation
/// u rho'(u) = -rho(u - 1) is integrated with the trapezoid rule at steps h
/// and h/2 and combined by Richardson extrapolation.
class DickmanRho {
  public:
    explicit DickmanRho(double u_max, unsigned steps_per_unit = 4096)
        : n_(steps_per_unit), units_(static_cast<unsigned>(std::ceil(std::max(1.0, u_max)))) {
        const auto coarse = integrate(n_);
        const auto fine = integrate(2 * n_);
        table_.resize(coarse.size());
        for (std::size_t i = 0; i < coarse.size(); ++i)
            table_[i] = (4.0L * fine[2 * i] - coarse[i]) / 3.0L;
    }

    double u_max() const { return units_; }

    double operator()(double u) const {
        if (!(u >= 0.0))
            fail(ErrorKind::domain, "dickman_rho: u must be >= 0");
        if (u <= 1.0)
            return 1.0;
        if (u > u_max())
            fail(ErrorKind::out_of_range, "dickman_rho: u beyond table");
        const long double h = 1.0L / n_;
        const auto i = static_cast<std::size_t>(std::floor(u * n_));
        const long double t0 = static_cast<long double>(i) * h;
        if (u == t0)
            return static_cast<double>(table_[i]);
        // one trapezoid step from the grid point below, rho(t - 1) interpolated
        const std::size_t lag = i - n_;
        const long double frac = (u - t0) / h;
        const long double delayed = table_[lag] + frac * (table_[lag + 1] - table_[lag]);
        return static_cast<double>(table_[i] - 0.5L * (u - t0) * (table_[lag] / t0 + delayed / u));
    }

  private:
    std::vector<long double> integrate(unsigned n) const {
        const std::size_t total = static_cast<std::size_t>(units_) * n;
        std::vector<long double> r(total + 1, 1.0L);
        const long double h = 1.0L / n;
        for (std::size_t i = n; i < total; ++i) {
            const long double t0 = static_cast<long double>(i) * h;
            const long double t1 = static_cast<long double>(i + 1) * h;
            r[i + 1] = r[i] - 0.5L * h * (r[i - n] / t0 + r[i + 1 - n] / t1);
        }
        return r;
    }

    unsigned n_;
    unsigned units_;
    std::vector<long double> table_;
};

/// rho(u); absolute error below 1e-17, relative error near 1e-8 at u = 10.
inline double dickman_rho(double u) {
    if (!(u >= 0.0))
        fail(ErrorKind::domain, "dickman_rho: u must be >= 0");
    if (u <= 1.0)
        return 1.0;
    static const DickmanRho shared(32.0);
    if (u <= shared.u_max())
        return shared(u);
    return DickmanRho(u)(u);
}

/// k-fold natural log; every intermediate argument must be > 0.
inline double iterated_log(unsigned k, double u) {
    if (k == 0)
        fail(ErrorKind::domain, "iterated_log: k must be >= 1");
    double v = u;
    for (unsigned i = 1; i <= k; ++i) {
        if (!(v > 0.0))
            fail(ErrorKind::domain, "iterated_log: log_" + std::to_string(i) +
                                        " undefined (argument " + std::to_string(v) + " <= 0)");
        v = std::log(v);
    }
    return v;
}

inline constexpr std::string_view asymptotic_label =
    "asymptotic main term with o(1) set to 0; not a numerical prediction";

/// Main terms of the Phi_k densities:
///   k = 0: (e / (u log u))^u
///   k >= 1: (1 / (log_k u * log_{k+1} u))^u
inline double rho_k_asymptotic(unsigned k, double u) {
    const unsigned inner = k == 0 ? 1 : k;
    double a = iterated_log(inner, u);
    if (!(a > 0.0))
        fail(ErrorKind::domain,
             "rho_k_asymptotic: log_" + std::to_string(inner) + "(u) = " + std::to_string(a) +
                 " is not positive");
    if (k == 0)
        return std::pow(std::exp(1.0) / (u * a), u);
    if (!(std::log(a) > 0.0))
        fail(ErrorKind::domain, "rho_k_asymptotic: log_" + std::to_string(k + 1) +
                                    "(u) is not positive");
    return std::pow(1.0 / (a * std::log(a)), u);
}

struct Theorem2Row {
    double u;
    double y;
    u64 phi_k;
    double density;
    double dickman;
    std::optional<double> asymptotic;
};

/// Phi_k(x, x^(1/u))/x against the asymptotic main term for each u.
inline std::vector<Theorem2Row> theorem2_trend(const FactorSieve& sieve, unsigned k, double x,
                                               const std::vector<double>& us,
                                               const ScanOptions& opts = {}) {
    std::vector<Theorem2Row> rows;
    for (double u : us) {
        if (!(u >= 1.0))
            fail(ErrorKind::domain, "theorem2_trend: u must be >= 1");
        const double y = std::pow(x, 1.0 / u);
        Theorem2Row row{u, y, phi_smooth_count(sieve, k, x, y, opts), 0.0, dickman_rho(u), {}};
        row.density = static_cast<double>(row.phi_k) / x;
        try {
            row.asymptotic = rho_k_asymptotic(k, u);
        } catch (const Error&) {
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace phisig
