#pragma once

#include <cmath>
#include <string>

#include "error.hpp"

namespace phisig {

/// Neumaier compensated sum.
class CompensatedSum {
  public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::fabs(sum_) >= std::fabs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }

    void merge(const CompensatedSum& other) {
        add(other.sum_);
        add(other.comp_);
    }

    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Gamma function for s > 0 (libm tgamma, accurate to a few ulp).
inline double gamma_fn(double s) {
    if (!(s > 0.0))
        fail(ErrorKind::domain, "gamma_fn: argument must be > 0, got " + std::to_string(s));
    return std::tgamma(s);
}

} // namespace phisig
