#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>

namespace ccorr {

/// Standard normal CDF through erfc, accurate to a few ulp in the tails.
inline double normal_cdf(double x) noexcept {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

inline double log_poisson_pmf(std::size_t k, double mean) noexcept {
    if (mean == 0.0) {
        return k == 0 ? 0.0 : -INFINITY;
    }
    const double kd = static_cast<double>(k);
    return -mean + kd * std::log(mean) - std::lgamma(kd + 1.0);
}

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace ccorr
