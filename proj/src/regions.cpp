#include "ccorr/regions.hpp"

#include <algorithm>
#include <cmath>

#include "ccorr/error.hpp"

namespace ccorr {

HalfSpaceRegion::HalfSpaceRegion(Point gamma, Point alpha, bool strict)
    : gamma_(std::move(gamma)), alpha_(std::move(alpha)), strict_(strict) {
    require(!alpha_.empty(), ErrorKind::InvalidRegion, "alpha: normal vector is empty");
    require(gamma_.size() == alpha_.size(), ErrorKind::InvalidRegion,
            "gamma: dimension differs from alpha");
    const bool nonzero = std::any_of(alpha_.begin(), alpha_.end(), [](double a) { return a != 0.0; });
    require(nonzero, ErrorKind::InvalidRegion, "alpha: normal vector must be nonzero");
    for (double v : alpha_) {
        require(std::isfinite(v), ErrorKind::InvalidRegion, "alpha: entries must be finite");
    }
    for (double v : gamma_) {
        require(std::isfinite(v), ErrorKind::InvalidRegion, "gamma: entries must be finite");
    }
}

double HalfSpaceRegion::functional(std::span<const double> x) const noexcept {
    double acc = 0.0;
    for (std::size_t i = 0; i < alpha_.size(); ++i) {
        acc += alpha_[i] * (x[i] - gamma_[i]);
    }
    return acc;
}

bool HalfSpaceRegion::contains(std::span<const double> x) const noexcept {
    const double f = functional(x);
    return strict_ ? f < 0.0 : f <= 0.0;
}

HalfSpaceRegion HalfSpaceRegion::translated() const {
    return HalfSpaceRegion(Point(alpha_.size(), 0.0), alpha_, strict_);
}

bool plus_closed_check(const Membership& member, std::span<const PointPair> samples) {
    Point sum;
    for (const auto& [a, b] : samples) {
        const bool in_a = member(a);
        const bool in_b = member(b);
        if (in_a != in_b) {
            continue;
        }
        sum.resize(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            sum[i] = a[i] + b[i];
        }
        if (member(sum) != in_a) {
            return false;
        }
    }
    return true;
}

bool plus_closed_check(const HalfSpaceRegion& region, std::span<const PointPair> samples) {
    return plus_closed_check([&region](std::span<const double> x) { return region.contains(x); },
                             samples);
}

std::optional<std::size_t> first_entry_step(const HalfSpaceRegion& region, std::span<const Point> path) {
    for (std::size_t n = 0; n < path.size(); ++n) {
        if (region.contains(path[n])) {
            return n + 1;
        }
    }
    return std::nullopt;
}

Payoff::Payoff(Kind kind, std::optional<HalfSpaceRegion> mask)
    : kind_(std::move(kind)), mask_(std::move(mask)) {
    if (const auto* put = std::get_if<PutPayoff>(&kind_)) {
        require(std::isfinite(put->strike) && put->strike >= 0.0, ErrorKind::InvalidPayoff,
                "K: strike must be finite and nonnegative");
        sup_ = put->strike;
    } else if (const auto* c = std::get_if<ConstantPayoff>(&kind_)) {
        require(std::isfinite(c->value) && c->value >= 0.0, ErrorKind::InvalidPayoff,
                "c: constant payoff must be finite and nonnegative");
        sup_ = c->value;
    } else {
        const auto& t = std::get<TablePayoff>(kind_);
        require(!t.x.empty() && t.x.size() == t.value.size(), ErrorKind::InvalidPayoff,
                "table: needs matching nonempty abscissae and values");
        require(std::is_sorted(t.x.begin(), t.x.end()), ErrorKind::InvalidPayoff,
                "table: abscissae must be increasing");
        for (double v : t.value) {
            require(std::isfinite(v) && v >= 0.0, ErrorKind::InvalidPayoff,
                    "table: values must be finite and nonnegative");
            sup_ = std::max(sup_, v);
        }
    }
}

double Payoff::operator()(std::span<const double> x) const {
    if (mask_ && !mask_->contains(x)) {
        return 0.0;
    }
    if (const auto* put = std::get_if<PutPayoff>(&kind_)) {
        double basket = 0.0;
        for (double xi : x) {
            basket += std::exp(xi);
        }
        basket /= static_cast<double>(x.size());
        return std::max(put->strike - basket, 0.0);
    }
    if (const auto* c = std::get_if<ConstantPayoff>(&kind_)) {
        return c->value;
    }
    const auto& t = std::get<TablePayoff>(kind_);
    const double x0 = x[0];
    if (x0 <= t.x.front()) {
        return t.value.front();
    }
    if (x0 >= t.x.back()) {
        return t.value.back();
    }
    const auto it = std::upper_bound(t.x.begin(), t.x.end(), x0);
    const auto hi = static_cast<std::size_t>(it - t.x.begin());
    const std::size_t lo = hi - 1;
    const double w = (x0 - t.x[lo]) / (t.x[hi] - t.x[lo]);
    return (1.0 - w) * t.value[lo] + w * t.value[hi];
}

}  // namespace ccorr
