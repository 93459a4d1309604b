#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace ccorr {

using Point = std::vector<double>;

/// G = gamma + {x : alpha.x < 0}, or <= 0 when not strict.
class HalfSpaceRegion {
public:
    HalfSpaceRegion(Point gamma, Point alpha, bool strict = true);

    [[nodiscard]] std::size_t dim() const noexcept { return alpha_.size(); }
    [[nodiscard]] const Point& gamma() const noexcept { return gamma_; }
    [[nodiscard]] const Point& alpha() const noexcept { return alpha_; }
    [[nodiscard]] bool strict() const noexcept { return strict_; }

    /// alpha . (x - gamma)
    [[nodiscard]] double functional(std::span<const double> x) const noexcept;
    [[nodiscard]] bool contains(std::span<const double> x) const noexcept;

    /// H = G - gamma.
    [[nodiscard]] HalfSpaceRegion translated() const;

private:
    Point gamma_;
    Point alpha_;
    bool strict_;
};

[[nodiscard]] inline bool contains(const HalfSpaceRegion& region, std::span<const double> x) noexcept {
    return region.contains(x);
}

using Membership = std::function<bool(std::span<const double>)>;
using PointPair = std::pair<Point, Point>;

/// True iff every sampled pair with both points in the set (resp. both in
/// its complement) has its sum in the set (resp. the complement).
[[nodiscard]] bool plus_closed_check(const Membership& member, std::span<const PointPair> samples);
[[nodiscard]] bool plus_closed_check(const HalfSpaceRegion& region, std::span<const PointPair> samples);

/// Smallest n >= 1 with path[n-1] in the region (path holds X_s, X_2s, ...).
[[nodiscard]] std::optional<std::size_t> first_entry_step(const HalfSpaceRegion& region,
                                                          std::span<const Point> path);

struct PutPayoff {
    double strike = 1.0;
};
struct ConstantPayoff {
    double value = 1.0;
};
/// Piecewise-linear table in the first coordinate, flat outside.
struct TablePayoff {
    std::vector<double> x;
    std::vector<double> value;
};

/// Bounded nonnegative payoff, optionally masked to a region (g * chi_G).
/// The put acts on the equally weighted basket mean of exp(x_i).
class Payoff {
public:
    using Kind = std::variant<PutPayoff, ConstantPayoff, TablePayoff>;

    explicit Payoff(Kind kind, std::optional<HalfSpaceRegion> mask = std::nullopt);

    [[nodiscard]] double operator()(std::span<const double> x) const;
    /// Finite upper bound of the payoff (K for a put).
    [[nodiscard]] double sup() const noexcept { return sup_; }
    [[nodiscard]] const Kind& kind() const noexcept { return kind_; }
    [[nodiscard]] const std::optional<HalfSpaceRegion>& mask() const noexcept { return mask_; }

private:
    Kind kind_;
    std::optional<HalfSpaceRegion> mask_;
    double sup_ = 0.0;
};

}  // namespace ccorr
