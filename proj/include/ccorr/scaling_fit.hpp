#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ccorr/levy_models.hpp"
#include "ccorr/regions.hpp"
#include "ccorr/wh_series.hpp"

namespace ccorr {

struct PowerFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

/// Ordinary least squares of ln rho on ln s.
[[nodiscard]] PowerFit fit_exponent(std::span<const double> s, std::span<const double> rho);

struct ExponentBracket {
    double lo = 0.0;
    double hi = 0.0;
};

/// Exponent range of rho(s) for a reduced Gaussian model (drift m,
/// volatility delta, rate r).  Throws InvalidRegime when m < 0 and
/// r <= m^2 / (2 delta^2).
[[nodiscard]] ExponentBracket regime_bracket(double m, double delta, double r);
[[nodiscard]] ExponentBracket merton_bracket() noexcept;

/// Geometric grid s_max, s_max f, ..., strictly decreasing.
[[nodiscard]] std::vector<double> geometric_grid(double s_max, double factor, std::size_t points);

struct ScalingConfig {
    double s_max = 0.1;
    double factor = 0.5;
    std::size_t points = 12;
    /// The fit uses only the smallest `fit_points` meshes.
    std::size_t fit_points = 8;
    double tolerance = 0.03;
    SeriesConfig series{};
};

struct ScalingReport {
    std::vector<double> s_grid;
    std::vector<double> rho_values;
    /// Closed-form bounds; NaN where none are available (Merton).
    std::vector<double> lower;
    std::vector<double> upper;
    PowerFit fit;
    ExponentBracket bracket;
    double tolerance = 0.0;
    bool within_bracket = false;
    /// rho(s) / s increases strictly along the grid.
    bool non_polynomial = false;
};

[[nodiscard]] ScalingReport scaling_report(const LevyModel& model, const HalfSpaceRegion& region,
                                           const ScalingConfig& cfg = {});

}  // namespace ccorr
