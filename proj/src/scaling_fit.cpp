#include "ccorr/scaling_fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ccorr/error.hpp"

namespace ccorr {

PowerFit fit_exponent(std::span<const double> s, std::span<const double> rho) {
    require(s.size() == rho.size(), ErrorKind::InvalidData, "s and rho have different lengths");
    require(s.size() >= 3, ErrorKind::InvalidData, "need at least three points to fit");
    const double n = static_cast<double>(s.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        require(std::isfinite(s[i]) && s[i] > 0.0 && std::isfinite(rho[i]) && rho[i] > 0.0, ErrorKind::InvalidData,
                "fit inputs must be positive and finite");
        mx += std::log(s[i]);
        my += std::log(rho[i]);
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double dx = std::log(s[i]) - mx;
        const double dy = std::log(rho[i]) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    require(sxx > 0.0, ErrorKind::InvalidData, "mesh sizes must not all be equal");
    PowerFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = syy == 0.0 ? 1.0 : std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
    return fit;
}

ExponentBracket regime_bracket(double m, double delta, double r) {
    require(std::isfinite(m) && std::isfinite(delta) && delta > 0.0 && std::isfinite(r) && r > 0.0,
            ErrorKind::InvalidParameter, "regime needs finite m, delta > 0 and r > 0");
    if (m == 0.0) {
        return {0.5, 0.5};
    }
    if (m > 0.0) {
        return {0.5 / std::numbers::sqrt2, 0.5};
    }
    require(r > m * m / (2.0 * delta * delta), ErrorKind::InvalidRegime,
            "negative drift requires r > m^2 / (2 delta^2)");
    return {0.5, 1.0 / std::numbers::sqrt2};
}

ExponentBracket merton_bracket() noexcept { return {0.5 / std::numbers::sqrt2, 0.5}; }

std::vector<double> geometric_grid(double s_max, double factor, std::size_t points) {
    require(std::isfinite(s_max) && s_max > 0.0, ErrorKind::InvalidParameter, "s_max must be positive");
    require(factor > 0.0 && factor < 1.0, ErrorKind::InvalidParameter, "grid factor must lie in (0, 1)");
    require(points >= 1, ErrorKind::InvalidParameter, "grid needs at least one point");
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i) {
        grid[i] = s_max * std::pow(factor, static_cast<double>(i));
    }
    return grid;
}

ScalingReport scaling_report(const LevyModel& model, const HalfSpaceRegion& region, const ScalingConfig& cfg) {
    require(cfg.fit_points >= 3 && cfg.fit_points <= cfg.points, ErrorKind::InvalidParameter,
            "fit_points must lie in [3, points]");
    require(cfg.tolerance >= 0.0, ErrorKind::InvalidParameter, "tolerance must be nonnegative");
    ScalingReport rep;
    rep.tolerance = cfg.tolerance;
    rep.s_grid = geometric_grid(cfg.s_max, cfg.factor, cfg.points);

    const bool gaussian = std::holds_alternative<BlackScholesBasket>(model);
    ReducedModel red;
    const double r = model_rate(model);
    if (gaussian) {
        const auto& bs = std::get<BlackScholesBasket>(model);
        red = reduce_dim(region.alpha(), bs.mu(), bs.sigma());
        rep.bracket = regime_bracket(red.drift, red.vol, r);
    } else {
        require(std::holds_alternative<MertonJumpDiffusion>(model), ErrorKind::NotImplemented,
                "scaling needs a Black-Scholes or Merton model");
        rep.bracket = merton_bracket();
    }
    for (double s : rep.s_grid) {
        rep.rho_values.push_back(rho(model, region, s, cfg.series).value);
        if (gaussian) {
            const RhoBounds b = rho_bounds(red.drift, red.vol, r, s);
            rep.lower.push_back(b.lower);
            rep.upper.push_back(b.upper);
        } else {
            rep.lower.push_back(std::numeric_limits<double>::quiet_NaN());
            rep.upper.push_back(std::numeric_limits<double>::quiet_NaN());
        }
    }
    const std::size_t first = cfg.points - cfg.fit_points;
    rep.fit = fit_exponent(std::span(rep.s_grid).subspan(first), std::span(rep.rho_values).subspan(first));
    rep.within_bracket = rep.fit.slope >= rep.bracket.lo - cfg.tolerance &&
                         rep.fit.slope <= rep.bracket.hi + cfg.tolerance;
    rep.non_polynomial = true;
    for (std::size_t i = 1; i < rep.s_grid.size(); ++i) {
        if (!(rep.rho_values[i] / rep.s_grid[i] > rep.rho_values[i - 1] / rep.s_grid[i - 1])) {
            rep.non_polynomial = false;
        }
    }
    return rep;
}

}  // namespace ccorr
