#include "ccorr/wh_series.hpp"

#include <cmath>
#include <numbers>

#include "ccorr/error.hpp"
#include "ccorr/lattice.hpp"
#include "ccorr/special.hpp"

namespace ccorr {

void SeriesConfig::validate() const {
    require(tol > 0.0 && std::isfinite(tol), ErrorKind::InvalidParameter, "tol: must be positive");
    require(n_max >= 1, ErrorKind::InvalidParameter, "n_max: must be at least 1");
}

std::size_t series_terms(double q, const SeriesConfig& cfg) {
    cfg.validate();
    require(q > 0.0 && q < 1.0, ErrorKind::InvalidParameter, "q: must lie in (0, 1)");
    const double n = std::ceil(std::log(cfg.tol * (1.0 - q)) / std::log(q));
    if (!(n >= 1.0)) {
        return 1;
    }
    if (n >= static_cast<double>(cfg.n_max)) {
        return cfg.n_max;
    }
    return static_cast<std::size_t>(n);
}

double series_tail_bound(double q, std::size_t n_terms) noexcept {
    const double np1 = static_cast<double>(n_terms) + 1.0;
    return std::exp(np1 * std::log(q)) / (np1 * (1.0 - q));
}

namespace {

/// Poisson-mixture probability P{alpha t + beta K + sigma B_t < 0}.
double merton_prob_below_zero(const MertonJumpDiffusion& m, double t, double tol) {
    const double mean = m.jump_rate * t;
    const std::size_t kmax = poisson_truncation(mean, tol);
    const double sd = m.sigma * std::sqrt(t);
    CompensatedSum acc;
    const bool recursive = mean < 600.0;
    double w = std::exp(-mean);
    for (std::size_t k = 0; k <= kmax; ++k) {
        if (!recursive) {
            w = std::exp(log_poisson_pmf(k, mean));
        }
        const double z = (m.alpha * t + m.beta * static_cast<double>(k)) / sd;
        acc.add(w * 0.5 * std::erfc(z / std::numbers::sqrt2));
        if (recursive) {
            w *= mean / static_cast<double>(k + 1);
        }
    }
    return acc.value();
}

template <class Prob>
SeriesValue weighted_log_series(double q, std::size_t n_terms, Prob&& prob) {
    const double log_q = std::log(q);
    CompensatedSum acc;
    for (std::size_t n = 1; n <= n_terms; ++n) {
        const double nd = static_cast<double>(n);
        acc.add(std::exp(nd * log_q) / nd * prob(n));
    }
    return {acc.value(), n_terms, series_tail_bound(q, n_terms)};
}

}  // namespace

SeriesValue log_sum(const LevyModel& model, const HalfSpaceRegion& region, double s, double q,
                    const SeriesConfig& cfg) {
    require(s > 0.0 && std::isfinite(s), ErrorKind::InvalidParameter, "s: mesh must be positive");
    require(q > 0.0 && q < 1.0, ErrorKind::InvalidParameter, "q: must lie in (0, 1)");
    require(region.dim() == model_dim(model), ErrorKind::InvalidRegion,
            "region dimension differs from model dimension");
    const std::size_t n_terms = series_terms(q, cfg);

    if (const auto* bs = std::get_if<BlackScholesBasket>(&model)) {
        const auto red = reduce_dim(region.alpha(), bs->mu(), bs->sigma());
        // P{N(m t, delta^2 t) < 0} = Phi(-m sqrt(t) / delta)
        const double scale = red.drift / (red.vol * std::numbers::sqrt2);
        return weighted_log_series(q, n_terms, [&](std::size_t n) {
            const double t = static_cast<double>(n) * s;
            return 0.5 * std::erfc(scale * std::sqrt(t));
        });
    }
    if (const auto* mj = std::get_if<MertonJumpDiffusion>(&model)) {
        mj->validate();
        const bool below = region.alpha()[0] > 0.0;
        auto out = weighted_log_series(q, n_terms, [&](std::size_t n) {
            const double p = merton_prob_below_zero(*mj, static_cast<double>(n) * s, cfg.tol);
            return below ? p : 1.0 - p;
        });
        // each probability carries at most tol of Poisson truncation error
        out.tail_bound += cfg.tol * -std::log1p(-q);
        return out;
    }
    const auto& walk = std::get<LatticeWalk>(model);
    const auto masses = lattice_halfspace_masses(walk, region, n_terms);
    return weighted_log_series(q, n_terms, [&](std::size_t n) { return masses[n]; });
}

SeriesValue xi(const LevyModel& model, const HalfSpaceRegion& region, double s, double q,
               const SeriesConfig& cfg) {
    const auto ls = log_sum(model, region, s, q, cfg);
    return {-std::expm1(-ls.value), ls.n_terms, ls.tail_bound};
}

SeriesValue rho(const LevyModel& model, const HalfSpaceRegion& region, double s,
                const SeriesConfig& cfg) {
    require(!std::holds_alternative<LatticeWalk>(model), ErrorKind::NotImplemented,
            "rho: defined for Black-Scholes baskets and the Merton model only");
    require(s > 0.0 && std::isfinite(s), ErrorKind::InvalidParameter, "s: mesh must be positive");
    const double q = std::exp(-model_rate(model) * s);
    const auto ls = log_sum(model, region, s, q, cfg);
    const double value = std::exp(-ls.value);
    return {value, ls.n_terms, value * std::expm1(ls.tail_bound)};
}

ReducedModel reduce_dim(std::span<const double> alpha, std::span<const double> mu,
                        std::span<const double> sigma) {
    require(alpha.size() == mu.size() && alpha.size() == sigma.size(), ErrorKind::Shape,
            "reduce_dim: alpha, mu and sigma must have equal length");
    double drift = 0.0;
    double var = 0.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        drift += alpha[i] * mu[i];
        var += (alpha[i] * sigma[i]) * (alpha[i] * sigma[i]);
    }
    require(var > 0.0, ErrorKind::InvalidParameter, "alpha: normal vector must be nonzero");
    return {drift, std::sqrt(var)};
}

RhoBounds rho_bounds(double m, double delta, double r, double s) {
    require(delta > 0.0 && std::isfinite(delta), ErrorKind::InvalidParameter, "delta: must be positive");
    require(r > 0.0 && std::isfinite(r), ErrorKind::InvalidParameter, "r: must be positive");
    require(s > 0.0 && std::isfinite(s), ErrorKind::InvalidParameter, "s: mesh must be positive");
    require(std::isfinite(m), ErrorKind::InvalidParameter, "drift must be finite");
    const double k = m * m / (2.0 * delta * delta);
    auto base = [s](double rate) { return -std::expm1(-s * rate); };
    if (m >= 0.0) {
        // P in [e^{-2k t}/(2 sqrt 2), e^{-k t}/2]
        return {std::sqrt(base(r + k)), std::pow(base(r + 2.0 * k), 1.0 / (2.0 * std::numbers::sqrt2))};
    }
    require(r > k, ErrorKind::InvalidRegime, "rho_bounds: negative drift needs r > m^2 / (2 delta^2)");
    // P in [e^{-k t}/2, e^{k t}/sqrt 2]
    return {std::pow(base(r - k), 1.0 / std::numbers::sqrt2), std::sqrt(base(r + k))};
}

}  // namespace ccorr
