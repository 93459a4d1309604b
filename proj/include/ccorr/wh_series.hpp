#pragma once

#include <cstddef>
#include <span>

#include "ccorr/levy_models.hpp"
#include "ccorr/regions.hpp"

namespace ccorr {

/// Truncation policy for q-weighted series of probabilities.
struct SeriesConfig {
    double tol = 1e-12;
    std::size_t n_max = 200'000'000;

    void validate() const;
};

/// Certified-length truncation index N = ceil(ln(tol (1-q)) / ln q), capped
/// at cfg.n_max.
[[nodiscard]] std::size_t series_terms(double q, const SeriesConfig& cfg);

/// Tail of sum_{n>N} q^n / n * p_n for p_n in [0, 1].
[[nodiscard]] double series_tail_bound(double q, std::size_t n_terms) noexcept;

struct SeriesValue {
    double value = 0.0;
    std::size_t n_terms = 0;
    /// Certified bound on |value - infinite series value|.
    double tail_bound = 0.0;
};

/// sum_{n>=1} q^n / n * P^0{X_{ns} in H}, with H = region - gamma.
[[nodiscard]] SeriesValue log_sum(const LevyModel& model, const HalfSpaceRegion& region, double s,
                                  double q, const SeriesConfig& cfg = {});

/// First-entry transform sum_n q^n P^0{first entry into H at step n},
/// evaluated as 1 - exp(-log_sum).
[[nodiscard]] SeriesValue xi(const LevyModel& model, const HalfSpaceRegion& region, double s,
                             double q, const SeriesConfig& cfg = {});

/// Continuity correction at the anchor gamma: exp(-log_sum) at q = e^{-rs}.
/// Defined for Black-Scholes baskets and the one-dimensional Merton model.
[[nodiscard]] SeriesValue rho(const LevyModel& model, const HalfSpaceRegion& region, double s,
                              const SeriesConfig& cfg = {});

/// Law of alpha.X_t for a Black-Scholes basket: N(drift t, vol^2 t).
struct ReducedModel {
    double drift = 0.0;
    double vol = 0.0;
};

[[nodiscard]] ReducedModel reduce_dim(std::span<const double> alpha, std::span<const double> mu,
                                      std::span<const double> sigma);

/// Closed-form bracket lower <= rho(s) <= upper for a reduced Gaussian
/// model with drift m = alpha.mu and volatility delta.
struct RhoBounds {
    double lower = 0.0;
    double upper = 0.0;
};

[[nodiscard]] RhoBounds rho_bounds(double m, double delta, double r, double s);

}  // namespace ccorr
