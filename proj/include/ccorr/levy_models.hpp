#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ccorr/rng.hpp"

namespace ccorr {

/// d-dimensional Black-Scholes basket of log-prices with independent
/// components and risk-neutral drift mu_i = r - sigma_i^2 / 2.
class BlackScholesBasket {
public:
    BlackScholesBasket(std::vector<double> sigma, double r);

    [[nodiscard]] std::size_t dim() const noexcept { return sigma_.size(); }
    [[nodiscard]] const std::vector<double>& sigma() const noexcept { return sigma_; }
    [[nodiscard]] const std::vector<double>& mu() const noexcept { return mu_; }
    [[nodiscard]] double r() const noexcept { return r_; }

private:
    std::vector<double> sigma_;
    std::vector<double> mu_;
    double r_;
};

/// X_t = X_0 + alpha t + beta Z_t + sigma B_t with Z Poisson of intensity
/// jump_rate.
struct MertonJumpDiffusion {
    double alpha = 0.0;
    double beta = 1.0;
    double sigma = 1.0;
    double r = 1.0;
    double jump_rate = 1.0;
    /// Set when sigma came from merton_calibrate_sigma (residual <= 1e-12).
    bool calibrated = false;

    /// Builds the model with sigma solving the martingale condition.
    [[nodiscard]] static MertonJumpDiffusion calibrated_model(double r, double alpha, double beta,
                                                              double jump_rate = 1.0);

    /// E[exp(X_1 - r)] - 1 in closed form.
    [[nodiscard]] double martingale_residual() const noexcept;
    void validate() const;
};

struct LatticeStep {
    std::vector<std::int64_t> point;
    double prob = 0.0;
};

/// Random walk on Z^d; one walk step per exercise date.  `r` is only
/// needed when the walk is discounted by simulation.
struct LatticeWalk {
    std::size_t dim = 1;
    std::vector<LatticeStep> steps;
    double r = 0.0;

    void validate() const;
};

using LevyModel = std::variant<BlackScholesBasket, MertonJumpDiffusion, LatticeWalk>;

[[nodiscard]] std::size_t model_dim(const LevyModel& model) noexcept;
/// Discount rate of the model; 0 for a lattice walk without one.
[[nodiscard]] double model_rate(const LevyModel& model) noexcept;
[[nodiscard]] std::string model_name(const LevyModel& model);
[[nodiscard]] bool is_gaussian(const LevyModel& model) noexcept;

/// r - sigma^2 / 2.
[[nodiscard]] double bs_drift(double r, double sigma);

/// sigma solving exp(alpha - r + sigma^2/2 + jump_rate (e^beta - 1)) = 1.
[[nodiscard]] double merton_calibrate_sigma(double r, double alpha, double beta,
                                            double jump_rate = 1.0);

/// Smallest K such that the Poisson(mean) mass above K is certified <= tol.
[[nodiscard]] std::size_t poisson_truncation(double mean, double tol);

/// P^0{X_t < level} for a one-dimensional model.
[[nodiscard]] double marginal_prob_below(const LevyModel& model, double level, double t,
                                         double tol = 1e-12);

/// One draw of X_s - X_0, written into `out` (size dim).
void sample_increment(const LevyModel& model, double s, CounterRng& rng, std::span<double> out);
[[nodiscard]] std::vector<double> sample_increment(const LevyModel& model, double s,
                                                   CounterRng& rng);

/// Poisson variate by inversion from one uniform.
[[nodiscard]] std::uint64_t poisson_from_uniform(double mean, double u);

}  // namespace ccorr
