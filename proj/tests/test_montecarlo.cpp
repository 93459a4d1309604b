#include <gtest/gtest.h>

#include <cmath>

#include "ccorr/error.hpp"
#include "ccorr/montecarlo.hpp"
#include "ccorr/wh_series.hpp"

using namespace ccorr;

namespace {

const HalfSpaceRegion kBelow({0.0}, {1.0});

LevyModel driftless(double r) { return BlackScholesBasket({std::sqrt(2.0 * r)}, r); }

}  // namespace

TEST(Horizon, Formula) {
    EXPECT_EQ(horizon_steps(0.05, 0.1, 1e-10), static_cast<std::size_t>(std::ceil(std::log(1e10) / 0.005)));
    EXPECT_THROW((void)horizon_steps(0.0, 0.1, 1e-10), Error);
    EXPECT_THROW((void)horizon_steps(1e-12, 1e-6, 1e-10), Error);
}

TEST(Xi, DriftlessClosedForm) {
    const McConfig cfg{};
    const auto est = estimate_xi(driftless(0.05), kBelow, 0.1, 100000, cfg);
    const double exact = 1.0 - std::sqrt(-std::expm1(-0.005));
    EXPECT_NEAR(est.value, exact, 4.0 * est.std_error + est.truncation_bias_bound);
    EXPECT_GT(est.std_error, 0.0);
    EXPECT_EQ(est.n_paths, 100000u);
    EXPECT_LE(est.truncation_bias_bound, 1e-10);
}

TEST(Xi, LatticeMatchesClosedForm) {
    const LevyModel walk = LatticeWalk{1, {{{-1}, 0.5}, {{1}, 0.5}}, std::log(2.0)};
    const auto est = estimate_xi(walk, kBelow, 1.0, 40000);
    EXPECT_NEAR(est.value, 2.0 - std::sqrt(3.0), 4.0 * est.std_error);
}

TEST(Xi, LargeRateKillsValue) {
    const auto est = estimate_xi(BlackScholesBasket({1.0}, 200.0), kBelow, 0.1, 1000);
    EXPECT_LT(est.value, 1e-8);
}

TEST(Determinism, IndependentOfThreadCount) {
    McConfig one{};
    one.threads = 1;
    McConfig four{};
    four.threads = 4;
    const LevyModel bs = BlackScholesBasket({1.0}, 0.95);
    const auto a = estimate_xi(bs, kBelow, 0.1, 20000, one);
    const auto b = estimate_xi(bs, kBelow, 0.1, 20000, four);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.std_error, b.std_error);
    const auto c = estimate_xi(bs, kBelow, 0.1, 20000, one);
    EXPECT_EQ(a.value, c.value);
    McConfig other{};
    other.seed = 99;
    EXPECT_NE(estimate_xi(bs, kBelow, 0.1, 20000, other).value, a.value);
}

TEST(Price, StartInsideIsPayoff) {
    const Payoff put(PutPayoff{1.0});
    const Point x0{-0.5};
    const auto est = estimate_price(driftless(0.05), kBelow, put, 0.1, x0, 100);
    EXPECT_DOUBLE_EQ(est.value, 1.0 - std::exp(-0.5));
    EXPECT_EQ(est.std_error, 0.0);
}

TEST(Price, ConstantPayoffIsScaledXi) {
    const double r = 0.95;
    const LevyModel bs = BlackScholesBasket({1.0}, r);
    const Payoff k(ConstantPayoff{2.5});
    const Point x0{0.0};
    const auto est = estimate_price(bs, kBelow, k, 0.1, x0, 100000);
    const double x = xi(bs, kBelow, 0.1, std::exp(-r * 0.1)).value;
    EXPECT_NEAR(est.value, 2.5 * x, 4.0 * est.std_error);
    EXPECT_LE(est.value, 2.5 + 4.0 * est.std_error);
    EXPECT_NEAR(est.truncation_bias_bound, 2.5 * std::exp(-r * 0.1 * est.horizon_steps), 1e-20);
}

TEST(Price, RejectsShapeMismatch) {
    const Payoff k(ConstantPayoff{1.0});
    const Point x0{0.0, 0.0};
    EXPECT_THROW((void)estimate_price(driftless(0.05), kBelow, k, 0.1, x0, 100), Error);
}

TEST(Coupled, RefinementOneIsZero) {
    const auto est = estimate_rho_coupled(driftless(0.05), kBelow, 0.1, 1, 1000);
    EXPECT_EQ(est.estimate.value, 0.0);
    EXPECT_EQ(est.estimate.std_error, 0.0);
    EXPECT_THROW((void)estimate_rho_coupled(driftless(0.05), kBelow, 0.1, 0, 1000), Error);
}

TEST(Coupled, NestedMeshesAreMonotone) {
    double prev = 0.0;
    for (std::size_t m : {2u, 4u, 16u, 64u}) {
        const auto est = estimate_rho_coupled(driftless(0.5), kBelow, 0.1, m, 4000);
        EXPECT_EQ(est.order_violations, 0u);
        EXPECT_GE(est.estimate.value, prev);
        prev = est.estimate.value;
    }
    EXPECT_LT(prev, rho(driftless(0.5), kBelow, 0.1).value + 0.01);
}

TEST(Coupled, GeneralRefinementAndMerton) {
    const auto bs = estimate_rho_coupled(driftless(0.5), kBelow, 0.1, 5, 4000);
    EXPECT_EQ(bs.order_violations, 0u);
    EXPECT_GT(bs.estimate.value, 0.0);
    const LevyModel mj = MertonJumpDiffusion::calibrated_model(2.0, 0.0, 1.0);
    const auto a = estimate_rho_coupled(mj, kBelow, 0.1, 8, 4000);
    const auto b = estimate_rho_coupled(mj, kBelow, 0.1, 32, 4000);
    EXPECT_EQ(a.order_violations + b.order_violations, 0u);
    EXPECT_GE(b.estimate.value, a.estimate.value);
}

TEST(Coupled, LatticeNotSupported) {
    const LevyModel walk = LatticeWalk{1, {{{-1}, 0.5}, {{1}, 0.5}}, 0.1};
    EXPECT_THROW((void)estimate_rho_coupled(walk, kBelow, 1.0, 2, 100), Error);
}
