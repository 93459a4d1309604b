#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ccorr/error.hpp"
#include "ccorr/wh_series.hpp"

using namespace ccorr;

namespace {

const HalfSpaceRegion kBelow({0.0}, {1.0});

}  // namespace

TEST(SeriesTerms, LengthAndTailCertified) {
    for (double q : {0.1, 0.5, 0.9, 0.999}) {
        const SeriesConfig cfg{1e-12};
        const std::size_t n = series_terms(q, cfg);
        EXPECT_EQ(static_cast<double>(n), std::ceil(std::log(1e-12 * (1 - q)) / std::log(q)));
        double tail = 0.0;
        for (std::size_t k = n + 1; k < n + 200000; ++k) {
            tail += std::pow(q, static_cast<double>(k)) / static_cast<double>(k);
        }
        EXPECT_LE(tail, series_tail_bound(q, n) * (1 + 1e-12));
        EXPECT_LE(series_tail_bound(q, n), 1e-12);
    }
}

TEST(SeriesTerms, RejectsBadQ) {
    EXPECT_THROW((void)series_terms(1.0, {}), Error);
    EXPECT_THROW((void)series_terms(0.0, {}), Error);
}

TEST(Rho, DriftlessClosedForm) {
    const double r = 0.05;
    const LevyModel bs = BlackScholesBasket({std::sqrt(2.0 * r)}, r);
    for (double s : {0.1, 0.01, 0.001}) {
        const SeriesValue v = rho(bs, kBelow, s);
        EXPECT_NEAR(v.value, std::sqrt(-std::expm1(-r * s)), 1e-10);
        EXPECT_LE(v.tail_bound, 1e-10);
    }
}

TEST(Xi, ComplementsRhoAndMatchesFeller) {
    const LevyModel bs = BlackScholesBasket({1.0}, 0.95);
    const double s = 0.1;
    const double q = std::exp(-0.95 * s);
    const double x = xi(bs, kBelow, s, q).value;
    EXPECT_NEAR(x + rho(bs, kBelow, s).value, 1.0, 1e-14);
    // direct sum of q^n / n * P{X_ns < 0}, X_t ~ N(0.45 t, t)
    double ls = 0.0;
    for (int n = 1; n < 20000; ++n) {
        ls += std::pow(q, n) / n * 0.5 * std::erfc(0.45 * std::sqrt(n * s) / std::numbers::sqrt2);
    }
    EXPECT_NEAR(x, 1.0 - std::exp(-ls), 1e-12);
}

TEST(Xi, RandomWalkClosedForm) {
    // first passage of the +-1 walk below 0: (1 - sqrt(1 - q^2)) / q
    const LevyModel walk = LatticeWalk{1, {{{-1}, 0.5}, {{1}, 0.5}}, 0.0};
    for (double q : {0.3, 0.5, 0.9}) {
        EXPECT_NEAR(xi(walk, kBelow, 1.0, q).value, (1.0 - std::sqrt(1.0 - q * q)) / q, 1e-11);
    }
}

TEST(ReduceDim, ThreeAssetIdentity) {
    const std::vector<double> alpha{1.0, 2.0, -1.0};
    const BlackScholesBasket basket({0.2, 0.3, 0.25}, 0.05);
    const ReducedModel red = reduce_dim(alpha, basket.mu(), basket.sigma());
    const double ratio = red.drift / red.vol;
    const double sigma1 = -ratio + std::sqrt(ratio * ratio + 2.0 * basket.r());
    const LevyModel one_d = BlackScholesBasket({sigma1}, basket.r());
    const HalfSpaceRegion g3({0.0, 0.0, 0.0}, alpha);
    for (double s : {0.1, 0.01}) {
        EXPECT_NEAR(rho(basket, g3, s).value, rho(one_d, kBelow, s).value, 1e-12);
    }
}

TEST(ReduceDim, ProjectionLawBySampling) {
    const std::vector<double> alpha{1.0, 2.0, -1.0};
    const BlackScholesBasket basket({0.2, 0.3, 0.25}, 0.05);
    const ReducedModel red = reduce_dim(alpha, basket.mu(), basket.sigma());
    CounterRng rng(3, 0);
    const int n = 100000;
    const double s = 0.5;
    double m1 = 0.0;
    double m2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto x = sample_increment(basket, s, rng);
        const double p = alpha[0] * x[0] + alpha[1] * x[1] + alpha[2] * x[2];
        m1 += p;
        m2 += p * p;
    }
    m1 /= n;
    const double var = m2 / n - m1 * m1;
    EXPECT_NEAR(m1, red.drift * s, 4.0 * red.vol * std::sqrt(s / n));
    EXPECT_NEAR(var, red.vol * red.vol * s, 4.0 * red.vol * red.vol * s * std::sqrt(2.0 / n));
}

TEST(RhoBounds, DriftlessIsTight) {
    const RhoBounds b = rho_bounds(0.0, 1.0, 0.05, 0.1);
    EXPECT_NEAR(b.lower, std::sqrt(-std::expm1(-0.005)), 1e-15);
    EXPECT_GE(b.upper, b.lower);
}

TEST(RhoBounds, RandomParametersBracket) {
    std::mt19937_64 gen(42);
    std::uniform_real_distribution<double> usig(0.1, 1.0);
    std::uniform_real_distribution<double> ur(0.01, 2.0);
    std::uniform_real_distribution<double> ulogs(-4.0, 0.0);
    int tested = 0;
    while (tested < 200) {
        const double sigma = usig(gen);
        const double r = ur(gen);
        const double s = std::pow(10.0, ulogs(gen));
        const BlackScholesBasket bs({sigma}, r);
        const double m = bs.mu()[0];
        const double k = m * m / (2.0 * sigma * sigma);
        if (m < 0.0 && r <= k) {
            EXPECT_THROW((void)rho_bounds(m, sigma, r, s), Error);
            continue;
        }
        const RhoBounds b = rho_bounds(m, sigma, r, s);
        const double v = rho(bs, kBelow, s).value;
        EXPECT_LE(b.lower, v * (1 + 1e-12)) << "sigma=" << sigma << " r=" << r << " s=" << s;
        EXPECT_GE(b.upper, v * (1 - 1e-12)) << "sigma=" << sigma << " r=" << r << " s=" << s;
        ++tested;
    }
}

TEST(Rho, MertonCalibrated) {
    const auto m = MertonJumpDiffusion::calibrated_model(2.0, 0.0, 1.0);
    const SeriesValue a = rho(m, kBelow, 0.01);
    EXPECT_GT(a.value, 0.0);
    EXPECT_LT(a.value, 1.0);
    EXPECT_LE(a.tail_bound, 1e-9);
    EXPECT_GT(rho(m, kBelow, 0.1).value, a.value);
}

TEST(Rho, LatticeNotImplemented) {
    const LevyModel walk = LatticeWalk{1, {{{-1}, 0.5}, {{1}, 0.5}}, 0.1};
    try {
        (void)rho(walk, kBelow, 1.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotImplemented);
    }
}
