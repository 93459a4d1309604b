#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "ccorr/simd/kernels.hpp"

using namespace ccorr::simd;

namespace {

std::vector<double> random_vec(std::size_t n, std::mt19937_64& gen) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) {
        x = u(gen);
    }
    return v;
}

class SimdEquivalence : public ::testing::Test {
protected:
    void SetUp() override {
        vec_ = avx2_kernels();
        if (vec_ == nullptr) {
            GTEST_SKIP() << "AVX2 not available";
        }
    }
    const KernelTable& ref_ = scalar_kernels();
    const KernelTable* vec_ = nullptr;
    std::mt19937_64 gen_{123};
};

}  // namespace

TEST_F(SimdEquivalence, Correlate) {
    for (std::size_t n_out : {1u, 3u, 4u, 7u, 64u, 301u}) {
        for (std::size_t n_taps : {1u, 2u, 5u, 121u}) {
            const auto in = random_vec(n_out + n_taps - 1, gen_);
            const auto taps = random_vec(n_taps, gen_);
            std::vector<double> a(n_out);
            std::vector<double> b(n_out);
            ref_.correlate(in.data(), n_out, taps.data(), n_taps, a.data());
            vec_->correlate(in.data(), n_out, taps.data(), n_taps, b.data());
            double scale = 0.0;
            for (double t : taps) {
                scale += std::fabs(t);
            }
            for (std::size_t i = 0; i < n_out; ++i) {
                EXPECT_NEAR(a[i], b[i], 1e-14 * scale) << n_out << " " << n_taps << " " << i;
            }
        }
    }
}

TEST_F(SimdEquivalence, ElementwiseOps) {
    for (std::size_t n : {0u, 1u, 5u, 8u, 1023u}) {
        const auto g = random_vec(n, gen_);
        const auto c = random_vec(n, gen_);
        const auto term = random_vec(n, gen_);
        std::vector<double> mask(n);
        for (std::size_t i = 0; i < n; ++i) {
            mask[i] = (i % 3 == 0) ? 0.0 : 1.0;
        }

        auto u1 = random_vec(n, gen_);
        auto u2 = u1;
        EXPECT_EQ(ref_.max_update(u1.data(), g.data(), c.data(), n), vec_->max_update(u2.data(), g.data(), c.data(), n));
        EXPECT_EQ(u1, u2);

        auto a1 = g;
        auto a2 = g;
        EXPECT_EQ(ref_.accumulate(a1.data(), term.data(), n), vec_->accumulate(a2.data(), term.data(), n));
        EXPECT_EQ(a1, a2);

        auto m1 = c;
        auto m2 = c;
        ref_.apply_mask(m1.data(), mask.data(), n);
        vec_->apply_mask(m2.data(), mask.data(), n);
        EXPECT_EQ(m1, m2);

        EXPECT_EQ(ref_.max_abs(g.data(), n), vec_->max_abs(g.data(), n));
        EXPECT_EQ(ref_.max_abs_diff(g.data(), c.data(), n), vec_->max_abs_diff(g.data(), c.data(), n));
    }
}

TEST(SimdDispatch, ActiveTableIsUsable) {
    const KernelTable& k = active_kernels();
    const double in[] = {1.0, 2.0, 3.0};
    const double taps[] = {0.5, 0.5};
    double out[2];
    k.correlate(in, 2, taps, 2, out);
    EXPECT_DOUBLE_EQ(out[0], 1.5);
    EXPECT_DOUBLE_EQ(out[1], 2.5);
}
