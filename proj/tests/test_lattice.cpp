#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "ccorr/error.hpp"
#include "ccorr/lattice.hpp"

using namespace ccorr;

namespace {

LatticeWalk pm_one() { return LatticeWalk{1, {{{-1}, 0.5}, {{1}, 0.5}}, 0.0}; }

LatticeWalk diagonal() {
    return LatticeWalk{2, {{{1, 1}, 0.25}, {{-1, -1}, 0.25}, {{1, -1}, 0.25}, {{-1, 1}, 0.25}}, 0.0};
}

/// First-entry law by exhaustive enumeration of all step sequences.
std::vector<double> enumerate_first_entry(const LatticeWalk& walk, const HalfSpaceRegion& h, std::size_t n_max) {
    std::vector<double> law(n_max + 1, 0.0);
    std::vector<double> pos(walk.dim, 0.0);
    std::function<void(std::size_t, double)> rec = [&](std::size_t n, double p) {
        if (n == n_max) {
            return;
        }
        for (const auto& st : walk.steps) {
            for (std::size_t i = 0; i < walk.dim; ++i) {
                pos[i] += static_cast<double>(st.point[i]);
            }
            if (h.contains(pos)) {
                law[n + 1] += p * st.prob;
            } else {
                rec(n + 1, p * st.prob);
            }
            for (std::size_t i = 0; i < walk.dim; ++i) {
                pos[i] -= static_cast<double>(st.point[i]);
            }
        }
    };
    rec(0, 1.0);
    return law;
}

/// P{S_n in H} by exhaustive enumeration.
std::vector<double> enumerate_marginals(const LatticeWalk& walk, const HalfSpaceRegion& h, std::size_t n_max) {
    std::vector<double> out(n_max + 1, 0.0);
    std::vector<double> pos(walk.dim, 0.0);
    std::function<void(std::size_t, double)> rec = [&](std::size_t n, double p) {
        if (n > 0 && h.contains(pos)) {
            out[n] += p;
        }
        if (n == n_max) {
            return;
        }
        for (const auto& st : walk.steps) {
            for (std::size_t i = 0; i < walk.dim; ++i) {
                pos[i] += static_cast<double>(st.point[i]);
            }
            rec(n + 1, p * st.prob);
            for (std::size_t i = 0; i < walk.dim; ++i) {
                pos[i] -= static_cast<double>(st.point[i]);
            }
        }
    };
    rec(0, 1.0);
    return out;
}

}  // namespace

TEST(RQRecursion, MassConservation) {
    const auto seq = lattice_rq_recursion(diagonal(), HalfSpaceRegion({0, 0}, {1, 1}), 30);
    double entered = 0.0;
    for (std::size_t n = 1; n <= 30; ++n) {
        entered += total_mass(seq.R[n]);
        EXPECT_NEAR(entered + total_mass(seq.Q[n]), 1.0, 1e-13);
    }
}

TEST(RQRecursion, MatchesEnumeration) {
    const HalfSpaceRegion h1({0.0}, {1.0});
    const auto seq1 = lattice_rq_recursion(pm_one(), h1, 16);
    const auto law1 = enumerate_first_entry(pm_one(), h1, 16);
    for (std::size_t n = 1; n <= 16; ++n) {
        EXPECT_NEAR(total_mass(seq1.R[n]), law1[n], 1e-15);
    }
    const HalfSpaceRegion h2({0.0, 0.0}, {1.0, 0.5});
    const auto seq2 = lattice_rq_recursion(diagonal(), h2, 8);
    const auto law2 = enumerate_first_entry(diagonal(), h2, 8);
    for (std::size_t n = 1; n <= 8; ++n) {
        EXPECT_NEAR(total_mass(seq2.R[n]), law2[n], 1e-15);
    }
}

TEST(RQRecursion, EntryLocatedInsideH) {
    const HalfSpaceRegion h({0.0, 0.0}, {1.0, 1.0});
    const auto seq = lattice_rq_recursion(diagonal(), h, 10);
    for (std::size_t n = 1; n <= 10; ++n) {
        for (const auto& [pt, w] : seq.R[n]) {
            EXPECT_LT(pt.c[0] + pt.c[1], 0);
        }
        for (const auto& [pt, w] : seq.Q[n]) {
            EXPECT_GE(pt.c[0] + pt.c[1], 0);
        }
    }
}

TEST(RQRecursion, RequiresStrictRegion) {
    EXPECT_THROW((void)lattice_rq_recursion(pm_one(), HalfSpaceRegion({0.0}, {1.0}, false), 5), Error);
}

TEST(HalfspaceMasses, MatchEnumeration) {
    const HalfSpaceRegion h1({0.0}, {1.0});
    const auto m1 = lattice_halfspace_masses(pm_one(), h1, 14);
    const auto e1 = enumerate_marginals(pm_one(), h1, 14);
    for (std::size_t n = 1; n <= 14; ++n) {
        EXPECT_NEAR(m1[n], e1[n], 1e-15);
    }
    const HalfSpaceRegion h2({0.0, 0.0}, {1.0, 0.5});
    const auto m2 = lattice_halfspace_masses(diagonal(), h2, 7);
    const auto e2 = enumerate_marginals(diagonal(), h2, 7);
    for (std::size_t n = 1; n <= 7; ++n) {
        EXPECT_NEAR(m2[n], e2[n], 1e-15);
    }
}

TEST(WienerHopf, OneDimensionalClosedForm) {
    const auto chk = wiener_hopf_zero_freq_check(pm_one(), HalfSpaceRegion({0.0}, {1.0}), 0.5, 200);
    EXPECT_NEAR(chk.lhs, std::sqrt(3.0) - 1.0, 1e-12);
    EXPECT_NEAR(chk.rhs, std::sqrt(3.0) - 1.0, 1e-12);
    EXPECT_LE(chk.gap, chk.tail_bound + 1e-15);
}

TEST(WienerHopf, TwoDimensionalDiagonal) {
    for (double q : {0.3, 0.6}) {
        const auto chk = wiener_hopf_zero_freq_check(diagonal(), HalfSpaceRegion({0.0, 0.0}, {1.0, 1.0}), q, 40);
        EXPECT_LE(chk.gap, 1e-9) << q;
        EXPECT_LE(chk.gap, chk.tail_bound + 1e-14) << q;
    }
}

TEST(WienerHopf, FirstEntryTransformOfEnumeration) {
    const HalfSpaceRegion h({0.0}, {1.0});
    const auto law = enumerate_first_entry(pm_one(), h, 18);
    const auto seq = lattice_rq_recursion(pm_one(), h, 18);
    double expect = 0.0;
    for (std::size_t n = 1; n <= 18; ++n) {
        expect += std::pow(0.7, static_cast<double>(n)) * law[n];
    }
    EXPECT_NEAR(lattice_first_entry_transform(seq, 0.7), expect, 1e-15);
}
