#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "ccorr/levy_models.hpp"
#include "ccorr/regions.hpp"

namespace ccorr {

inline constexpr std::size_t kMaxLatticeDim = 4;

struct LatticePoint {
    std::array<std::int64_t, kMaxLatticeDim> c{};

    friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
};

struct LatticePointHash {
    std::size_t operator()(const LatticePoint& p) const noexcept {
        std::uint64_t h = 0x9E3779B97F4A7C15ULL;
        for (auto v : p.c) {
            h ^= static_cast<std::uint64_t>(v) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }
};

using LatticeMeasure = std::unordered_map<LatticePoint, double, LatticePointHash>;

[[nodiscard]] double total_mass(const LatticeMeasure& m);

/// R_n = mass of first entry into H at step n (located), Q_n = mass still
/// outside H after n steps.  Index n runs over 0..n_max.
struct LatticeMeasureSequence {
    std::size_t dim = 1;
    std::vector<LatticeMeasure> R;
    std::vector<LatticeMeasure> Q;
};

/// Exact Q_{n+1} + R_{n+1} = Q_n * P_step, split along H = region - gamma.
/// Requires a strict half-space (0 not in H).
[[nodiscard]] LatticeMeasureSequence lattice_rq_recursion(const LatticeWalk& walk,
                                                          const HalfSpaceRegion& region,
                                                          std::size_t n_max);

/// P^{*n}(H) for n = 1..n_max by direct convolution powers of the step law
/// (no reference to first-entry decompositions).  Entry 0 is unused.
[[nodiscard]] std::vector<double> lattice_halfspace_masses(const LatticeWalk& walk,
                                                           const HalfSpaceRegion& region,
                                                           std::size_t n_max);

/// sum_{n<=n_max} q^n R_n(Z^d).
[[nodiscard]] double lattice_first_entry_transform(const LatticeMeasureSequence& seq, double q);

struct WienerHopfCheck {
    double q = 0.0;
    std::size_t n_max = 0;
    double lhs = 0.0;  ///< 1 - sum_{n<=n_max} q^n R_n(Z^d)
    double rhs = 0.0;  ///< exp(-sum_{n<=n_max} q^n/n P^{*n}(H))
    double gap = 0.0;
    double tail_bound = 0.0;  ///< combined certified truncation tails of both sides
};

/// Zero-frequency multi-dimensional Wiener-Hopf identity on Z^d.
[[nodiscard]] WienerHopfCheck wiener_hopf_zero_freq_check(const LatticeWalk& walk,
                                                          const HalfSpaceRegion& region, double q,
                                                          std::size_t n_max);

}  // namespace ccorr
