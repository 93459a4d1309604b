#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

#include "ccorr/levy_models.hpp"
#include "ccorr/regions.hpp"

namespace ccorr {

struct McConfig {
    std::uint64_t seed = 20240601;
    /// Worker threads; 0 means hardware concurrency.  Results do not
    /// depend on this value.
    std::size_t threads = 1;
    /// Paths are discarded once e^{-r n s} < horizon_tol.
    double horizon_tol = 1e-10;
    /// Antithetic pairs on the Gaussian draws.  Ignored for lattice walks.
    bool antithetic = true;
};

struct PriceEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t n_paths = 0;
    std::size_t horizon_steps = 0;
    double truncation_bias_bound = 0.0;
    std::uint64_t seed = 0;
    std::string method;
};

struct CoupledRhoEstimate {
    PriceEstimate estimate;
    std::size_t refinement = 1;
    /// Paths on which the fine entry came after the coarse one (always 0
    /// when the meshes are nested).
    std::size_t order_violations = 0;
};

/// ceil(ln(1/tol_h) / (r s)).
[[nodiscard]] std::size_t horizon_steps(double r, double s, double tol_h);

/// E^{x0}[e^{-r tau} g(X_tau)] for the first entry of X on the mesh sN
/// into G; g(x0) when x0 is already in G.
[[nodiscard]] PriceEstimate estimate_price(const LevyModel& model, const HalfSpaceRegion& region,
                                           const Payoff& payoff, double s, std::span<const double> x0,
                                           std::size_t n_paths, const McConfig& cfg = {});

/// E[e^{-r tau}] for the first positive mesh time with X in the region,
/// started at the region's anchor gamma.
[[nodiscard]] PriceEstimate estimate_xi(const LevyModel& model, const HalfSpaceRegion& region, double s,
                                        std::size_t n_paths, const McConfig& cfg = {});

/// E[e^{-r tau^{s/m}} - e^{-r tau^s}] on coupled paths: the fine path is a
/// bridge between the coarse points, so coarse entries are read off every
/// m-th fine point.  For powers of two the fine meshes are nested across m
/// and the estimates are nondecreasing in m on a fixed seed.  m = 1 gives 0.
/// Not available for lattice walks.
[[nodiscard]] CoupledRhoEstimate estimate_rho_coupled(const LevyModel& model, const HalfSpaceRegion& region,
                                                      double s, std::size_t m, std::span<const double> x0,
                                                      std::size_t n_paths, const McConfig& cfg = {});
[[nodiscard]] CoupledRhoEstimate estimate_rho_coupled(const LevyModel& model, const HalfSpaceRegion& region,
                                                      double s, std::size_t m, std::size_t n_paths,
                                                      const McConfig& cfg = {});

}  // namespace ccorr
