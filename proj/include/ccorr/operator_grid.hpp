#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ccorr/regions.hpp"

namespace ccorr {

/// Uniform rectangular grid of cells over the box [lower, upper].
/// Values live at cell centres; the last axis is contiguous.
class GridSpec {
public:
    GridSpec(std::vector<double> lower, std::vector<double> upper, std::vector<std::size_t> cells);

    /// Box with spacing exactly h on every axis whose edges are integer
    /// multiples of h, so 0 is always a cell edge.  The box covers
    /// [lower, upper].
    [[nodiscard]] static GridSpec aligned(const std::vector<double>& lower,
                                          const std::vector<double>& upper, double h);

    [[nodiscard]] std::size_t dim() const noexcept { return cells_.size(); }
    [[nodiscard]] std::size_t size() const noexcept { return size_; }
    [[nodiscard]] const std::vector<double>& lower() const noexcept { return lower_; }
    [[nodiscard]] const std::vector<double>& upper() const noexcept { return upper_; }
    [[nodiscard]] const std::vector<std::size_t>& cells() const noexcept { return cells_; }
    [[nodiscard]] double spacing(std::size_t axis) const noexcept { return spacing_[axis]; }
    [[nodiscard]] double cell_volume() const noexcept;
    [[nodiscard]] double center(std::size_t axis, std::size_t i) const noexcept;
    [[nodiscard]] Point center_of(std::size_t linear) const;
    /// Linear index of the cell containing x (clamped to the box).
    [[nodiscard]] std::size_t locate(std::span<const double> x) const;
    /// Smallest distance from the cell centre to the box boundary.
    [[nodiscard]] double edge_distance(std::size_t linear) const;

    friend bool operator==(const GridSpec&, const GridSpec&) = default;

private:
    std::vector<double> lower_;
    std::vector<double> upper_;
    std::vector<std::size_t> cells_;
    std::vector<double> spacing_;
    std::size_t size_ = 0;
};

class GridField {
public:
    explicit GridField(GridSpec spec, double fill = 0.0);
    GridField(GridSpec spec, std::vector<double> values);

    [[nodiscard]] static GridField sample(const GridSpec& spec,
                                          const std::function<double(std::span<const double>)>& fn);

    [[nodiscard]] const GridSpec& spec() const noexcept { return spec_; }
    [[nodiscard]] std::span<double> values() noexcept { return values_; }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] double operator[](std::size_t i) const noexcept { return values_[i]; }
    double& operator[](std::size_t i) noexcept { return values_[i]; }
    [[nodiscard]] double sup_norm() const noexcept;

private:
    GridSpec spec_;
    std::vector<double> values_;
};

/// Tabulated e^{-rs} * (density of X_s) on the grid, for X a Brownian motion
/// with drift mu and per-axis volatility sigma.  Applying it maps f to
/// e^{-rs} E[f(x + X_s)].  The Gaussian is separable, so it is stored as
/// one tap vector per axis.
class DiscountKernel {
public:
    static constexpr double kTailSd = 7.5;

    DiscountKernel(const GridSpec& grid, double s, double r, std::vector<double> mu,
                   std::vector<double> sigma = {});

    [[nodiscard]] const GridSpec& grid() const noexcept { return grid_; }
    [[nodiscard]] double s() const noexcept { return s_; }
    [[nodiscard]] double r() const noexcept { return r_; }
    [[nodiscard]] double discount() const noexcept { return discount_; }
    [[nodiscard]] const std::vector<double>& mu() const noexcept { return mu_; }
    [[nodiscard]] const std::vector<double>& sigma() const noexcept { return sigma_; }
    [[nodiscard]] const std::vector<double>& taps(std::size_t axis) const noexcept { return taps_[axis]; }
    /// Gaussian mass lost by truncating the tabulation.
    [[nodiscard]] double eps_dom() const noexcept { return eps_dom_; }
    /// Total kernel mass including the discount.
    [[nodiscard]] double mass() const noexcept { return discount_ * (1.0 - eps_dom_raw_); }

    /// e^{-rs} * (kernel correlated with f), zero outside the box.
    [[nodiscard]] GridField apply(const GridField& f) const;

private:
    GridSpec grid_;
    double s_;
    double r_;
    double discount_;
    std::vector<double> mu_;
    std::vector<double> sigma_;
    std::vector<std::vector<double>> taps_;
    double eps_dom_ = 0.0;
    double eps_dom_raw_ = 0.0;
};

/// 1.0 on cells whose centre lies outside G, 0.0 inside.
[[nodiscard]] GridField complement_mask(const GridSpec& grid, const HalfSpaceRegion& region);

/// chi_{complement G} * (kernel applied to f).
[[nodiscard]] GridField apply_PE(const DiscountKernel& kernel, const HalfSpaceRegion& region,
                                 const GridField& f);

struct NeumannResult {
    GridField value;
    std::size_t iterations = 0;
    double last_term = 0.0;
    double eps_dom = 0.0;
};

/// V = sum_k (P E)^k (chi_G g), stopped once the newest term is
/// <= tol (1 - e^{-rs}) in sup norm.
[[nodiscard]] NeumannResult neumann_price(const DiscountKernel& kernel, const HalfSpaceRegion& region,
                                          const GridField& payoff, double tol = 1e-12);

/// Default margin 6 sqrt(s) from the domain edge.
[[nodiscard]] double default_margin(const DiscountKernel& kernel) noexcept;

/// max |V - E V| over cells outside G farther than `margin` from the box edge.
[[nodiscard]] double fixed_point_residual(const GridField& value, const DiscountKernel& kernel,
                                          const HalfSpaceRegion& region, double margin);
[[nodiscard]] double fixed_point_residual(const GridField& value, const DiscountKernel& kernel,
                                          const HalfSpaceRegion& region);

struct ValueIterationResult {
    GridField value;
    /// 1 where U <= g (immediate exercise), 0 elsewhere.
    std::vector<std::uint8_t> exercise_mask;
    std::size_t iterations = 0;
};

/// U_{k+1} = max(g, E U_k) from U_0 = g until the update is below
/// tol (1 - e^{-rs}).
[[nodiscard]] ValueIterationResult value_iteration(const DiscountKernel& kernel, const GridField& payoff,
                                                   double tol = 1e-12);

struct FrequencyGrid {
    double radius = 1.0;
    std::size_t points_per_axis = 257;
};

struct SymbolNorm {
    /// sup over the grid of |1 - exp(-r h + i h mu.x - |x|^2 h / 2)|.
    double sup = 0.0;
    /// ln(1 - sup) evaluated without cancellation, so a margin far below
    /// double epsilon stays visible; NaN when sup >= 1.
    double log_margin = 0.0;

    [[nodiscard]] bool contraction() const noexcept { return log_margin == log_margin; }
};

[[nodiscard]] SymbolNorm symbol_norm_bound(double h, std::span<const double> mu, double r,
                                           const FrequencyGrid& freq);

/// dV/ds at fixed grid and region, by central differences in s (optionally
/// Richardson-extrapolated from steps ds and ds/2).
[[nodiscard]] GridField price_mesh_derivative(const GridSpec& grid, double r, const std::vector<double>& mu,
                                              const HalfSpaceRegion& region, const GridField& payoff,
                                              double s, double ds, bool richardson = false,
                                              double tol = 1e-13);

/// -r f + 1/2 sum sigma_a^2 d_aa f + mu . grad f by central differences,
/// with f taken as zero outside the box.
[[nodiscard]] GridField discrete_generator(const GridField& f, double r, const std::vector<double>& mu,
                                           const std::vector<double>& sigma = {});

struct GeneratorCheck {
    double gap = 0.0;         ///< sup |difference quotient - E_u L f|
    double f_norm = 0.0;
    GridField quotient;       ///< (E_{u+du} f - E_{u-du} f) / (2 du)
};

[[nodiscard]] GeneratorCheck generator_check(const GridField& f, double r, const std::vector<double>& mu,
                                             double u, double du);

}  // namespace ccorr
