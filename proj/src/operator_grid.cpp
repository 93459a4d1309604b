#include "ccorr/operator_grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ccorr/error.hpp"
#include "ccorr/simd/kernels.hpp"

namespace ccorr {

GridSpec::GridSpec(std::vector<double> lower, std::vector<double> upper, std::vector<std::size_t> cells)
    : lower_(std::move(lower)), upper_(std::move(upper)), cells_(std::move(cells)) {
    require(!cells_.empty(), ErrorKind::Shape, "grid needs at least one axis");
    require(lower_.size() == cells_.size() && upper_.size() == cells_.size(), ErrorKind::Shape,
            "grid bounds and cell counts differ in dimension");
    size_ = 1;
    spacing_.resize(cells_.size());
    for (std::size_t a = 0; a < cells_.size(); ++a) {
        require(std::isfinite(lower_[a]) && std::isfinite(upper_[a]) && upper_[a] > lower_[a],
                ErrorKind::Shape, "grid axis must have finite lower < upper");
        require(cells_[a] >= 1, ErrorKind::Shape, "grid axis needs at least one cell");
        spacing_[a] = (upper_[a] - lower_[a]) / static_cast<double>(cells_[a]);
        size_ *= cells_[a];
    }
}

GridSpec GridSpec::aligned(const std::vector<double>& lower, const std::vector<double>& upper, double h) {
    require(std::isfinite(h) && h > 0.0, ErrorKind::InvalidParameter, "grid spacing must be positive");
    require(lower.size() == upper.size(), ErrorKind::Shape, "grid bounds differ in dimension");
    std::vector<double> lo(lower.size());
    std::vector<double> hi(lower.size());
    std::vector<std::size_t> n(lower.size());
    for (std::size_t a = 0; a < lower.size(); ++a) {
        require(upper[a] > lower[a], ErrorKind::Shape, "grid axis must have lower < upper");
        const double k_lo = std::floor(lower[a] / h);
        const double k_hi = std::ceil(upper[a] / h);
        lo[a] = k_lo * h;
        hi[a] = k_hi * h;
        n[a] = static_cast<std::size_t>(std::max(1.0, k_hi - k_lo));
    }
    return {std::move(lo), std::move(hi), std::move(n)};
}

double GridSpec::cell_volume() const noexcept {
    double v = 1.0;
    for (double h : spacing_) {
        v *= h;
    }
    return v;
}

double GridSpec::center(std::size_t axis, std::size_t i) const noexcept {
    return lower_[axis] + (static_cast<double>(i) + 0.5) * spacing_[axis];
}

Point GridSpec::center_of(std::size_t linear) const {
    Point x(dim());
    for (std::size_t a = dim(); a-- > 0;) {
        x[a] = center(a, linear % cells_[a]);
        linear /= cells_[a];
    }
    return x;
}

std::size_t GridSpec::locate(std::span<const double> x) const {
    require(x.size() == dim(), ErrorKind::Shape, "point dimension differs from grid");
    std::size_t linear = 0;
    for (std::size_t a = 0; a < dim(); ++a) {
        const double t = std::floor((x[a] - lower_[a]) / spacing_[a]);
        const double hi = static_cast<double>(cells_[a] - 1);
        linear = linear * cells_[a] + static_cast<std::size_t>(std::clamp(t, 0.0, hi));
    }
    return linear;
}

double GridSpec::edge_distance(std::size_t linear) const {
    double d = INFINITY;
    for (std::size_t a = dim(); a-- > 0;) {
        const double c = center(a, linear % cells_[a]);
        linear /= cells_[a];
        d = std::min({d, c - lower_[a], upper_[a] - c});
    }
    return d;
}

GridField::GridField(GridSpec spec, double fill) : spec_(std::move(spec)), values_(spec_.size(), fill) {}

GridField::GridField(GridSpec spec, std::vector<double> values)
    : spec_(std::move(spec)), values_(std::move(values)) {
    require(values_.size() == spec_.size(), ErrorKind::Shape, "field size differs from grid size");
}

GridField GridField::sample(const GridSpec& spec, const std::function<double(std::span<const double>)>& fn) {
    GridField f(spec);
    for (std::size_t i = 0; i < spec.size(); ++i) {
        const Point x = spec.center_of(i);
        f.values_[i] = fn(x);
    }
    return f;
}

double GridField::sup_norm() const noexcept {
    return simd::active_kernels().max_abs(values_.data(), values_.size());
}

DiscountKernel::DiscountKernel(const GridSpec& grid, double s, double r, std::vector<double> mu,
                               std::vector<double> sigma)
    : grid_(grid), s_(s), r_(r), mu_(std::move(mu)), sigma_(std::move(sigma)) {
    require(std::isfinite(s) && s > 0.0, ErrorKind::InvalidParameter, "mesh s must be positive");
    require(std::isfinite(r) && r > 0.0, ErrorKind::InvalidParameter, "rate r must be positive");
    if (sigma_.empty()) {
        sigma_.assign(grid_.dim(), 1.0);
    }
    require(mu_.size() == grid_.dim() && sigma_.size() == grid_.dim(), ErrorKind::Shape,
            "kernel drift/volatility dimension differs from grid");
    discount_ = std::exp(-r * s);
    double mass = 1.0;
    taps_.resize(grid_.dim());
    for (std::size_t a = 0; a < grid_.dim(); ++a) {
        require(std::isfinite(mu_[a]), ErrorKind::InvalidParameter, "drift must be finite");
        require(std::isfinite(sigma_[a]) && sigma_[a] > 0.0, ErrorKind::InvalidParameter,
                "volatility must be positive");
        const double h = grid_.spacing(a);
        const double mean = mu_[a] * s;
        const double sd = sigma_[a] * std::sqrt(s);
        require(h <= 0.5 * sd, ErrorKind::InvalidParameter,
                "grid spacing must be at most half the per-step standard deviation");
        const auto half = static_cast<std::int64_t>(std::ceil((std::fabs(mean) + kTailSd * sd) / h));
        auto& t = taps_[a];
        t.resize(static_cast<std::size_t>(2 * half + 1));
        const double norm = h / (sd * std::sqrt(2.0 * std::numbers::pi));
        double axis_mass = 0.0;
        for (std::int64_t j = -half; j <= half; ++j) {
            const double z = (static_cast<double>(j) * h - mean) / sd;
            const double w = norm * std::exp(-0.5 * z * z);
            t[static_cast<std::size_t>(j + half)] = w;
            axis_mass += w;
        }
        mass *= axis_mass;
    }
    eps_dom_raw_ = 1.0 - mass;
    eps_dom_ = std::max(0.0, eps_dom_raw_);
}

GridField DiscountKernel::apply(const GridField& f) const {
    require(f.spec() == grid_, ErrorKind::Shape, "field grid differs from kernel grid");
    const auto& k = simd::active_kernels();
    const auto& cells = grid_.cells();
    std::vector<double> cur(f.values().begin(), f.values().end());
    std::vector<double> next(cur.size());
    for (std::size_t a = 0; a < grid_.dim(); ++a) {
        const std::size_t n = cells[a];
        std::size_t stride = 1;
        for (std::size_t b = a + 1; b < grid_.dim(); ++b) {
            stride *= cells[b];
        }
        const std::size_t outer = cur.size() / (n * stride);
        const auto& taps = taps_[a];
        const std::size_t half = (taps.size() - 1) / 2;
        std::vector<double> padded(n + 2 * half, 0.0);
        std::vector<double> line(n);
        for (std::size_t o = 0; o < outer; ++o) {
            for (std::size_t in = 0; in < stride; ++in) {
                const std::size_t base = o * n * stride + in;
                for (std::size_t i = 0; i < n; ++i) {
                    padded[half + i] = cur[base + i * stride];
                }
                k.correlate(padded.data(), n, taps.data(), taps.size(), line.data());
                for (std::size_t i = 0; i < n; ++i) {
                    next[base + i * stride] = line[i];
                }
            }
        }
        cur.swap(next);
    }
    for (double& v : cur) {
        v *= discount_;
    }
    return {grid_, std::move(cur)};
}

GridField complement_mask(const GridSpec& grid, const HalfSpaceRegion& region) {
    require(region.dim() == grid.dim(), ErrorKind::Shape, "region dimension differs from grid");
    return GridField::sample(grid, [&](std::span<const double> x) { return region.contains(x) ? 0.0 : 1.0; });
}

GridField apply_PE(const DiscountKernel& kernel, const HalfSpaceRegion& region, const GridField& f) {
    GridField out = kernel.apply(f);
    const GridField mask = complement_mask(kernel.grid(), region);
    simd::active_kernels().apply_mask(out.values().data(), mask.values().data(), out.values().size());
    return out;
}

namespace {

std::size_t iteration_cap(double start, double threshold, double contraction) {
    if (start <= threshold) {
        return 16;
    }
    return static_cast<std::size_t>(std::ceil(std::log(threshold / start) / std::log(contraction))) + 16;
}

}  // namespace

NeumannResult neumann_price(const DiscountKernel& kernel, const HalfSpaceRegion& region,
                            const GridField& payoff, double tol) {
    require(std::isfinite(tol) && tol > 0.0, ErrorKind::InvalidParameter, "tolerance must be positive");
    require(payoff.spec() == kernel.grid(), ErrorKind::Shape, "payoff grid differs from kernel grid");
    const auto& k = simd::active_kernels();
    const GridField mask = complement_mask(kernel.grid(), region);
    const std::size_t n = mask.values().size();

    GridField term = payoff;
    for (std::size_t i = 0; i < n; ++i) {
        term[i] *= 1.0 - mask[i];
    }
    NeumannResult res{term, 0, term.sup_norm(), kernel.eps_dom()};
    const double threshold = tol * (1.0 - kernel.discount());
    const std::size_t cap = iteration_cap(res.last_term, threshold, kernel.discount());
    while (res.last_term > threshold) {
        require(res.iterations < cap, ErrorKind::Numeric, "Neumann series failed to contract");
        term = kernel.apply(term);
        k.apply_mask(term.values().data(), mask.values().data(), n);
        res.last_term = k.accumulate(res.value.values().data(), term.values().data(), n);
        ++res.iterations;
    }
    return res;
}

double default_margin(const DiscountKernel& kernel) noexcept {
    return 6.0 * std::sqrt(kernel.s());
}

double fixed_point_residual(const GridField& value, const DiscountKernel& kernel, const HalfSpaceRegion& region,
                            double margin) {
    const GridField ev = kernel.apply(value);
    const auto& grid = kernel.grid();
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid.edge_distance(i) < margin) {
            continue;
        }
        const Point x = grid.center_of(i);
        if (region.contains(x)) {
            continue;
        }
        worst = std::max(worst, std::fabs(value[i] - ev[i]));
    }
    return worst;
}

double fixed_point_residual(const GridField& value, const DiscountKernel& kernel, const HalfSpaceRegion& region) {
    return fixed_point_residual(value, kernel, region, default_margin(kernel));
}

ValueIterationResult value_iteration(const DiscountKernel& kernel, const GridField& payoff, double tol) {
    require(std::isfinite(tol) && tol > 0.0, ErrorKind::InvalidParameter, "tolerance must be positive");
    require(payoff.spec() == kernel.grid(), ErrorKind::Shape, "payoff grid differs from kernel grid");
    const auto& k = simd::active_kernels();
    const std::size_t n = payoff.values().size();
    ValueIterationResult res{payoff, std::vector<std::uint8_t>(n, 1), 0};
    const double threshold = tol * (1.0 - kernel.discount());
    const std::size_t cap = iteration_cap(std::max(payoff.sup_norm(), threshold), threshold, kernel.discount());
    GridField cont(kernel.grid());
    double diff = INFINITY;
    while (diff > threshold) {
        require(res.iterations < cap, ErrorKind::Numeric, "value iteration failed to contract");
        cont = kernel.apply(res.value);
        diff = k.max_update(res.value.values().data(), payoff.values().data(), cont.values().data(), n);
        ++res.iterations;
    }
    for (std::size_t i = 0; i < n; ++i) {
        res.exercise_mask[i] = payoff[i] >= cont[i] ? 1 : 0;
    }
    return res;
}

SymbolNorm symbol_norm_bound(double h, std::span<const double> mu, double r, const FrequencyGrid& freq) {
    require(h > 0.0 && r > 0.0, ErrorKind::InvalidParameter, "h and r must be positive");
    require(freq.radius > 0.0 && freq.points_per_axis >= 2, ErrorKind::InvalidParameter,
            "frequency grid needs a positive radius and at least two points");
    const std::size_t d = mu.size();
    require(d >= 1, ErrorKind::Shape, "drift must have at least one component");
    std::size_t total = 1;
    for (std::size_t a = 0; a < d; ++a) {
        require(total <= 50'000'000 / freq.points_per_axis, ErrorKind::Resource, "frequency grid too large");
        total *= freq.points_per_axis;
    }
    const double step = 2.0 * freq.radius / static_cast<double>(freq.points_per_axis - 1);
    SymbolNorm out{0.0, INFINITY};
    bool below_one = true;
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rem = idx;
        double theta = 0.0;
        double norm2 = 0.0;
        for (std::size_t a = 0; a < d; ++a) {
            const double x = -freq.radius + step * static_cast<double>(rem % freq.points_per_axis);
            rem /= freq.points_per_axis;
            theta += mu[a] * x;
            norm2 += x * x;
        }
        const double log_z = -r * h - 0.5 * norm2 * h;
        const double z = std::exp(log_z);
        const double c = std::cos(h * theta);
        const double m = std::sqrt(std::max(0.0, 1.0 - 2.0 * z * c + z * z));
        out.sup = std::max(out.sup, m);
        // 1 - m = z (2 cos - z) / (1 + m)
        const double lead = 2.0 * c - z;
        if (lead <= 0.0) {
            below_one = false;
        } else if (below_one) {
            out.log_margin = std::min(out.log_margin, log_z + std::log(lead) - std::log1p(m));
        }
    }
    if (!below_one) {
        out.log_margin = std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

GridField price_mesh_derivative(const GridSpec& grid, double r, const std::vector<double>& mu,
                                const HalfSpaceRegion& region, const GridField& payoff, double s, double ds,
                                bool richardson, double tol) {
    require(ds > 0.0 && s - ds > 0.0, ErrorKind::InvalidParameter, "need 0 < ds < s");
    auto value = [&](double sv) { return neumann_price(DiscountKernel(grid, sv, r, mu), region, payoff, tol).value; };
    auto central = [&](double step) {
        GridField up = value(s + step);
        const GridField down = value(s - step);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            up[i] = (up[i] - down[i]) / (2.0 * step);
        }
        return up;
    };
    GridField coarse = central(ds);
    if (!richardson) {
        return coarse;
    }
    const GridField fine = central(0.5 * ds);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        coarse[i] = (4.0 * fine[i] - coarse[i]) / 3.0;
    }
    return coarse;
}

GridField discrete_generator(const GridField& f, double r, const std::vector<double>& mu,
                             const std::vector<double>& sigma) {
    const GridSpec& grid = f.spec();
    require(mu.size() == grid.dim(), ErrorKind::Shape, "drift dimension differs from grid");
    require(sigma.empty() || sigma.size() == grid.dim(), ErrorKind::Shape, "volatility dimension differs from grid");
    GridField out(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out[i] = -r * f[i];
    }
    std::size_t stride = grid.size();
    for (std::size_t a = 0; a < grid.dim(); ++a) {
        const std::size_t n = grid.cells()[a];
        stride /= n;
        const double h = grid.spacing(a);
        const double sg = sigma.empty() ? 1.0 : sigma[a];
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const std::size_t pos = (i / stride) % n;
            const double fm = pos > 0 ? f[i - stride] : 0.0;
            const double fp = pos + 1 < n ? f[i + stride] : 0.0;
            out[i] += 0.5 * sg * sg * (fp - 2.0 * f[i] + fm) / (h * h) + mu[a] * (fp - fm) / (2.0 * h);
        }
    }
    return out;
}

GeneratorCheck generator_check(const GridField& f, double r, const std::vector<double>& mu, double u, double du) {
    require(du > 0.0 && u - du > 0.0, ErrorKind::InvalidParameter, "need 0 < du < u");
    const GridSpec& grid = f.spec();
    const GridField up = DiscountKernel(grid, u + du, r, mu).apply(f);
    const GridField down = DiscountKernel(grid, u - du, r, mu).apply(f);
    const GridField target = DiscountKernel(grid, u, r, mu).apply(discrete_generator(f, r, mu));
    GeneratorCheck res{0.0, f.sup_norm(), GridField(grid)};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        res.quotient[i] = (up[i] - down[i]) / (2.0 * du);
        res.gap = std::max(res.gap, std::fabs(res.quotient[i] - target[i]));
    }
    return res;
}

}  // namespace ccorr
