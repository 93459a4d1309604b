#include "ccorr/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>
#include <vector>

#include "ccorr/error.hpp"
#include "ccorr/rng.hpp"

namespace ccorr {

namespace {

constexpr std::size_t kBlock = 256;
constexpr std::size_t kMaxHorizon = std::size_t{1} << 31;

enum Tag : std::uint64_t { kRootNormal = 0, kBridgeNormal = 1, kJumpUniform = 2, kRootUniform = 3 };

std::uint64_t stream_of(std::uint64_t unit, Tag tag) noexcept { return (unit << 2) | tag; }

std::uint64_t index_of(std::uint64_t step, std::uint64_t id, std::uint64_t group) noexcept {
    return (step << 32) | (id << 5) | group;
}

struct Moments {
    double n = 0.0;
    double mean = 0.0;
    double m2 = 0.0;
    std::size_t flags = 0;

    void add(double x) noexcept {
        n += 1.0;
        const double d = x - mean;
        mean += d / n;
        m2 += d * (x - mean);
    }

    static Moments merge(const Moments& a, const Moments& b) noexcept {
        if (a.n == 0.0) {
            return b;
        }
        if (b.n == 0.0) {
            return a;
        }
        Moments out;
        out.n = a.n + b.n;
        const double d = b.mean - a.mean;
        out.mean = a.mean + d * (b.n / out.n);
        out.m2 = a.m2 + b.m2 + d * d * (a.n * b.n / out.n);
        out.flags = a.flags + b.flags;
        return out;
    }
};

struct UnitResult {
    double value = 0.0;
    std::size_t flags = 0;
};

/// Evaluates fn(unit) for every unit in fixed-size blocks and merges the
/// block moments pairwise in index order.
template <class Fn>
Moments run_units(std::size_t n_units, std::size_t threads, const Fn& fn) {
    const std::size_t n_blocks = (n_units + kBlock - 1) / kBlock;
    std::vector<Moments> blocks(n_blocks);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t b = next++; b < n_blocks; b = next++) {
            Moments m;
            const std::size_t end = std::min(n_units, (b + 1) * kBlock);
            for (std::size_t u = b * kBlock; u < end; ++u) {
                const UnitResult r = fn(u);
                m.add(r.value);
                m.flags += r.flags;
            }
            blocks[b] = m;
        }
    };
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = std::min(threads, std::max<std::size_t>(n_blocks, 1));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
    }
    for (std::size_t width = 1; width < n_blocks; width *= 2) {
        for (std::size_t i = 0; i + width < n_blocks; i += 2 * width) {
            blocks[i] = Moments::merge(blocks[i], blocks[i + width]);
        }
    }
    return n_blocks == 0 ? Moments{} : blocks[0];
}

/// Increment of one coarse step, split into a continuous part and a jump
/// count (Merton) so a bridge can be drawn through it.
struct RootIncrement {
    std::vector<double> cont;
    std::uint64_t jumps = 0;
};

class PathModel {
public:
    PathModel(const LevyModel& model, double s) : model_(model), s_(s), dim_(model_dim(model)) {
        if (const auto* bs = std::get_if<BlackScholesBasket>(&model)) {
            for (std::size_t i = 0; i < dim_; ++i) {
                drift_.push_back(bs->mu()[i] * s);
                vol_.push_back(bs->sigma()[i]);
            }
        } else if (const auto* mj = std::get_if<MertonJumpDiffusion>(&model)) {
            drift_.push_back(mj->alpha * s);
            vol_.push_back(mj->sigma);
            beta_ = mj->beta;
            jump_mean_ = mj->jump_rate * s;
        } else {
            const auto& walk = std::get<LatticeWalk>(model);
            lattice_ = &walk;
        }
    }

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] bool lattice() const noexcept { return lattice_ != nullptr; }
    [[nodiscard]] bool merton() const noexcept { return jump_mean_ > 0.0; }
    [[nodiscard]] double beta() const noexcept { return beta_; }
    [[nodiscard]] double vol(std::size_t i) const noexcept { return vol_[i]; }

    void root(std::uint64_t seed, std::uint64_t unit, std::uint64_t step, double sign, RootIncrement& out) const {
        out.cont.resize(dim_);
        if (lattice_ != nullptr) {
            const double u = uniform_pair(seed, stream_of(unit, kRootUniform), index_of(step, 0, 0))[0];
            double cdf = 0.0;
            const LatticeStep* chosen = &lattice_->steps.back();
            for (const auto& st : lattice_->steps) {
                cdf += st.prob;
                if (u < cdf) {
                    chosen = &st;
                    break;
                }
            }
            for (std::size_t i = 0; i < dim_; ++i) {
                out.cont[i] = static_cast<double>(chosen->point[i]);
            }
            out.jumps = 0;
            return;
        }
        const double rs = std::sqrt(s_);
        for (std::size_t g = 0; 2 * g < dim_; ++g) {
            const auto z = normal_pair(seed, stream_of(unit, kRootNormal), index_of(step, 0, g));
            for (std::size_t k = 0; k < 2 && 2 * g + k < dim_; ++k) {
                const std::size_t i = 2 * g + k;
                out.cont[i] = drift_[i] + vol_[i] * rs * sign * z[k];
            }
        }
        out.jumps = 0;
        if (jump_mean_ > 0.0) {
            const double u = uniform_pair(seed, stream_of(unit, kRootUniform), index_of(step, 0, 0))[0];
            out.jumps = poisson_from_uniform(jump_mean_, u);
        }
    }

private:
    const LevyModel& model_;
    double s_;
    std::size_t dim_;
    std::vector<double> drift_;
    std::vector<double> vol_;
    double beta_ = 0.0;
    double jump_mean_ = 0.0;
    const LatticeWalk* lattice_ = nullptr;
};

double total_component(const PathModel& pm, const RootIncrement& inc, std::size_t i) noexcept {
    return pm.merton() ? inc.cont[i] + pm.beta() * static_cast<double>(inc.jumps) : inc.cont[i];
}

double positive_rate(const LevyModel& model) {
    const double r = model_rate(model);
    require(std::isfinite(r) && r > 0.0, ErrorKind::InvalidParameter,
            "r: a positive discount rate is required for simulation");
    return r;
}

void check_inputs(const LevyModel& model, const HalfSpaceRegion& region, double s, std::size_t n_paths) {
    require(std::isfinite(s) && s > 0.0, ErrorKind::InvalidParameter, "s: mesh must be positive");
    require(region.dim() == model_dim(model), ErrorKind::Shape, "region dimension differs from model");
    require(n_paths >= 2, ErrorKind::InvalidParameter, "n_paths: need at least two paths");
    if (const auto* mj = std::get_if<MertonJumpDiffusion>(&model)) {
        mj->validate();
        require(mj->jump_rate * s < 700.0, ErrorKind::InvalidParameter, "jump_rate * s too large to simulate");
    } else if (const auto* walk = std::get_if<LatticeWalk>(&model)) {
        walk->validate();
    }
}

struct Plan {
    std::size_t horizon = 0;
    std::size_t units = 0;
    std::size_t paths = 0;
    bool antithetic = false;
};

Plan make_plan(const LevyModel& model, double r, double s, std::size_t n_paths, const McConfig& cfg) {
    Plan p;
    p.horizon = horizon_steps(r, s, cfg.horizon_tol);
    p.antithetic = cfg.antithetic && !std::holds_alternative<LatticeWalk>(model);
    p.units = p.antithetic ? n_paths / 2 : n_paths;
    p.paths = p.antithetic ? 2 * p.units : p.units;
    return p;
}

/// First n in [1, horizon] with the path in the region, and the state there.
struct Entry {
    std::size_t step = 0;
    std::vector<double> state;
};

Entry first_entry(const PathModel& pm, const HalfSpaceRegion& region, std::span<const double> x0,
                  std::uint64_t seed, std::uint64_t unit, double sign, std::size_t horizon) {
    Entry e{0, std::vector<double>(x0.begin(), x0.end())};
    RootIncrement inc;
    for (std::size_t k = 1; k <= horizon; ++k) {
        pm.root(seed, unit, k, sign, inc);
        for (std::size_t i = 0; i < pm.dim(); ++i) {
            e.state[i] += total_component(pm, inc, i);
        }
        if (region.contains(e.state)) {
            e.step = k;
            return e;
        }
    }
    return e;
}

PriceEstimate finish(const Moments& m, const Plan& plan, double bias, std::uint64_t seed, std::string method) {
    PriceEstimate est;
    est.value = m.mean;
    est.std_error = m.n > 1.0 ? std::sqrt(m.m2 / (m.n - 1.0) / m.n) : 0.0;
    est.n_paths = plan.paths;
    est.horizon_steps = plan.horizon;
    est.truncation_bias_bound = bias;
    est.seed = seed;
    est.method = std::move(method);
    return est;
}

}  // namespace

std::size_t horizon_steps(double r, double s, double tol_h) {
    require(std::isfinite(r) && r > 0.0 && std::isfinite(s) && s > 0.0, ErrorKind::InvalidParameter,
            "horizon needs positive r and s");
    require(tol_h > 0.0 && tol_h < 1.0, ErrorKind::InvalidParameter, "horizon_tol must lie in (0, 1)");
    const double n = std::ceil(std::log(1.0 / tol_h) / (r * s));
    require(n <= static_cast<double>(kMaxHorizon), ErrorKind::Resource, "simulation horizon exceeds 2^31 steps");
    return std::max<std::size_t>(1, static_cast<std::size_t>(n));
}

PriceEstimate estimate_price(const LevyModel& model, const HalfSpaceRegion& region, const Payoff& payoff, double s,
                             std::span<const double> x0, std::size_t n_paths, const McConfig& cfg) {
    check_inputs(model, region, s, n_paths);
    require(std::isfinite(payoff.sup()), ErrorKind::InvalidPayoff, "payoff must be bounded");
    require(x0.size() == model_dim(model), ErrorKind::Shape, "x0 dimension differs from model");
    const double r = positive_rate(model);
    const Plan plan = make_plan(model, r, s, n_paths, cfg);
    if (region.contains(x0)) {
        PriceEstimate est = finish(Moments{}, plan, 0.0, cfg.seed, "immediate");
        est.value = payoff(x0);
        return est;
    }
    const PathModel pm(model, s);
    auto path_value = [&](std::uint64_t unit, double sign) {
        const Entry e = first_entry(pm, region, x0, cfg.seed, unit, sign, plan.horizon);
        return e.step == 0 ? 0.0 : std::exp(-r * s * static_cast<double>(e.step)) * payoff(e.state);
    };
    const Moments m = run_units(plan.units, cfg.threads, [&](std::size_t u) {
        if (plan.antithetic) {
            return UnitResult{0.5 * (path_value(u, 1.0) + path_value(u, -1.0)), 0};
        }
        return UnitResult{path_value(u, 1.0), 0};
    });
    const double bias = payoff.sup() * std::exp(-r * static_cast<double>(plan.horizon) * s);
    return finish(m, plan, bias, cfg.seed, plan.antithetic ? "mc-antithetic" : "mc");
}

PriceEstimate estimate_xi(const LevyModel& model, const HalfSpaceRegion& region, double s, std::size_t n_paths,
                          const McConfig& cfg) {
    check_inputs(model, region, s, n_paths);
    const double r = positive_rate(model);
    const Plan plan = make_plan(model, r, s, n_paths, cfg);
    const PathModel pm(model, s);
    const std::vector<double> x0 = region.gamma();
    auto path_value = [&](std::uint64_t unit, double sign) {
        const Entry e = first_entry(pm, region, x0, cfg.seed, unit, sign, plan.horizon);
        return e.step == 0 ? 0.0 : std::exp(-r * s * static_cast<double>(e.step));
    };
    const Moments m = run_units(plan.units, cfg.threads, [&](std::size_t u) {
        if (plan.antithetic) {
            return UnitResult{0.5 * (path_value(u, 1.0) + path_value(u, -1.0)), 0};
        }
        return UnitResult{path_value(u, 1.0), 0};
    });
    const double bias = std::exp(-r * static_cast<double>(plan.horizon) * s);
    return finish(m, plan, bias, cfg.seed, plan.antithetic ? "mc-antithetic" : "mc");
}

namespace {

bool is_power_of_two(std::size_t m) noexcept { return m != 0 && (m & (m - 1)) == 0; }

/// Fills pts[j] (j = 0..m, row-major by dimension) with the continuous part
/// of the fine path inside one coarse step, pts[0] = 0 and pts[m] = cont.
void bridge(const PathModel& pm, double t, std::size_t m, const RootIncrement& inc, std::uint64_t seed,
            std::uint64_t unit, std::uint64_t step, double sign, std::vector<double>& pts) {
    const std::size_t d = pm.dim();
    pts.assign((m + 1) * d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
        pts[m * d + i] = inc.cont[i];
    }
    auto draw = [&](std::uint64_t id, std::size_t a, std::size_t b, std::size_t c, double frac_var) {
        for (std::size_t g = 0; 2 * g < d; ++g) {
            const auto z = normal_pair(seed, stream_of(unit, kBridgeNormal), index_of(step, id, g));
            for (std::size_t k = 0; k < 2 && 2 * g + k < d; ++k) {
                const std::size_t i = 2 * g + k;
                const double left = pts[a * d + i];
                const double right = pts[b * d + i];
                const double w = static_cast<double>(c - a) / static_cast<double>(b - a);
                pts[c * d + i] = left + w * (right - left) + pm.vol(i) * std::sqrt(frac_var * t) * sign * z[k];
            }
        }
    };
    if (is_power_of_two(m)) {
        std::uint64_t level_start = 1;
        for (std::size_t len = m; len >= 2; len /= 2, level_start *= 2) {
            for (std::size_t i = 0; i * len < m; ++i) {
                const std::size_t a = i * len;
                const std::size_t c = a + len / 2;
                draw(level_start + i, a, a + len, c, static_cast<double>(len) / 4.0);
            }
        }
        return;
    }
    for (std::size_t j = 1; j < m; ++j) {
        const double rem = static_cast<double>(m - j + 1);
        draw(m + j, j - 1, m, j, (rem - 1.0) / rem);
    }
}

}  // namespace

CoupledRhoEstimate estimate_rho_coupled(const LevyModel& model, const HalfSpaceRegion& region, double s,
                                        std::size_t m, std::span<const double> x0, std::size_t n_paths,
                                        const McConfig& cfg) {
    check_inputs(model, region, s, n_paths);
    require(m >= 1, ErrorKind::InvalidParameter, "m: refinement must be at least 1");
    require(m < (std::size_t{1} << 26), ErrorKind::InvalidParameter, "m: refinement too large");
    require(!std::holds_alternative<LatticeWalk>(model), ErrorKind::NotImplemented,
            "coupled refinement needs a continuous-time model");
    require(x0.size() == model_dim(model), ErrorKind::Shape, "x0 dimension differs from model");
    const double r = positive_rate(model);
    const Plan plan = make_plan(model, r, s, n_paths, cfg);
    CoupledRhoEstimate out;
    out.refinement = m;
    if (m == 1) {
        out.estimate = finish(Moments{}, plan, 0.0, cfg.seed, "coupled");
        out.estimate.std_error = 0.0;
        return out;
    }
    const PathModel pm(model, s);
    const double t = s / static_cast<double>(m);
    const std::size_t d = pm.dim();

    auto path_value = [&](std::uint64_t unit, double sign) {
        std::vector<double> x(x0.begin(), x0.end());
        std::vector<double> pts;
        std::vector<double> fine(d);
        std::vector<std::size_t> jump_slot;
        RootIncrement inc;
        std::size_t fine_tau = 0;
        std::size_t coarse_tau = 0;
        for (std::size_t k = 1; k <= plan.horizon; ++k) {
            pm.root(cfg.seed, unit, k, sign, inc);
            if (fine_tau == 0) {
                bridge(pm, t, m, inc, cfg.seed, unit, k, sign, pts);
                jump_slot.clear();
                for (std::uint64_t jmp = 0; jmp < inc.jumps; ++jmp) {
                    const double u =
                        uniform_pair(cfg.seed, stream_of(unit, kJumpUniform), index_of(k, jmp, 0))[0];
                    jump_slot.push_back(static_cast<std::size_t>(u * static_cast<double>(m)));
                }
                for (std::size_t j = 1; j <= m && fine_tau == 0; ++j) {
                    std::uint64_t jumps = inc.jumps;
                    if (j < m) {
                        jumps = static_cast<std::uint64_t>(
                            std::count_if(jump_slot.begin(), jump_slot.end(), [j](std::size_t slot) { return slot < j; }));
                    }
                    for (std::size_t i = 0; i < d; ++i) {
                        const double c = j == m ? inc.cont[i] : pts[j * d + i];
                        const double v = pm.merton() ? c + pm.beta() * static_cast<double>(jumps) : c;
                        fine[i] = x[i] + v;
                    }
                    if (region.contains(fine)) {
                        fine_tau = (k - 1) * m + j;
                    }
                }
            }
            for (std::size_t i = 0; i < d; ++i) {
                x[i] += total_component(pm, inc, i);
            }
            if (region.contains(x)) {
                coarse_tau = k;
                break;
            }
        }
        const double fine_v = fine_tau == 0 ? 0.0 : std::exp(-r * t * static_cast<double>(fine_tau));
        const double coarse_v = coarse_tau == 0 ? 0.0 : std::exp(-r * s * static_cast<double>(coarse_tau));
        const bool violation = coarse_tau != 0 && (fine_tau == 0 || fine_tau > coarse_tau * m);
        return UnitResult{fine_v - coarse_v, violation ? std::size_t{1} : std::size_t{0}};
    };
    const Moments mom = run_units(plan.units, cfg.threads, [&](std::size_t u) {
        if (plan.antithetic) {
            const UnitResult a = path_value(u, 1.0);
            const UnitResult b = path_value(u, -1.0);
            return UnitResult{0.5 * (a.value + b.value), a.flags + b.flags};
        }
        return path_value(u, 1.0);
    });
    const double bias = std::exp(-r * static_cast<double>(plan.horizon) * s);
    out.estimate = finish(mom, plan, bias, cfg.seed, plan.antithetic ? "coupled-antithetic" : "coupled");
    out.order_violations = mom.flags;
    return out;
}

CoupledRhoEstimate estimate_rho_coupled(const LevyModel& model, const HalfSpaceRegion& region, double s,
                                        std::size_t m, std::size_t n_paths, const McConfig& cfg) {
    return estimate_rho_coupled(model, region, s, m, region.gamma(), n_paths, cfg);
}

}  // namespace ccorr
