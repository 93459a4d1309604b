#include "ccorr/levy_models.hpp"

#include <cmath>
#include <map>
#include <numeric>

#include "ccorr/error.hpp"
#include "ccorr/special.hpp"

namespace ccorr {

BlackScholesBasket::BlackScholesBasket(std::vector<double> sigma, double r)
    : sigma_(std::move(sigma)), r_(r) {
    require(!sigma_.empty(), ErrorKind::InvalidParameter, "sigma: basket needs at least one asset");
    require(r_ > 0.0 && std::isfinite(r_), ErrorKind::InvalidParameter, "r: must be positive");
    mu_.reserve(sigma_.size());
    for (double s : sigma_) {
        mu_.push_back(bs_drift(r_, s));
    }
}

double bs_drift(double r, double sigma) {
    require(sigma > 0.0 && std::isfinite(sigma), ErrorKind::InvalidParameter,
            "sigma: volatility must be positive");
    require(r > 0.0 && std::isfinite(r), ErrorKind::InvalidParameter, "r: must be positive");
    return r - 0.5 * sigma * sigma;
}

double merton_calibrate_sigma(double r, double alpha, double beta, double jump_rate) {
    require(r > 0.0 && std::isfinite(r), ErrorKind::InvalidParameter, "r: must be positive");
    require(jump_rate >= 0.0, ErrorKind::InvalidParameter, "jump_rate: must be nonnegative");
    const double slack = r - alpha - jump_rate * std::expm1(beta);
    require(slack > 0.0, ErrorKind::InvalidParameter,
            "no martingale volatility: r - alpha - jump_rate*(e^beta - 1) must be positive");
    return std::sqrt(2.0 * slack);
}

MertonJumpDiffusion MertonJumpDiffusion::calibrated_model(double r, double alpha, double beta,
                                                          double jump_rate) {
    MertonJumpDiffusion m;
    m.alpha = alpha;
    m.beta = beta;
    m.r = r;
    m.jump_rate = jump_rate;
    m.sigma = merton_calibrate_sigma(r, alpha, beta, jump_rate);
    m.calibrated = true;
    m.validate();
    return m;
}

double MertonJumpDiffusion::martingale_residual() const noexcept {
    return std::expm1(alpha - r + 0.5 * sigma * sigma + jump_rate * std::expm1(beta));
}

void MertonJumpDiffusion::validate() const {
    require(beta > 0.0 && std::isfinite(beta), ErrorKind::InvalidParameter, "beta: jump size must be positive");
    require(sigma > 0.0 && std::isfinite(sigma), ErrorKind::InvalidParameter, "sigma: must be positive");
    require(r > 0.0 && std::isfinite(r), ErrorKind::InvalidParameter, "r: must be positive");
    require(jump_rate >= 0.0 && std::isfinite(jump_rate), ErrorKind::InvalidParameter,
            "jump_rate: must be nonnegative");
    require(std::isfinite(alpha), ErrorKind::InvalidParameter, "alpha: must be finite");
    if (calibrated) {
        require(std::fabs(martingale_residual()) <= 1e-12, ErrorKind::InvalidParameter,
                "sigma: calibrated flag set but martingale residual exceeds 1e-12");
    }
}

void LatticeWalk::validate() const {
    require(dim >= 1, ErrorKind::InvalidParameter, "dim: must be positive");
    require(!steps.empty(), ErrorKind::InvalidParameter, "steps: walk needs at least one step");
    double total = 0.0;
    for (const auto& st : steps) {
        require(st.point.size() == dim, ErrorKind::InvalidParameter,
                "steps: every lattice point must have `dim` coordinates");
        require(st.prob >= 0.0 && std::isfinite(st.prob), ErrorKind::InvalidParameter,
                "steps: probabilities must be nonnegative");
        total += st.prob;
    }
    require(std::fabs(total - 1.0) <= 1e-15 * static_cast<double>(steps.size()) + 1e-15,
            ErrorKind::InvalidParameter, "steps: probabilities must sum to 1");
}

std::size_t model_dim(const LevyModel& model) noexcept {
    return std::visit(
        [](const auto& m) -> std::size_t {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, BlackScholesBasket>) {
                return m.dim();
            } else if constexpr (std::is_same_v<T, MertonJumpDiffusion>) {
                return 1;
            } else {
                return m.dim;
            }
        },
        model);
}

double model_rate(const LevyModel& model) noexcept {
    if (const auto* bs = std::get_if<BlackScholesBasket>(&model)) {
        return bs->r();
    }
    if (const auto* mj = std::get_if<MertonJumpDiffusion>(&model)) {
        return mj->r;
    }
    return std::get<LatticeWalk>(model).r;
}

std::string model_name(const LevyModel& model) {
    switch (model.index()) {
        case 0: return "black_scholes";
        case 1: return "merton";
        default: return "lattice";
    }
}

bool is_gaussian(const LevyModel& model) noexcept {
    return std::holds_alternative<BlackScholesBasket>(model);
}

std::size_t poisson_truncation(double mean, double tol) {
    require(mean >= 0.0 && std::isfinite(mean), ErrorKind::InvalidParameter, "poisson mean must be finite");
    require(tol > 0.0, ErrorKind::InvalidParameter, "tol: must be positive");
    if (mean == 0.0) {
        return 0;
    }
    const double log_tol = std::log(tol);
    const auto start = static_cast<std::size_t>(std::floor(mean));
    for (std::size_t k = start; ; ++k) {
        const double kd = static_cast<double>(k);
        if (kd + 2.0 <= mean) {
            continue;
        }
        // e^{-t} t^{K+1}/(K+1)! * 1/(1 - t/(K+2)) bounds the mass above K.
        const double log_bound = log_poisson_pmf(k + 1, mean) - std::log1p(-mean / (kd + 2.0));
        if (log_bound <= log_tol) {
            return k;
        }
    }
}

namespace {

double lattice_prob_below(const LatticeWalk& walk, double level, double t) {
    require(walk.dim == 1, ErrorKind::InvalidParameter, "marginal_prob_below needs a 1-d model");
    const double steps_d = std::round(t);
    require(std::fabs(steps_d - t) < 1e-9 && steps_d >= 1.0, ErrorKind::InvalidParameter,
            "t: a lattice walk is observed at whole numbers of steps");
    std::map<std::int64_t, double> dist{{0, 1.0}};
    for (long n = 0; n < static_cast<long>(steps_d); ++n) {
        std::map<std::int64_t, double> next;
        for (const auto& [x, p] : dist) {
            for (const auto& st : walk.steps) {
                next[x + st.point[0]] += p * st.prob;
            }
        }
        dist = std::move(next);
    }
    CompensatedSum acc;
    for (const auto& [x, p] : dist) {
        if (static_cast<double>(x) < level) {
            acc.add(p);
        }
    }
    return acc.value();
}

}  // namespace

double marginal_prob_below(const LevyModel& model, double level, double t, double tol) {
    require(t > 0.0 && std::isfinite(t), ErrorKind::InvalidParameter, "t: must be positive");
    if (const auto* bs = std::get_if<BlackScholesBasket>(&model)) {
        require(bs->dim() == 1, ErrorKind::InvalidParameter, "marginal_prob_below needs a 1-d model");
        const double sd = bs->sigma()[0] * std::sqrt(t);
        return normal_cdf((level - bs->mu()[0] * t) / sd);
    }
    if (const auto* mj = std::get_if<MertonJumpDiffusion>(&model)) {
        const double mean = mj->jump_rate * t;
        const std::size_t kmax = poisson_truncation(mean, tol);
        const double sd = mj->sigma * std::sqrt(t);
        CompensatedSum acc;
        for (std::size_t k = 0; k <= kmax; ++k) {
            const double w = std::exp(log_poisson_pmf(k, mean));
            acc.add(w * normal_cdf((level - mj->alpha * t - mj->beta * static_cast<double>(k)) / sd));
        }
        return acc.value();
    }
    return lattice_prob_below(std::get<LatticeWalk>(model), level, t);
}

std::uint64_t poisson_from_uniform(double mean, double u) {
    require(mean >= 0.0 && mean < 700.0, ErrorKind::InvalidParameter,
            "poisson mean outside the supported sampling range [0, 700)");
    double p = std::exp(-mean);
    double cdf = p;
    std::uint64_t k = 0;
    while (u > cdf && p > 0.0) {
        ++k;
        p *= mean / static_cast<double>(k);
        cdf += p;
    }
    return k;
}

void sample_increment(const LevyModel& model, double s, CounterRng& rng, std::span<double> out) {
    require(s > 0.0 && std::isfinite(s), ErrorKind::InvalidParameter, "s: mesh must be positive");
    require(out.size() == model_dim(model), ErrorKind::Shape, "increment buffer has wrong dimension");
    if (const auto* bs = std::get_if<BlackScholesBasket>(&model)) {
        const double rs = std::sqrt(s);
        for (std::size_t i = 0; i < bs->dim(); ++i) {
            out[i] = bs->mu()[i] * s + bs->sigma()[i] * rs * rng.normal();
        }
        return;
    }
    if (const auto* mj = std::get_if<MertonJumpDiffusion>(&model)) {
        const auto jumps = poisson_from_uniform(mj->jump_rate * s, rng.uniform());
        out[0] = mj->alpha * s + mj->beta * static_cast<double>(jumps) +
                 mj->sigma * std::sqrt(s) * rng.normal();
        return;
    }
    const auto& walk = std::get<LatticeWalk>(model);
    const double u = rng.uniform();
    double cdf = 0.0;
    const LatticeStep* chosen = &walk.steps.back();
    for (const auto& st : walk.steps) {
        cdf += st.prob;
        if (u < cdf) {
            chosen = &st;
            break;
        }
    }
    for (std::size_t i = 0; i < walk.dim; ++i) {
        out[i] = static_cast<double>(chosen->point[i]);
    }
}

std::vector<double> sample_increment(const LevyModel& model, double s, CounterRng& rng) {
    std::vector<double> out(model_dim(model));
    sample_increment(model, s, rng, out);
    return out;
}

}  // namespace ccorr
