#include "ccorr/cli/run.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "ccorr/cli/config.hpp"
#include "ccorr/error.hpp"
#include "ccorr/lattice.hpp"
#include "ccorr/montecarlo.hpp"
#include "ccorr/operator_grid.hpp"
#include "ccorr/scaling_fit.hpp"
#include "ccorr/wh_series.hpp"

namespace ccorr::cli {

using Json = nlohmann::ordered_json;

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return {buf, res.ptr};
}

namespace {

constexpr std::uint64_t kDefaultSeed = 20240601;

class Csv {
public:
    explicit Csv(std::vector<std::string> header) : width_(header.size()) { rows_.push_back(std::move(header)); }

    Csv& row() {
        rows_.emplace_back();
        return *this;
    }
    Csv& num(double v) {
        rows_.back().push_back(format_number(v));
        return *this;
    }
    Csv& count(std::uint64_t v) {
        rows_.back().push_back(std::to_string(v));
        return *this;
    }

    void write(const std::filesystem::path& path) const {
        std::ofstream out(path, std::ios::binary);
        require(out.good(), ErrorKind::Resource, "cannot write '" + path.string() + "'");
        for (const auto& r : rows_) {
            require(r.size() == width_, ErrorKind::Numeric, "internal: ragged CSV row");
            for (std::size_t i = 0; i < r.size(); ++i) {
                out << (i ? "," : "") << r[i];
            }
            out << '\n';
        }
        require(out.good(), ErrorKind::Resource, "failed writing '" + path.string() + "'");
    }

private:
    std::size_t width_;
    std::vector<std::vector<std::string>> rows_;
};

void write_json(const std::filesystem::path& path, const Json& j) {
    std::ofstream out(path, std::ios::binary);
    require(out.good(), ErrorKind::Resource, "cannot write '" + path.string() + "'");
    out << j.dump(2) << '\n';
    require(out.good(), ErrorKind::Resource, "failed writing '" + path.string() + "'");
}

struct Context {
    Config cfg;
    LevyModel model;
    HalfSpaceRegion region;
    std::filesystem::path out_dir;
    std::uint64_t seed;
    std::size_t threads;
    double tol;
    std::ostream& out;
};

double positive(const std::string& key, double v) {
    require(std::isfinite(v) && v > 0.0, ErrorKind::InvalidParameter, "run." + key + ": must be positive");
    return v;
}

std::vector<double> mesh_list(const Context& c, std::vector<double> fallback) {
    auto s = c.cfg.numbers_or("run", "s", std::move(fallback));
    for (double v : s) {
        positive("s", v);
    }
    return s;
}

double single_mesh(const Context& c, double fallback) {
    const auto s = mesh_list(c, {fallback});
    require(s.size() == 1, ErrorKind::Config, "run.s: this command takes a single mesh size");
    return s.front();
}

std::size_t paths(const Context& c) {
    const auto n = c.cfg.count_or("run", "n_paths", 100000);
    require(n >= 2, ErrorKind::InvalidParameter, "run.n_paths: need at least two paths");
    return n;
}

McConfig mc_config(const Context& c) {
    McConfig mc;
    mc.seed = c.seed;
    mc.threads = c.threads;
    mc.horizon_tol = c.cfg.number_or("run", "horizon_tol", mc.horizon_tol);
    mc.antithetic = c.cfg.flag_or("run", "antithetic", true);
    return mc;
}

Json estimate_json(const PriceEstimate& e) {
    return Json{{"value", e.value},
                {"stderr", e.std_error},
                {"n_paths", e.n_paths},
                {"horizon_steps", e.horizon_steps},
                {"bias_bound", e.truncation_bias_bound},
                {"seed", e.seed},
                {"method", e.method}};
}

void cmd_rho(Context& c) {
    const SeriesConfig sc{c.tol};
    Csv csv({"s", "rho"});
    Json rows = Json::array();
    const auto* bs = std::get_if<BlackScholesBasket>(&c.model);
    for (double s : mesh_list(c, {0.1, 0.01, 0.001})) {
        const SeriesValue v = rho(c.model, c.region, s, sc);
        csv.row().num(s).num(v.value);
        Json row{{"s", s}, {"rho", v.value}, {"n_terms", v.n_terms}, {"tail_bound", v.tail_bound}};
        if (bs != nullptr) {
            const ReducedModel red = reduce_dim(c.region.alpha(), bs->mu(), bs->sigma());
            const RhoBounds b = rho_bounds(red.drift, red.vol, bs->r(), s);
            row["lower"] = b.lower;
            row["upper"] = b.upper;
        }
        rows.push_back(row);
        c.out << "s=" << format_number(s) << " rho=" << format_number(v.value) << '\n';
    }
    csv.write(c.out_dir / "rho.csv");
    write_json(c.out_dir / "rho.json", Json{{"model", model_name(c.model)}, {"tol", c.tol}, {"rows", rows}});
}

void cmd_xi_check(Context& c) {
    const SeriesConfig sc{c.tol};
    const McConfig mc = mc_config(c);
    const std::size_t n = paths(c);
    const double r = model_rate(c.model);
    Csv csv({"s", "q", "xi_series", "xi_mc", "stderr", "z", "n_paths", "horizon_steps", "bias_bound", "seed"});
    for (double s : mesh_list(c, {0.1, 0.01})) {
        const double q = std::exp(-r * s);
        const SeriesValue series = xi(c.model, c.region, s, q, sc);
        const PriceEstimate est = estimate_xi(c.model, c.region, s, n, mc);
        const double z = est.std_error > 0.0 ? (est.value - series.value) / est.std_error : 0.0;
        csv.row().num(s).num(q).num(series.value).num(est.value).num(est.std_error).num(z).count(est.n_paths)
            .count(est.horizon_steps).num(est.truncation_bias_bound).count(est.seed);
        c.out << "s=" << format_number(s) << " series=" << format_number(series.value)
              << " mc=" << format_number(est.value) << " z=" << format_number(z) << '\n';
    }
    csv.write(c.out_dir / "xi_check.csv");
}

void cmd_price(Context& c) {
    const double s = single_mesh(c, 0.1);
    const Payoff payoff = parse_payoff(c.cfg, c.region);
    const auto x0 = c.cfg.numbers_or("run", "x0", std::vector<double>(model_dim(c.model), 0.0));
    require(x0.size() == model_dim(c.model), ErrorKind::Config, "run.x0: dimension differs from the model");
    const PriceEstimate est = estimate_price(c.model, c.region, payoff, s, x0, paths(c), mc_config(c));
    Csv csv({"value", "stderr", "n_paths", "horizon_steps", "bias_bound", "seed"});
    csv.row().num(est.value).num(est.std_error).count(est.n_paths).count(est.horizon_steps)
        .num(est.truncation_bias_bound).count(est.seed);
    csv.write(c.out_dir / "price.csv");
    write_json(c.out_dir / "price.json", estimate_json(est));
    c.out << "value=" << format_number(est.value) << " stderr=" << format_number(est.std_error) << '\n';
}

void cmd_rho_mc(Context& c) {
    const double s = single_mesh(c, 0.1);
    const McConfig mc = mc_config(c);
    const std::size_t n = paths(c);
    const auto ms = c.cfg.numbers_or("run", "m", {2, 8, 32, 128});
    const auto x0 = c.cfg.numbers_or("run", "x0", c.region.gamma());
    require(x0.size() == model_dim(c.model), ErrorKind::Config, "run.x0: dimension differs from the model");
    double series = std::numeric_limits<double>::quiet_NaN();
    if (!std::holds_alternative<LatticeWalk>(c.model) && x0 == c.region.gamma()) {
        series = rho(c.model, c.region, s, SeriesConfig{c.tol}).value;
    }
    Csv csv({"m", "value", "stderr", "n_paths", "horizon_steps", "bias_bound", "seed", "order_violations",
             "rho_series"});
    for (double mv : ms) {
        require(mv >= 1.0 && mv == std::trunc(mv), ErrorKind::InvalidParameter,
                "run.m: refinements must be positive integers");
        const auto m = static_cast<std::size_t>(mv);
        const CoupledRhoEstimate est = estimate_rho_coupled(c.model, c.region, s, m, x0, n, mc);
        const PriceEstimate& e = est.estimate;
        csv.row().count(m).num(e.value).num(e.std_error).count(e.n_paths).count(e.horizon_steps)
            .num(e.truncation_bias_bound).count(e.seed).count(est.order_violations).num(series);
        c.out << "m=" << m << " value=" << format_number(e.value) << " stderr=" << format_number(e.std_error) << '\n';
    }
    csv.write(c.out_dir / "rho_mc.csv");
}

void cmd_grid_solve(Context& c) {
    const auto* bs = std::get_if<BlackScholesBasket>(&c.model);
    require(bs != nullptr, ErrorKind::NotImplemented, "model.type: grid-solve needs a Black-Scholes model");
    const double s = single_mesh(c, 0.1);
    const std::size_t d = bs->dim();
    const auto lower = c.cfg.numbers("grid", "lower");
    const auto upper = c.cfg.numbers("grid", "upper");
    require(lower.size() == d, ErrorKind::Config, "grid.lower: dimension differs from the model");
    require(upper.size() == d, ErrorKind::Config, "grid.upper: dimension differs from the model");
    const double h = positive("h", c.cfg.number_or("grid", "h", std::sqrt(s) / 8.0));
    const GridSpec grid = GridSpec::aligned(lower, upper, h);
    const Payoff payoff = parse_payoff(c.cfg, c.region);
    const GridField g = GridField::sample(grid, [&](std::span<const double> x) { return payoff(x); });
    const DiscountKernel kernel(grid, s, bs->r(), bs->mu(), bs->sigma());
    const NeumannResult res = neumann_price(kernel, c.region, g, c.tol);
    const double residual = fixed_point_residual(res.value, kernel, c.region);

    std::vector<std::string> header;
    for (std::size_t a = 0; a < d; ++a) {
        header.push_back("x" + std::to_string(a + 1));
    }
    header.emplace_back("value");
    Csv csv(header);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        csv.row();
        for (double x : grid.center_of(i)) {
            csv.num(x);
        }
        csv.num(res.value[i]);
    }
    csv.write(c.out_dir / "grid_solve.csv");
    write_json(c.out_dir / "grid_solve.json",
               Json{{"s", s}, {"h", h}, {"cells", grid.cells()}, {"iterations", res.iterations},
                    {"last_term", res.last_term}, {"eps_dom", res.eps_dom}, {"fixed_point_residual", residual},
                    {"tol", c.tol}});
    c.out << "cells=" << grid.size() << " iterations=" << res.iterations
          << " residual=" << format_number(residual) << '\n';
}

void cmd_scaling(Context& c) {
    ScalingConfig sc;
    sc.s_max = c.cfg.number_or("run", "s_max", sc.s_max);
    sc.factor = c.cfg.number_or("run", "factor", sc.factor);
    sc.points = c.cfg.count_or("run", "points", sc.points);
    sc.fit_points = c.cfg.count_or("run", "fit_points", sc.fit_points);
    sc.tolerance = c.cfg.number_or("run", "tolerance", sc.tolerance);
    sc.series.tol = c.tol;
    const ScalingReport rep = scaling_report(c.model, c.region, sc);
    Csv csv({"s", "rho", "lower", "upper"});
    for (std::size_t i = 0; i < rep.s_grid.size(); ++i) {
        csv.row().num(rep.s_grid[i]).num(rep.rho_values[i]).num(rep.lower[i]).num(rep.upper[i]);
    }
    csv.write(c.out_dir / "scaling.csv");
    write_json(c.out_dir / "scaling.json",
               Json{{"slope", rep.fit.slope}, {"intercept", rep.fit.intercept}, {"r_squared", rep.fit.r_squared},
                    {"bracket", {rep.bracket.lo, rep.bracket.hi}}, {"tolerance", rep.tolerance},
                    {"fit_points", sc.fit_points}, {"pass", rep.within_bracket},
                    {"non_polynomial", rep.non_polynomial}});
    c.out << "slope=" << format_number(rep.fit.slope) << " bracket=[" << format_number(rep.bracket.lo) << ","
          << format_number(rep.bracket.hi) << "] " << (rep.within_bracket ? "pass" : "fail") << '\n';
}

void cmd_lattice_oracle(Context& c) {
    const auto* walk = std::get_if<LatticeWalk>(&c.model);
    require(walk != nullptr, ErrorKind::NotImplemented, "model.type: lattice-oracle needs a lattice walk");
    const double q = c.cfg.number_or("run", "q", 0.5);
    const auto n_max = c.cfg.count_or("run", "n_max", 200);
    const WienerHopfCheck chk = wiener_hopf_zero_freq_check(*walk, c.region, q, n_max);
    write_json(c.out_dir / "lattice_oracle.json",
               Json{{"q", chk.q}, {"n_max", chk.n_max}, {"lhs", chk.lhs}, {"rhs", chk.rhs}, {"gap", chk.gap},
                    {"tail_bound", chk.tail_bound}, {"pass", chk.gap <= chk.tail_bound}});
    c.out << "lhs=" << format_number(chk.lhs) << " rhs=" << format_number(chk.rhs)
          << " gap=" << format_number(chk.gap) << '\n';
}

}  // namespace

int run(const RunOptions& opts, std::ostream& out, std::ostream& err) {
    try {
        const auto& names = commands();
        require(std::find(names.begin(), names.end(), opts.command) != names.end(), ErrorKind::InvalidParameter,
                "command: unknown command '" + opts.command + "'");
        require(!opts.config_path.empty(), ErrorKind::Config, "--config: a config file is required");
        Config cfg = Config::load(opts.config_path);
        LevyModel model = parse_model(cfg);
        HalfSpaceRegion region = parse_region(cfg, model_dim(model));
        const double tol = opts.tol.value_or(cfg.number_or("run", "tol", 1e-12));
        require(std::isfinite(tol) && tol > 0.0 && tol < 1.0, ErrorKind::InvalidParameter,
                "tol: must lie in (0, 1)");
        const std::uint64_t seed = opts.seed.value_or(cfg.count_or("run", "seed", kDefaultSeed));
        const std::size_t threads = opts.threads.value_or(cfg.count_or("run", "threads", 1));
        std::filesystem::create_directories(opts.out_dir);
        Context ctx{std::move(cfg), std::move(model), std::move(region), opts.out_dir, seed, threads, tol, out};

        if (opts.command == "rho") {
            cmd_rho(ctx);
        } else if (opts.command == "xi-check") {
            cmd_xi_check(ctx);
        } else if (opts.command == "price") {
            cmd_price(ctx);
        } else if (opts.command == "rho-mc") {
            cmd_rho_mc(ctx);
        } else if (opts.command == "grid-solve") {
            cmd_grid_solve(ctx);
        } else if (opts.command == "scaling") {
            cmd_scaling(ctx);
        } else {
            cmd_lattice_oracle(ctx);
        }
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return e.is_validation() ? 1 : 2;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::bad_alloc&) {
        err << "error: out of memory\n";
        return 2;
    }
}

}  // namespace ccorr::cli
