#include "ccorr/cli/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ccorr/error.hpp"

namespace ccorr::cli {

namespace {

std::string trim(std::string_view v) {
    const auto b = v.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = v.find_last_not_of(" \t\r");
    return std::string(v.substr(b, e - b + 1));
}

std::string name(const std::string& section, const std::string& key) { return section + "." + key; }

double parse_double(std::string_view tok, const std::string& where) {
    const std::string t = trim(tok);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    require(ec == std::errc{} && ptr == t.data() + t.size() && !t.empty(), ErrorKind::Config,
            where + ": expected a number, got '" + t + "'");
    require(std::isfinite(v), ErrorKind::Config, where + ": value must be finite");
    return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep)) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

}  // namespace

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), ErrorKind::Config, "config: cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

Config Config::parse(const std::string& text) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        std::istringstream in(text);
        pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        fail(ErrorKind::Config, std::string("config: malformed INI (") + e.message() + " at line " +
                                    std::to_string(e.line()) + ")");
    }
    Config cfg;
    for (const auto& [section, body] : tree) {
        require(!body.empty() || body.data().empty(), ErrorKind::Config, "config: key '" + section + "' outside a section");
        for (const auto& [key, value] : body) {
            cfg.entries_[section][key] = trim(value.data());
        }
    }
    return cfg;
}

bool Config::has(const std::string& section, const std::string& key) const { return get(section, key).has_value(); }

bool Config::has_section(const std::string& section) const { return entries_.contains(section); }

std::optional<std::string> Config::get(const std::string& section, const std::string& key) const {
    const auto s = entries_.find(section);
    if (s == entries_.end()) {
        return std::nullopt;
    }
    const auto k = s->second.find(key);
    if (k == s->second.end()) {
        return std::nullopt;
    }
    return k->second;
}

std::string Config::text(const std::string& section, const std::string& key) const {
    auto v = get(section, key);
    require(v.has_value(), ErrorKind::Config, name(section, key) + ": required key missing");
    return *v;
}

double Config::number(const std::string& section, const std::string& key) const {
    return parse_double(text(section, key), name(section, key));
}

double Config::number_or(const std::string& section, const std::string& key, double fallback) const {
    return has(section, key) ? number(section, key) : fallback;
}

std::vector<double> Config::numbers(const std::string& section, const std::string& key) const {
    std::string raw = text(section, key);
    std::replace(raw.begin(), raw.end(), ' ', ',');
    std::vector<double> out;
    for (const auto& tok : split(raw, ',')) {
        out.push_back(parse_double(tok, name(section, key)));
    }
    require(!out.empty(), ErrorKind::Config, name(section, key) + ": expected at least one number");
    return out;
}

std::vector<double> Config::numbers_or(const std::string& section, const std::string& key,
                                       std::vector<double> fallback) const {
    return has(section, key) ? numbers(section, key) : std::move(fallback);
}

std::uint64_t Config::count_or(const std::string& section, const std::string& key, std::uint64_t fallback) const {
    if (!has(section, key)) {
        return fallback;
    }
    const std::string t = text(section, key);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    require(ec == std::errc{} && ptr == t.data() + t.size() && !t.empty(), ErrorKind::Config,
            name(section, key) + ": expected a nonnegative integer, got '" + t + "'");
    return v;
}

bool Config::flag_or(const std::string& section, const std::string& key, bool fallback) const {
    if (!has(section, key)) {
        return fallback;
    }
    const std::string t = text(section, key);
    if (t == "true" || t == "1" || t == "yes") {
        return true;
    }
    if (t == "false" || t == "0" || t == "no") {
        return false;
    }
    fail(ErrorKind::Config, name(section, key) + ": expected true or false, got '" + t + "'");
}

namespace {

LevyModel parse_model_impl(const Config& cfg) {
    require(cfg.has_section("model"), ErrorKind::Config, "model: section missing");
    std::string type;
    if (auto t = cfg.get("model", "type")) {
        type = *t;
    } else if (cfg.has("model", "steps")) {
        type = "lattice";
    } else if (cfg.has("model", "beta")) {
        type = "merton";
    } else {
        type = "bs";
    }
    if (type == "bs") {
        const auto sigma = cfg.numbers("model", "sigma");
        return BlackScholesBasket(sigma, cfg.number("model", "r"));
    }
    if (type == "merton") {
        const double r = cfg.number("model", "r");
        const double alpha = cfg.number_or("model", "alpha", 0.0);
        const double beta = cfg.number("model", "beta");
        const double rate = cfg.number_or("model", "jump_rate", 1.0);
        MertonJumpDiffusion m;
        if (cfg.has("model", "sigma")) {
            m = MertonJumpDiffusion{alpha, beta, cfg.number("model", "sigma"), r, rate, false};
        } else {
            m = MertonJumpDiffusion::calibrated_model(r, alpha, beta, rate);
        }
        m.validate();
        return m;
    }
    if (type == "lattice") {
        LatticeWalk walk;
        walk.r = cfg.number_or("model", "r", 0.0);
        for (const auto& item : split(cfg.text("model", "steps"), ';')) {
            const auto colon = item.find(':');
            require(colon != std::string::npos, ErrorKind::Config,
                    "model.steps: each step is 'point:prob', got '" + item + "'");
            LatticeStep st;
            for (const auto& c : split(item.substr(0, colon), ',')) {
                const double v = parse_double(c, "model.steps");
                require(v == std::trunc(v), ErrorKind::Config, "model.steps: coordinates must be integers");
                st.point.push_back(static_cast<std::int64_t>(v));
            }
            st.prob = parse_double(item.substr(colon + 1), "model.steps");
            walk.steps.push_back(std::move(st));
        }
        require(!walk.steps.empty(), ErrorKind::Config, "model.steps: no steps given");
        walk.dim = walk.steps.front().point.size();
        walk.validate();
        return walk;
    }
    fail(ErrorKind::Config, "model.type: unknown model '" + type + "' (expected bs, merton or lattice)");
}

}  // namespace

LevyModel parse_model(const Config& cfg) {
    try {
        return parse_model_impl(cfg);
    } catch (const Error& e) {
        const std::string what = e.what();
        if (what.starts_with("model")) {
            throw;
        }
        fail(e.kind(), "model." + what);
    }
}

HalfSpaceRegion parse_region(const Config& cfg, std::size_t dim) {
    const auto alpha = cfg.numbers("region", "alpha");
    const auto gamma = cfg.numbers_or("region", "gamma", std::vector<double>(alpha.size(), 0.0));
    require(alpha.size() == dim, ErrorKind::Config, "region.alpha: dimension differs from the model");
    require(gamma.size() == dim, ErrorKind::Config, "region.gamma: dimension differs from the model");
    return HalfSpaceRegion(gamma, alpha, cfg.flag_or("region", "strict", true));
}

Payoff parse_payoff(const Config& cfg, const HalfSpaceRegion& region) {
    const std::string type = cfg.get("payoff", "type").value_or("constant");
    std::optional<HalfSpaceRegion> mask;
    if (cfg.flag_or("payoff", "masked", true)) {
        mask = region;
    }
    if (type == "constant") {
        return Payoff(ConstantPayoff{cfg.number_or("payoff", "value", 1.0)}, mask);
    }
    if (type == "put") {
        return Payoff(PutPayoff{cfg.number("payoff", "strike")}, mask);
    }
    if (type == "table") {
        return Payoff(TablePayoff{cfg.numbers("payoff", "x"), cfg.numbers("payoff", "values")}, mask);
    }
    fail(ErrorKind::Config, "payoff.type: unknown payoff '" + type + "' (expected constant, put or table)");
}

}  // namespace ccorr::cli
