#include <gtest/gtest.h>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ccorr/cli/config.hpp"
#include "ccorr/cli/run.hpp"
#include "ccorr/error.hpp"

using namespace ccorr;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("ccorr_cli_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string write(const fs::path& dir, const std::string& name, const std::string& text) {
    const fs::path p = dir / name;
    std::ofstream(p) << text;
    return p.string();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(const std::string& command, const std::string& config, const fs::path& out_dir,
               std::optional<std::uint64_t> seed = std::nullopt) {
    cli::RunOptions opts;
    opts.command = command;
    opts.config_path = config;
    opts.out_dir = out_dir.string();
    opts.seed = seed;
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(opts, out, err);
    return {code, out.str(), err.str()};
}

const char* kDriftless = R"([model]
sigma = 0.31622776601683794
r = 0.05

[region]
alpha = 1

[run]
s = 0.1, 0.01, 0.001
)";

}  // namespace

TEST(Config, ParsesSectionsAndLists) {
    const auto cfg = cli::Config::parse("[model]\nsigma = 0.2, 0.3\nr=0.05\n[run]\nn_paths = 10\n");
    EXPECT_EQ(cfg.numbers("model", "sigma"), (std::vector<double>{0.2, 0.3}));
    EXPECT_EQ(cfg.count_or("run", "n_paths", 1), 10u);
    EXPECT_EQ(cfg.number_or("run", "tol", 7.0), 7.0);
    try {
        (void)cfg.number("model", "beta");
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("model.beta"), std::string::npos);
    }
}

TEST(Config, ModelInference) {
    const auto lat = cli::Config::parse("[model]\nsteps = -1:0.5; 1:0.5\n");
    EXPECT_TRUE(std::holds_alternative<LatticeWalk>(cli::parse_model(lat)));
    const auto mj = cli::Config::parse("[model]\nr = 2\nbeta = 1\n");
    const auto model = cli::parse_model(mj);
    ASSERT_TRUE(std::holds_alternative<MertonJumpDiffusion>(model));
    EXPECT_NEAR(std::get<MertonJumpDiffusion>(model).sigma, 0.750624, 1e-6);
}

TEST(Config, MalformedInput) {
    EXPECT_THROW((void)cli::Config::parse("[model\nsigma=1\n"), Error);
    const auto bad = cli::Config::parse("[model]\nsigma = abc\nr = 1\n");
    EXPECT_THROW((void)cli::parse_model(bad), Error);
}

TEST(Format, ShortestRoundTrip) {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, 0.07062238177318632, 123456789.125}) {
        const std::string s = cli::format_number(v);
        double back = 0.0;
        std::from_chars(s.data(), s.data() + s.size(), back);
        EXPECT_EQ(back, v);
    }
    EXPECT_EQ(cli::format_number(0.1), "0.1");
}

TEST(Run, RhoCsvMatchesClosedForm) {
    const auto dir = scratch("rho");
    const auto cfg = write(dir, "c.ini", kDriftless);
    const auto res = invoke("rho", cfg, dir / "out");
    ASSERT_EQ(res.code, 0) << res.err;
    std::istringstream csv(slurp(dir / "out" / "rho.csv"));
    std::string line;
    std::getline(csv, line);
    EXPECT_EQ(line, "s,rho");
    int rows = 0;
    while (std::getline(csv, line)) {
        const auto comma = line.find(',');
        const double s = std::stod(line.substr(0, comma));
        const double rho = std::stod(line.substr(comma + 1));
        EXPECT_NEAR(rho, std::sqrt(-std::expm1(-0.05 * s)), 1e-10);
        ++rows;
    }
    EXPECT_EQ(rows, 3);
}

TEST(Run, MissingSigmaIsValidationError) {
    const auto dir = scratch("missing");
    const auto cfg = write(dir, "c.ini", "[model]\nr = 0.05\n[region]\nalpha = 1\n");
    const auto res = invoke("rho", cfg, dir);
    EXPECT_EQ(res.code, 1);
    EXPECT_NE(res.err.find("sigma"), std::string::npos);
}

TEST(Run, UnknownCommandAndBadRange) {
    const auto dir = scratch("unknown");
    const auto cfg = write(dir, "c.ini", kDriftless);
    auto res = invoke("frobnicate", cfg, dir);
    EXPECT_EQ(res.code, 1);
    EXPECT_NE(res.err.find("frobnicate"), std::string::npos);
    const auto neg = write(dir, "n.ini", "[model]\nsigma = 1\nr = 0.05\n[region]\nalpha = 1\n[run]\ns = -0.1\n");
    res = invoke("rho", neg, dir);
    EXPECT_EQ(res.code, 1);
    EXPECT_NE(res.err.find("run.s"), std::string::npos);
}

TEST(Run, NumericFailureExitsTwo) {
    const auto dir = scratch("numeric");
    const auto cfg = write(dir, "c.ini",
                           "[model]\nsigma = 1\nr = 1e-9\n[region]\nalpha = 1\n[run]\ns = 1e-6\nn_paths = 10\n");
    const auto res = invoke("price", cfg, dir);
    EXPECT_EQ(res.code, 2) << res.err;
}

TEST(Run, LatticeOracleJson) {
    const auto dir = scratch("lattice");
    const auto cfg = write(dir, "c.ini", "[model]\nsteps = -1:0.5; 1:0.5\n[region]\nalpha = 1\n[run]\nq = 0.5\n");
    const auto res = invoke("lattice-oracle", cfg, dir);
    ASSERT_EQ(res.code, 0) << res.err;
    const auto j = nlohmann::json::parse(slurp(dir / "lattice_oracle.json"));
    EXPECT_NEAR(j["lhs"].get<double>(), 0.732051, 1e-6);
    EXPECT_NEAR(j["rhs"].get<double>(), 0.732051, 1e-6);
}

TEST(Run, PriceIsReproducibleAndRoundTrips) {
    const auto dir = scratch("price");
    const auto cfg = write(dir, "c.ini",
                           "[model]\nsigma = 1\nr = 0.5\n[region]\nalpha = 1\n[payoff]\ntype = put\nstrike = 1\n"
                           "[run]\ns = 0.1\nx0 = 0.3\nn_paths = 2000\n");
    ASSERT_EQ(invoke("price", cfg, dir / "a", 5).code, 0);
    ASSERT_EQ(invoke("price", cfg, dir / "b", 5).code, 0);
    const std::string a = slurp(dir / "a" / "price.csv");
    EXPECT_EQ(a, slurp(dir / "b" / "price.csv"));
    EXPECT_NE(a.find(",5\n"), std::string::npos);
    const auto j = nlohmann::json::parse(slurp(dir / "a" / "price.json"));
    std::istringstream csv(a);
    std::string header;
    std::string row;
    std::getline(csv, header);
    std::getline(csv, row);
    EXPECT_EQ(header, "value,stderr,n_paths,horizon_steps,bias_bound,seed");
    EXPECT_EQ(std::stod(row.substr(0, row.find(','))), j["value"].get<double>());
}

TEST(Run, GridSolveAndScaling) {
    const auto dir = scratch("grid");
    const auto cfg = write(dir, "c.ini",
                           "[model]\nsigma = 1\nr = 0.5\n[region]\nalpha = 1\n[grid]\nlower = -2\nupper = 4\n"
                           "[run]\ns = 0.1\n");
    auto res = invoke("grid-solve", cfg, dir);
    ASSERT_EQ(res.code, 0) << res.err;
    const auto j = nlohmann::json::parse(slurp(dir / "grid_solve.json"));
    EXPECT_LE(j["fixed_point_residual"].get<double>(), 1e-12 + j["eps_dom"].get<double>());
    res = invoke("scaling", cfg, dir);
    ASSERT_EQ(res.code, 0) << res.err;
    const auto k = nlohmann::json::parse(slurp(dir / "scaling.json"));
    EXPECT_TRUE(k["pass"].get<bool>());
}
