#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ccorr::cli {

inline const std::vector<std::string>& commands() {
    static const std::vector<std::string> names{"rho",      "xi-check", "price",         "rho-mc",
                                                "grid-solve", "scaling", "lattice-oracle"};
    return names;
}

struct RunOptions {
    std::string command;
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> threads;
    std::optional<double> tol;
};

/// Runs one command and writes its outputs under opts.out_dir.
/// Returns 0 on success, 1 on invalid input, 2 on numeric or resource
/// failure; the message goes to `err`.
int run(const RunOptions& opts, std::ostream& out, std::ostream& err);

/// Shortest decimal string that parses back to the same double.
[[nodiscard]] std::string format_number(double v);

}  // namespace ccorr::cli
