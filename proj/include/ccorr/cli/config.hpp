#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ccorr/levy_models.hpp"
#include "ccorr/regions.hpp"

namespace ccorr::cli {

/// Flat INI file with sections [model], [region], [payoff], [run], [grid].
/// Every accessor names the offending `section.key` in its error.
class Config {
public:
    [[nodiscard]] static Config load(const std::string& path);
    [[nodiscard]] static Config parse(const std::string& text);

    [[nodiscard]] bool has(const std::string& section, const std::string& key) const;
    [[nodiscard]] bool has_section(const std::string& section) const;
    [[nodiscard]] std::optional<std::string> get(const std::string& section, const std::string& key) const;
    [[nodiscard]] std::string text(const std::string& section, const std::string& key) const;

    [[nodiscard]] double number(const std::string& section, const std::string& key) const;
    [[nodiscard]] double number_or(const std::string& section, const std::string& key, double fallback) const;
    [[nodiscard]] std::vector<double> numbers(const std::string& section, const std::string& key) const;
    [[nodiscard]] std::vector<double> numbers_or(const std::string& section, const std::string& key,
                                                 std::vector<double> fallback) const;
    [[nodiscard]] std::uint64_t count_or(const std::string& section, const std::string& key,
                                         std::uint64_t fallback) const;
    [[nodiscard]] bool flag_or(const std::string& section, const std::string& key, bool fallback) const;

private:
    std::map<std::string, std::map<std::string, std::string>> entries_;
};

/// type = bs | merton | lattice, inferred from the keys when absent.
[[nodiscard]] LevyModel parse_model(const Config& cfg);
[[nodiscard]] HalfSpaceRegion parse_region(const Config& cfg, std::size_t dim);
/// Masked to `region` unless payoff.masked = false.
[[nodiscard]] Payoff parse_payoff(const Config& cfg, const HalfSpaceRegion& region);

}  // namespace ccorr::cli
