#pragma once

#include <array>
#include <cstdint>

namespace ccorr {

/// Philox4x32-10 counter-based generator (Salmon et al., Random123).
///
/// Every draw is a pure function of (key, counter), so a stream can be
/// addressed directly without replaying its predecessors.
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    [[nodiscard]] static Counter generate(Counter ctr, Key key) noexcept;
};

/// Uniform in the open interval (0, 1) from two 32-bit words (52 bits,
/// centred in each bin so neither endpoint is reachable).
[[nodiscard]] double to_open_unit(std::uint32_t hi, std::uint32_t lo) noexcept;

/// Draws addressed by (seed, stream, index).  The seed is the Philox key,
/// stream and index fill the 128-bit counter.
[[nodiscard]] std::array<double, 2> uniform_pair(std::uint64_t seed, std::uint64_t stream,
                                                 std::uint64_t index) noexcept;

/// Two independent standard normals (Box-Muller) for one counter value.
[[nodiscard]] std::array<double, 2> normal_pair(std::uint64_t seed, std::uint64_t stream,
                                                std::uint64_t index) noexcept;

/// Sequential view of one stream.  Copyable; two copies with the same
/// position produce the same draws.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
        : seed_(seed), stream_(stream) {}

    double uniform() noexcept;
    double normal() noexcept;

    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] std::uint64_t stream() const noexcept { return stream_; }
    /// Number of counter blocks consumed so far.
    [[nodiscard]] std::uint64_t position() const noexcept { return index_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t index_ = 0;
    std::array<double, 2> uni_{};
    std::array<double, 2> gauss_{};
    int uni_left_ = 0;
    int gauss_left_ = 0;
};

}  // namespace ccorr
