#include "ccorr/rng.hpp"

#include <cmath>
#include <numbers>

namespace ccorr {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

inline Philox4x32::Counter round(Philox4x32::Counter c, Philox4x32::Key k) noexcept {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, c[0], hi0, lo0);
    mulhilo(kMul1, c[2], hi1, lo1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

inline Philox4x32::Counter counter(std::uint64_t stream, std::uint64_t index) noexcept {
    return {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
            static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
}

inline Philox4x32::Key key(std::uint64_t seed) noexcept {
    return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

}  // namespace

Philox4x32::Counter Philox4x32::generate(Counter ctr, Key k) noexcept {
    for (int i = 0; i < 9; ++i) {
        ctr = round(ctr, k);
        k[0] += kWeyl0;
        k[1] += kWeyl1;
    }
    return round(ctr, k);
}

double to_open_unit(std::uint32_t hi, std::uint32_t lo) noexcept {
    const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 20) ^ (lo >> 12);
    return (static_cast<double>(bits & ((1ULL << 52) - 1)) + 0.5) * 0x1.0p-52;
}

std::array<double, 2> uniform_pair(std::uint64_t seed, std::uint64_t stream,
                                   std::uint64_t index) noexcept {
    const auto w = Philox4x32::generate(counter(stream, index), key(seed));
    return {to_open_unit(w[0], w[1]), to_open_unit(w[2], w[3])};
}

std::array<double, 2> normal_pair(std::uint64_t seed, std::uint64_t stream,
                                  std::uint64_t index) noexcept {
    const auto u = uniform_pair(seed, stream, index);
    const double radius = std::sqrt(-2.0 * std::log(u[0]));
    const double angle = 2.0 * std::numbers::pi * u[1];
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

double CounterRng::uniform() noexcept {
    if (uni_left_ == 0) {
        uni_ = uniform_pair(seed_, stream_, index_++);
        uni_left_ = 2;
    }
    return uni_[2 - uni_left_--];
}

double CounterRng::normal() noexcept {
    if (gauss_left_ == 0) {
        gauss_ = normal_pair(seed_, stream_, index_++);
        gauss_left_ = 2;
    }
    return gauss_[2 - gauss_left_--];
}

}  // namespace ccorr
