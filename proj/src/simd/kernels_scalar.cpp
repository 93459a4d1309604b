#include <algorithm>
#include <cmath>

#include "ccorr/simd/kernels.hpp"

namespace ccorr::simd {

namespace {

void correlate(const double* in, std::size_t n_out, const double* taps, std::size_t n_taps, double* out) {
    for (std::size_t i = 0; i < n_out; ++i) {
        double acc = 0.0;
        for (std::size_t k = 0; k < n_taps; ++k) {
            acc += taps[k] * in[i + k];
        }
        out[i] = acc;
    }
}

void apply_mask(double* v, const double* mask, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        v[i] *= mask[i];
    }
}

double accumulate(double* acc, const double* term, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc[i] += term[i];
        m = std::max(m, std::fabs(term[i]));
    }
    return m;
}

double max_update(double* u, const double* g, const double* c, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double next = std::max(g[i], c[i]);
        m = std::max(m, std::fabs(next - u[i]));
        u[i] = next;
    }
    return m;
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        m = std::max(m, std::fabs(a[i] - b[i]));
    }
    return m;
}

double max_abs(const double* a, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        m = std::max(m, std::fabs(a[i]));
    }
    return m;
}

}  // namespace

const KernelTable& scalar_kernels() noexcept {
    static const KernelTable table{"scalar", correlate, apply_mask, accumulate, max_update, max_abs_diff, max_abs};
    return table;
}

}  // namespace ccorr::simd
