// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include "ccorr/simd/kernels.hpp"

#if defined(__x86_64__) && defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace ccorr::simd {

namespace {

inline double hmax(__m256d v) {
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, v);
    return std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
}

inline __m256d vabs(__m256d v) {
    return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

void correlate(const double* in, std::size_t n_out, const double* taps, std::size_t n_taps, double* out) {
    std::size_t i = 0;
    for (; i + 8 <= n_out; i += 8) {
        __m256d acc0 = _mm256_setzero_pd();
        __m256d acc1 = _mm256_setzero_pd();
        const double* base = in + i;
        for (std::size_t k = 0; k < n_taps; ++k) {
            const __m256d t = _mm256_broadcast_sd(taps + k);
            acc0 = _mm256_fmadd_pd(t, _mm256_loadu_pd(base + k), acc0);
            acc1 = _mm256_fmadd_pd(t, _mm256_loadu_pd(base + k + 4), acc1);
        }
        _mm256_storeu_pd(out + i, acc0);
        _mm256_storeu_pd(out + i + 4, acc1);
    }
    for (; i + 4 <= n_out; i += 4) {
        __m256d acc = _mm256_setzero_pd();
        for (std::size_t k = 0; k < n_taps; ++k) {
            acc = _mm256_fmadd_pd(_mm256_broadcast_sd(taps + k), _mm256_loadu_pd(in + i + k), acc);
        }
        _mm256_storeu_pd(out + i, acc);
    }
    for (; i < n_out; ++i) {
        double acc = 0.0;
        for (std::size_t k = 0; k < n_taps; ++k) {
            acc = std::fma(taps[k], in[i + k], acc);
        }
        out[i] = acc;
    }
}

void apply_mask(double* v, const double* mask, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(v + i, _mm256_mul_pd(_mm256_loadu_pd(v + i), _mm256_loadu_pd(mask + i)));
    }
    for (; i < n; ++i) {
        v[i] *= mask[i];
    }
}

double accumulate(double* acc, const double* term, std::size_t n) {
    __m256d m = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d t = _mm256_loadu_pd(term + i);
        _mm256_storeu_pd(acc + i, _mm256_add_pd(_mm256_loadu_pd(acc + i), t));
        m = _mm256_max_pd(m, vabs(t));
    }
    double r = hmax(m);
    for (; i < n; ++i) {
        acc[i] += term[i];
        r = std::max(r, std::fabs(term[i]));
    }
    return r;
}

double max_update(double* u, const double* g, const double* c, std::size_t n) {
    __m256d m = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d next = _mm256_max_pd(_mm256_loadu_pd(g + i), _mm256_loadu_pd(c + i));
        m = _mm256_max_pd(m, vabs(_mm256_sub_pd(next, _mm256_loadu_pd(u + i))));
        _mm256_storeu_pd(u + i, next);
    }
    double r = hmax(m);
    for (; i < n; ++i) {
        const double next = std::max(g[i], c[i]);
        r = std::max(r, std::fabs(next - u[i]));
        u[i] = next;
    }
    return r;
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
    __m256d m = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        m = _mm256_max_pd(m, vabs(_mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i))));
    }
    double r = hmax(m);
    for (; i < n; ++i) {
        r = std::max(r, std::fabs(a[i] - b[i]));
    }
    return r;
}

double max_abs(const double* a, std::size_t n) {
    __m256d m = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        m = _mm256_max_pd(m, vabs(_mm256_loadu_pd(a + i)));
    }
    double r = hmax(m);
    for (; i < n; ++i) {
        r = std::max(r, std::fabs(a[i]));
    }
    return r;
}

}  // namespace

const KernelTable* avx2_table_unchecked() noexcept {
    static const KernelTable table{"avx2", correlate, apply_mask, accumulate, max_update, max_abs_diff, max_abs};
    return &table;
}

}  // namespace ccorr::simd

#else

namespace ccorr::simd {
const KernelTable* avx2_table_unchecked() noexcept { return nullptr; }
}  // namespace ccorr::simd

#endif
