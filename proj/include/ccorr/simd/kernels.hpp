#pragma once

#include <cstddef>

namespace ccorr::simd {

/// Inner loops of the grid operator.  Every table entry has a scalar
/// reference implementation; vector variants must agree with it to
/// rounding (FMA contraction is the only permitted difference).
struct KernelTable {
    const char* name;
    /// out[i] = sum_k taps[k] * in[i + k] for i < n_out; `in` holds
    /// n_out + n_taps - 1 values.
    void (*correlate)(const double* in, std::size_t n_out, const double* taps, std::size_t n_taps,
                      double* out);
    /// v[i] *= mask[i]
    void (*apply_mask)(double* v, const double* mask, std::size_t n);
    /// acc[i] += term[i]; returns max |term[i]|.
    double (*accumulate)(double* acc, const double* term, std::size_t n);
    /// u[i] = max(g[i], c[i]); returns max |u_new[i] - u_old[i]|.
    double (*max_update)(double* u, const double* g, const double* c, std::size_t n);
    double (*max_abs_diff)(const double* a, const double* b, std::size_t n);
    double (*max_abs)(const double* a, std::size_t n);
};

[[nodiscard]] const KernelTable& scalar_kernels() noexcept;

/// AVX2+FMA table, or nullptr when not built or not supported by this CPU.
[[nodiscard]] const KernelTable* avx2_kernels() noexcept;

/// Best table for this CPU.  Setting CCORR_SIMD=scalar in the environment
/// forces the scalar reference.
[[nodiscard]] const KernelTable& active_kernels() noexcept;

}  // namespace ccorr::simd
