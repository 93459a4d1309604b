#include <cstdlib>
#include <cstring>

#include "ccorr/simd/kernels.hpp"

namespace ccorr::simd {

const KernelTable* avx2_table_unchecked() noexcept;

const KernelTable* avx2_kernels() noexcept {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
    static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return supported ? avx2_table_unchecked() : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& active_kernels() noexcept {
    static const KernelTable& chosen = [] () -> const KernelTable& {
        const char* env = std::getenv("CCORR_SIMD");
        if (env != nullptr && std::strcmp(env, "scalar") == 0) {
            return scalar_kernels();
        }
        const KernelTable* v = avx2_kernels();
        return v != nullptr ? *v : scalar_kernels();
    }();
    return chosen;
}

}  // namespace ccorr::simd
