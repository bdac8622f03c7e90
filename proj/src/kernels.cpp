#include "hpdro/kernels.hpp"

#include <atomic>
#include <cstdlib>

#include "hpdro/errors.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <cpuid.h>
#endif

namespace hpdro::kernels {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
    unsigned eax, ebx, ecx, edx;
    if (!__get_cpuid_count(7, 0, &eax, &ebx, &ecx, &edx)) return false;
    const bool avx2 = (ebx & bit_AVX2) != 0;
    if (!__get_cpuid(1, &eax, &ebx, &ecx, &edx)) return false;
    const bool fma = (ecx & bit_FMA) != 0;
    const bool osxsave = (ecx & bit_OSXSAVE) != 0;
    if (!avx2 || !fma || !osxsave) return false;
    // OS must have enabled saving of YMM state (XCR0 bits 1 and 2).
    unsigned lo, hi;
    __asm__ volatile("xgetbv" : "=a"(lo), "=d"(hi) : "c"(0u));
    return (lo & 0x6u) == 0x6u;
#else
    return false;
#endif
}

namespace {

const Backend* pick_auto() {
#if defined(__x86_64__) || defined(_M_X64)
    if (cpu_has_avx2()) return &avx2_backend;
#endif
    return &scalar_backend;
}

const Backend* initial_backend() {
    if (const char* env = std::getenv("HPDRO_SIMD")) {
        std::string_view v(env);
        if (v == "scalar") return &scalar_backend;
#if defined(__x86_64__) || defined(_M_X64)
        if (v == "avx2" && cpu_has_avx2()) return &avx2_backend;
#endif
        // Unknown or unsupported value: fall through to auto.
    }
    return pick_auto();
}

std::atomic<const Backend*> g_active{nullptr};

} // namespace

const Backend& active() {
    const Backend* b = g_active.load(std::memory_order_acquire);
    if (!b) {
        b = initial_backend();
        g_active.store(b, std::memory_order_release);
    }
    return *b;
}

void select_backend(std::string_view name) {
    if (name == "auto") {
        g_active.store(pick_auto(), std::memory_order_release);
        return;
    }
    if (name == "scalar") {
        g_active.store(&scalar_backend, std::memory_order_release);
        return;
    }
#if defined(__x86_64__) || defined(_M_X64)
    if (name == "avx2") {
        require(cpu_has_avx2(), ErrorCode::invalid_argument,
                "kernels: avx2 backend requested but CPU lacks AVX2+FMA");
        g_active.store(&avx2_backend, std::memory_order_release);
        return;
    }
#endif
    throw Error(ErrorCode::invalid_argument,
                "kernels: unknown backend '" + std::string(name) + "'");
}

} // namespace hpdro::kernels
