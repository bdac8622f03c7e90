#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace hpdro::kernels {

/// Dense double-precision primitives used by the hot loops (simplex tableau
/// pivots, affine-map application, Monte-Carlo reductions). Each backend
/// provides the same table of function pointers; the active backend is chosen
/// at runtime from CPU features, overridable via HPDRO_SIMD=scalar|avx2|auto
/// or select_backend().
struct Backend {
    const char* name;
    // y[i] += a * x[i]
    void (*axpy)(double a, const double* x, double* y, std::size_t n);
    // x[i] *= a
    void (*scale)(double a, double* x, std::size_t n);
    double (*dot)(const double* x, const double* y, std::size_t n);
    double (*sum)(const double* x, std::size_t n);
    double (*max)(const double* x, std::size_t n);  // n >= 1
    double (*min)(const double* x, std::size_t n);  // n >= 1
};

extern const Backend scalar_backend;
#if defined(__x86_64__) || defined(_M_X64)
extern const Backend avx2_backend;
#endif

/// Currently active backend (dispatch resolved on first call).
const Backend& active();

/// Force a backend by name ("scalar", "avx2", "auto"). Throws on unknown
/// names or if the requested backend is unsupported on this CPU.
void select_backend(std::string_view name);

/// True if this CPU supports AVX2+FMA.
bool cpu_has_avx2();

// Convenience forwarders through the active backend.
inline void axpy(double a, const double* x, double* y, std::size_t n) { active().axpy(a, x, y, n); }
inline void scale(double a, double* x, std::size_t n) { active().scale(a, x, n); }
inline double dot(const double* x, const double* y, std::size_t n) { return active().dot(x, y, n); }
inline double sum(const double* x, std::size_t n) { return active().sum(x, n); }
inline double max(const double* x, std::size_t n) { return active().max(x, n); }
inline double min(const double* x, std::size_t n) { return active().min(x, n); }

} // namespace hpdro::kernels
