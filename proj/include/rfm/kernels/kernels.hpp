#pragma once
// Data-parallel inner loops used by the integrator and the moment
// quadrature. Every kernel has a scalar reference implementation; an AVX2
// variant is selected at runtime when the CPU supports it.
//
// The field and RK4 kernels use only separate multiplies and adds in a fixed
// order, so the AVX2 variants are bit-identical to the scalar ones. The
// reductions reorder the summation and agree to rounding.

#include <cstddef>
#include <string_view>

namespace rfm::kernels {

struct KernelTable {
    const char* name;

    // dx[j] = u[j] x[j-1] (1 - x[j]) - u[j+1] x[j] (1 - x[j+1]), x[-1] = 1, x[n] = 0.
    // u has n + 1 entries.
    void (*site_field)(const double* x, const double* u, double* dx, std::size_t n);

    // out = y + a * x
    void (*axpy)(double a, const double* x, const double* y, double* out, std::size_t n);

    // x += h/6 (k1 + 2 k2 + 2 k3 + k4)
    void (*rk4_update)(double h, const double* k1, const double* k2, const double* k3,
                       const double* k4, double* x, std::size_t n);

    // (1/m) sum a[i] b[i]
    double (*mean_product)(const double* a, const double* b, std::size_t m);

    // (1/m) sum a[i] b[i] c[i]
    double (*mean_triple)(const double* a, const double* b, const double* c, std::size_t m);
};

const KernelTable& scalar_kernels();

/// nullptr when the AVX2 variant was not compiled in or the CPU lacks AVX2.
const KernelTable* avx2_kernels();

/// Kernels used by the library. Chosen once: AVX2 when available, unless the
/// environment variable RFM_KERNELS=scalar is set.
const KernelTable& active();

/// Overrides the selection ("scalar" or "avx2"). Returns false if the
/// requested variant is unavailable.
bool select(std::string_view name);

} // namespace rfm::kernels
