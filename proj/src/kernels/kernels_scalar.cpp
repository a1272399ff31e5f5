#include "rfm/kernels/kernels.hpp"

#include "scalar_impl.hpp"

namespace rfm::kernels {
namespace {

void site_field(const double* x, const double* u, double* dx, std::size_t n) {
    detail::site_field_range(x, u, dx, n, 0, n);
}

void axpy(double a, const double* x, const double* y, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = y[i] + a * x[i];
}

void rk4_update(double h, const double* k1, const double* k2, const double* k3, const double* k4,
                double* x, std::size_t n) {
    const double h6 = h / 6.0;
    for (std::size_t i = 0; i < n; ++i) x[i] = x[i] + detail::rk4_increment(h6, k1[i], k2[i], k3[i], k4[i]);
}

double mean_product(const double* a, const double* b, std::size_t m) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += a[i] * b[i];
    return m == 0 ? 0.0 : s / static_cast<double>(m);
}

double mean_triple(const double* a, const double* b, const double* c, std::size_t m) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += a[i] * b[i] * c[i];
    return m == 0 ? 0.0 : s / static_cast<double>(m);
}

} // namespace

const KernelTable& scalar_kernels() {
    static const KernelTable table{"scalar", site_field, axpy, rk4_update, mean_product, mean_triple};
    return table;
}

} // namespace rfm::kernels
