#pragma once
// Scalar bodies shared by the reference table and the edge/tail handling of
// the vector variants, so both paths perform identical arithmetic.

#include <cstddef>

namespace rfm::kernels::detail {

inline double site_rate(double u_in, double x_prev, double x, double u_out, double x_next) {
    const double in = u_in * x_prev * (1.0 - x);
    const double out = u_out * x * (1.0 - x_next);
    return in - out;
}

inline void site_field_range(const double* x, const double* u, double* dx, std::size_t n,
                             std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
        const double prev = j == 0 ? 1.0 : x[j - 1];
        const double next = j + 1 == n ? 0.0 : x[j + 1];
        dx[j] = site_rate(u[j], prev, x[j], u[j + 1], next);
    }
}

inline double rk4_increment(double h6, double k1, double k2, double k3, double k4) {
    double s = k1 + 2.0 * k2;
    s = s + 2.0 * k3;
    s = s + k4;
    return h6 * s;
}

} // namespace rfm::kernels::detail
