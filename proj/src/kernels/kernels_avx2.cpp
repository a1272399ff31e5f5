#include "rfm/kernels/kernels.hpp"

#include <immintrin.h>

#include "scalar_impl.hpp"

namespace rfm::kernels {
namespace avx2 {
namespace {

// Interior sites 1..n-2 in blocks of four; the two edge sites and the tail go
// through the scalar body.
void site_field(const double* x, const double* u, double* dx, std::size_t n) {
    if (n < 6) {
        detail::site_field_range(x, u, dx, n, 0, n);
        return;
    }
    detail::site_field_range(x, u, dx, n, 0, 1);
    const __m256d one = _mm256_set1_pd(1.0);
    std::size_t j = 1;
    for (; j + 4 <= n - 1; j += 4) {
        const __m256d prev = _mm256_loadu_pd(x + j - 1);
        const __m256d cur = _mm256_loadu_pd(x + j);
        const __m256d next = _mm256_loadu_pd(x + j + 1);
        const __m256d u_in = _mm256_loadu_pd(u + j);
        const __m256d u_out = _mm256_loadu_pd(u + j + 1);
        const __m256d in = _mm256_mul_pd(_mm256_mul_pd(u_in, prev), _mm256_sub_pd(one, cur));
        const __m256d out = _mm256_mul_pd(_mm256_mul_pd(u_out, cur), _mm256_sub_pd(one, next));
        _mm256_storeu_pd(dx + j, _mm256_sub_pd(in, out));
    }
    detail::site_field_range(x, u, dx, n, j, n);
}

void axpy(double a, const double* x, const double* y, double* out, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d p = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
        _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(y + i), p));
    }
    for (; i < n; ++i) out[i] = y[i] + a * x[i];
}

void rk4_update(double h, const double* k1, const double* k2, const double* k3, const double* k4,
                double* x, std::size_t n) {
    const double h6 = h / 6.0;
    const __m256d vh6 = _mm256_set1_pd(h6);
    const __m256d two = _mm256_set1_pd(2.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d s = _mm256_add_pd(_mm256_loadu_pd(k1 + i), _mm256_mul_pd(two, _mm256_loadu_pd(k2 + i)));
        s = _mm256_add_pd(s, _mm256_mul_pd(two, _mm256_loadu_pd(k3 + i)));
        s = _mm256_add_pd(s, _mm256_loadu_pd(k4 + i));
        _mm256_storeu_pd(x + i, _mm256_add_pd(_mm256_loadu_pd(x + i), _mm256_mul_pd(vh6, s)));
    }
    for (; i < n; ++i) x[i] = x[i] + detail::rk4_increment(h6, k1[i], k2[i], k3[i], k4[i]);
}

double horizontal_sum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double mean_product(const double* a, const double* b, std::size_t m) {
    if (m == 0) return 0.0;
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= m; i += 8) {
        acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
        acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4)));
    }
    double s = horizontal_sum(_mm256_add_pd(acc0, acc1));
    for (; i < m; ++i) s += a[i] * b[i];
    return s / static_cast<double>(m);
}

double mean_triple(const double* a, const double* b, const double* c, std::size_t m) {
    if (m == 0) return 0.0;
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= m; i += 8) {
        const __m256d p0 = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        const __m256d p1 = _mm256_mul_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
        acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(p0, _mm256_loadu_pd(c + i)));
        acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(p1, _mm256_loadu_pd(c + i + 4)));
    }
    double s = horizontal_sum(_mm256_add_pd(acc0, acc1));
    for (; i < m; ++i) s += a[i] * b[i] * c[i];
    return s / static_cast<double>(m);
}

} // namespace

const KernelTable& table() {
    static const KernelTable t{"avx2", site_field, axpy, rk4_update, mean_product, mean_triple};
    return t;
}

} // namespace avx2
} // namespace rfm::kernels
