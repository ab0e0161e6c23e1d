#if defined(QMLE_HAVE_AVX2)

#include <immintrin.h>

#include <cmath>

#include "qmle/kernels.hpp"

namespace qmle::kernels {

namespace {

// Four records per iteration; the (k, m) accumulation order matches the
// scalar kernel, so the two differ only by FMA rounding.
void rows_normsq_batch(const PackedRows& w, const double* cre, const double* cim,
                       std::size_t n, std::size_t stride, double* y) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d total = _mm256_setzero_pd();
        std::size_t off = 0;
        for (std::size_t k = 0; k < w.start.size(); ++k) {
            __m256d ar = _mm256_setzero_pd();
            __m256d ai = _mm256_setzero_pd();
            const int s = w.start[k];
            const int len = w.len[k];
            for (int m = 0; m < len; ++m) {
                const __m256d wr = _mm256_set1_pd(w.wr[off + static_cast<std::size_t>(m)]);
                const __m256d wi = _mm256_set1_pd(w.wi[off + static_cast<std::size_t>(m)]);
                const std::size_t base = static_cast<std::size_t>(s + m) * stride + i;
                const __m256d vr = _mm256_loadu_pd(cre + base);
                const __m256d vi = _mm256_loadu_pd(cim + base);
                ar = _mm256_fmadd_pd(wr, vr, ar);
                ar = _mm256_fnmadd_pd(wi, vi, ar);
                ai = _mm256_fmadd_pd(wr, vi, ai);
                ai = _mm256_fmadd_pd(wi, vr, ai);
            }
            off += static_cast<std::size_t>(len);
            total = _mm256_fmadd_pd(ar, ar, total);
            total = _mm256_fmadd_pd(ai, ai, total);
        }
        _mm256_storeu_pd(y + i, total);
    }
    for (; i < n; ++i) {
        double total = 0.0;
        std::size_t off = 0;
        for (std::size_t k = 0; k < w.start.size(); ++k) {
            double ar = 0.0, ai = 0.0;
            const int s = w.start[k];
            const int len = w.len[k];
            for (int m = 0; m < len; ++m) {
                const double wr = w.wr[off + static_cast<std::size_t>(m)];
                const double wi = w.wi[off + static_cast<std::size_t>(m)];
                const double vr = cre[static_cast<std::size_t>(s + m) * stride + i];
                const double vi = cim[static_cast<std::size_t>(s + m) * stride + i];
                ar += wr * vr - wi * vi;
                ai += wr * vi + wi * vr;
            }
            off += static_cast<std::size_t>(len);
            total += ar * ar + ai * ai;
        }
        y[i] = total;
    }
}

void gaussian_terms_batch(double delta, double kappa, double a, double b, double eta,
                          const double* x, const double* cosphi, const double* sinphi,
                          std::size_t n, double* v, double* d2) {
    const double q = 1.0 / (4.0 * delta * delta * kappa);
    const double k2 = kappa * kappa;
    const double se = std::sqrt(eta);
    const double vnoise = 0.25 * (1.0 - eta);

    const __m256d veq = _mm256_set1_pd(eta * q);
    const __m256d vk2 = _mm256_set1_pd(k2);
    const __m256d vse = _mm256_set1_pd(se);
    const __m256d va = _mm256_set1_pd(a);
    const __m256d vb = _mm256_set1_pd(b);
    const __m256d vn = _mm256_set1_pd(vnoise);

    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d c = _mm256_loadu_pd(cosphi + i);
        const __m256d s = _mm256_loadu_pd(sinphi + i);
        const __m256d denom =
            _mm256_fmadd_pd(_mm256_mul_pd(vk2, c), c, _mm256_mul_pd(s, s));
        _mm256_storeu_pd(v + i, _mm256_fmadd_pd(veq, denom, vn));
        const __m256d mean =
            _mm256_mul_pd(vse, _mm256_fmadd_pd(va, c, _mm256_mul_pd(vb, s)));
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), mean);
        _mm256_storeu_pd(d2 + i, _mm256_mul_pd(d, d));
    }
    for (; i < n; ++i) {
        const double c = cosphi[i];
        const double s = sinphi[i];
        v[i] = eta * q * (k2 * c * c + s * s) + vnoise;
        const double d = x[i] - se * (a * c + b * s);
        d2[i] = d * d;
    }
}

}  // namespace

const Impl& avx2_impl() {
    static const Impl impl{"avx2", &rows_normsq_batch, &gaussian_terms_batch};
    return impl;
}

}  // namespace qmle::kernels

#endif  // QMLE_HAVE_AVX2
