#include <cmath>

#include "qmle/kernels.hpp"

namespace qmle::kernels {

namespace {

void rows_normsq_batch(const PackedRows& w, const double* cre, const double* cim,
                       std::size_t n, std::size_t stride, double* y) {
    for (std::size_t i = 0; i < n; ++i) {
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
    for (std::size_t i = 0; i < n; ++i) {
        const double c = cosphi[i];
        const double s = sinphi[i];
        v[i] = eta * q * (k2 * c * c + s * s) + vnoise;
        const double d = x[i] - se * (a * c + b * s);
        d2[i] = d * d;
    }
}

}  // namespace

const Impl& scalar_impl() {
    static const Impl impl{"scalar", &rows_normsq_batch, &gaussian_terms_batch};
    return impl;
}

}  // namespace qmle::kernels
