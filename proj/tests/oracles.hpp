#pragma once

// Test-only oracles, independent of the library's computation paths.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "qmle/povm.hpp"
#include "qmle/rng.hpp"
#include "qmle/states.hpp"

namespace oracle {

using qmle::CMat;
using qmle::cxd;

inline double simpson(const std::function<double(double)>& f, double lo, double hi,
                      int points) {
    if (points % 2 == 0) ++points;
    const double h = (hi - lo) / (points - 1);
    double total = f(lo) + f(hi);
    for (int i = 1; i < points - 1; ++i) total += (i % 2 == 1 ? 4.0 : 2.0) * f(lo + i * h);
    return total * h / 3.0;
}

/// Lossy homodyne POVM matrix element by brute-force quadrature:
///   H_ab = e^{i(a-b)phi} \int dx' N(x - sqrt(eta) x'; (1-eta)/4) phi_a(x') phi_b(x').
inline CMat homodyne_povm_matrix(int dim, double x, double phase, double eta) {
    CMat h(dim, dim);
    std::vector<double> wf(static_cast<std::size_t>(dim));
    const double var = 0.25 * (1.0 - eta);
    const double half = std::sqrt(2.0 * dim + 1.0) / 2.0 + 6.0;
    const int points = 6001;
    const double step = 2.0 * half / (points - 1);

    CMat accum = CMat::Zero(dim, dim);
    if (eta == 1.0) {
        qmle::fock_position_amplitudes(dim, x, wf.data());
        for (int a = 0; a < dim; ++a)
            for (int b = 0; b < dim; ++b)
                accum(a, b) = wf[static_cast<std::size_t>(a)] * wf[static_cast<std::size_t>(b)];
    } else {
        const double norm = 1.0 / std::sqrt(2.0 * M_PI * var);
        for (int i = 0; i < points; ++i) {
            const double xp = -half + i * step;
            const double d = x - std::sqrt(eta) * xp;
            const double kern = norm * std::exp(-0.5 * d * d / var);
            const double w = (i == 0 || i == points - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
            qmle::fock_position_amplitudes(dim, xp, wf.data());
            for (int a = 0; a < dim; ++a)
                for (int b = 0; b < dim; ++b)
                    accum(a, b) += w * kern * wf[static_cast<std::size_t>(a)] *
                                   wf[static_cast<std::size_t>(b)];
        }
        accum *= step / 3.0;
    }
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b)
            h(a, b) = accum(a, b) * std::polar(1.0, (a - b) * phase);
    return h;
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

/// Kolmogorov-Smirnov statistic of values against U[0,1].
inline double ks_uniform(std::vector<double> u) {
    std::sort(u.begin(), u.end());
    const double n = static_cast<double>(u.size());
    double d = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        d = std::max({d, std::abs(u[i] - lo), std::abs(u[i] - hi)});
    }
    return d;
}

inline double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline double variance_of(const std::vector<double>& v) {
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

/// Random lower-triangular factor with entries ~ base identity + noise.
inline qmle::TFactor random_t_factor(int dim, qmle::RandomStream& rs, double spread = 0.4) {
    CMat m = CMat::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < i; ++j)
            m(i, j) = cxd(rs.uniform(-spread, spread), rs.uniform(-spread, spread));
        m(i, i) = 1.0 / std::sqrt(static_cast<double>(dim)) + rs.uniform(0.0, spread);
    }
    return qmle::TFactor(std::move(m));
}

/// Haar-ish random unitary via modified Gram-Schmidt of a Gaussian matrix.
inline CMat random_unitary(int dim, qmle::RandomStream& rs) {
    CMat a(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) a(i, j) = cxd(rs.normal(), rs.normal());
    for (int c = 0; c < dim; ++c) {
        for (int p = 0; p < c; ++p) a.col(c) -= a.col(p).dot(a.col(c)) * a.col(p);
        a.col(c) /= a.col(c).norm();
    }
    return a;
}

}  // namespace oracle
