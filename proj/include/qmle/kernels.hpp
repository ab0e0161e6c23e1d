#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace qmle::kernels {

/// Packed triangular complex coefficient rows. Row k holds `len[k]`
/// coefficients starting at column `start[k]`; `wr`/`wi` are the
/// concatenated real/imaginary parts.
struct PackedRows {
    int dim = 0;
    std::vector<int> start;
    std::vector<int> len;
    std::vector<double> wr, wi;

    void clear(int d) {
        dim = d;
        start.clear();
        len.clear();
        wr.clear();
        wi.clear();
    }
};

/// One kernel implementation. `cre`/`cim` are complex planes with layout
/// c[m][i] = cre[m * stride + i] + i*cim[m * stride + i].
struct Impl {
    const char* name;

    // y[i] = sum_k | sum_m W[k][m] * c[m][i] |^2   (record-batched quadratic form)
    void (*rows_normsq_batch)(const PackedRows& w, const double* cre, const double* cim,
                              std::size_t n, std::size_t stride, double* y);

    // Per-record variance v[i] and squared deviation d2[i] of the lossy
    // Gaussian homodyne law at parameters (delta, kappa, a, b; efficiency eta).
    void (*gaussian_terms_batch)(double delta, double kappa, double a, double b,
                                 double eta, const double* x, const double* cosphi,
                                 const double* sinphi, std::size_t n, double* v,
                                 double* d2);
};

const Impl& scalar_impl();

#if defined(QMLE_HAVE_AVX2)
const Impl& avx2_impl();
#endif
bool avx2_supported();

/// Runtime-selected implementation. Initial choice comes from the
/// QMLE_KERNEL environment variable ("auto", "scalar", "avx2"); default auto
/// picks AVX2 when the CPU supports it.
const Impl& active();
void set_active(const std::string& name);
std::string active_name();

}  // namespace qmle::kernels
