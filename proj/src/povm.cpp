#include "qmle/povm.hpp"

#include <cmath>

namespace qmle {

namespace {

constexpr double kTwoPi = 2.0 * kPi;

void check_eta_open(double eta) {
    if (!(eta > 0.0) || eta > 1.0)
        throw std::invalid_argument("eta must lie in (0, 1]");
}

}  // namespace

HomodyneRecord HomodyneRecord::wrapped(double phase, double x) {
    if (!std::isfinite(phase) || !std::isfinite(x))
        throw std::invalid_argument("HomodyneRecord: non-finite field");
    double p = std::remainder(phase, kTwoPi);
    if (p < 0.0) p += kTwoPi;
    if (p >= kTwoPi) p = 0.0;
    return HomodyneRecord{p, x};
}

void SpinOutcome::validate() const {
    auto norm2 = [](const std::array<double, 3>& v) {
        return v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
    };
    if (std::abs(norm2(omega_a) - 1.0) > 2e-12 || std::abs(norm2(omega_b) - 1.0) > 2e-12)
        throw std::invalid_argument("SpinOutcome: directions must be unit vectors");
}

void ClickSummary::validate() const {
    if (n_total < 1 || n_clicks < 0 || n_clicks > n_total)
        throw std::invalid_argument("ClickSummary: need 0 <= n_clicks <= n_total, n_total >= 1");
}

// --- oscillator wavefunctions -------------------------------------------------

void fock_position_amplitudes(int dim, double x, double* out) {
    // phi_0(x) = (2/pi)^{1/4} e^{-x^2};
    // phi_{n+1} = (2x/sqrt(n+1)) phi_n - sqrt(n/(n+1)) phi_{n-1}
    const double phi0 = 0.89324384173800233140 * std::exp(-x * x);  // (2/pi)^{1/4}
    if (dim >= 1) out[0] = phi0;
    if (dim >= 2) out[1] = 2.0 * x * phi0;
    for (int n = 1; n + 1 < dim; ++n)
        out[n + 1] = (2.0 * x * out[n] - std::sqrt(static_cast<double>(n)) * out[n - 1]) /
                     std::sqrt(static_cast<double>(n + 1));
}

double fock_position_amplitude(int n, double x) {
    if (n < 0) throw std::invalid_argument("fock_position_amplitude: n must be >= 0");
    std::vector<double> buf(static_cast<std::size_t>(n) + 1);
    fock_position_amplitudes(n + 1, x, buf.data());
    return buf[static_cast<std::size_t>(n)];
}

// --- loss coefficients ----------------------------------------------------------

double binomial_loss_coefficient(int n, int j, double eta) {
    if (n < 0 || j < 0) throw std::invalid_argument("binomial_loss_coefficient: n, j >= 0");
    check_eta_open(eta);
    if (j == 0) return std::pow(eta, 0.5 * n);
    if (eta == 1.0) return 0.0;
    const double log_binom = std::lgamma(n + j + 1.0) - std::lgamma(n + 1.0) - std::lgamma(j + 1.0);
    return std::exp(0.5 * (log_binom + n * std::log(eta) + j * std::log1p(-eta)));
}

BinomialLossTable::BinomialLossTable(int dim, double eta) : dim_(dim), eta_(eta) {
    check_eta_open(eta);
    b_.assign(static_cast<std::size_t>(dim) * dim, 0.0);
    for (int m = 0; m < dim; ++m)
        for (int n = 0; n <= m; ++n)
            b_[static_cast<std::size_t>(m) * dim + n] = binomial_loss_coefficient(n, m - n, eta);
}

// --- homodyne -------------------------------------------------------------------

double homodyne_expectation(const TFactor& t, const HomodyneRecord& rec, double eta) {
    check_eta_open(eta);
    const int m = t.dim();
    std::vector<double> phi(static_cast<std::size_t>(m));
    fock_position_amplitudes(m, rec.x, phi.data());
    const cxd rot = std::polar(1.0, rec.phase);
    std::vector<cxd> c(static_cast<std::size_t>(m));
    cxd f(1.0, 0.0);
    for (int n = 0; n < m; ++n) {
        c[static_cast<std::size_t>(n)] = phi[static_cast<std::size_t>(n)] * f;
        f *= rot;
    }
    const BinomialLossTable b(m, eta);

    double total = 0.0;
    for (int k = 0; k < m; ++k) {
        for (int j = 0; j <= k; ++j) {
            cxd inner(0.0, 0.0);
            for (int n = 0; n <= k - j; ++n)
                inner += t(k, n + j) * b(n + j, n) * c[static_cast<std::size_t>(n)];
            total += std::norm(inner);
        }
    }
    return total;
}

double homodyne_expectation_density(const DensityMatrix& rho, const HomodyneRecord& rec,
                                    double eta) {
    check_eta_open(eta);
    const int m = rho.dim();
    std::vector<double> phi(static_cast<std::size_t>(m));
    fock_position_amplitudes(m, rec.x, phi.data());
    const cxd rot = std::polar(1.0, rec.phase);
    std::vector<cxd> c(static_cast<std::size_t>(m));
    cxd f(1.0, 0.0);
    for (int n = 0; n < m; ++n) {
        c[static_cast<std::size_t>(n)] = phi[static_cast<std::size_t>(n)] * f;
        f *= rot;
    }
    const BinomialLossTable b(m, eta);

    // sum_j <w_j|rho|w_j>, (w_j)_m = B_{m,m-j} c_{m-j}
    double total = 0.0;
    for (int j = 0; j < m; ++j) {
        cxd acc(0.0, 0.0);
        for (int row = j; row < m; ++row) {
            const cxd wj_row = b(row, row - j) * c[static_cast<std::size_t>(row - j)];
            cxd rho_w(0.0, 0.0);
            for (int col = j; col < m; ++col)
                rho_w += rho(row, col) * b(col, col - j) * c[static_cast<std::size_t>(col - j)];
            acc += std::conj(wj_row) * rho_w;
        }
        total += acc.real();
    }
    return total;
}

HomodyneDesign HomodyneDesign::make(const std::vector<HomodyneRecord>& records, int dim) {
    HomodyneDesign d;
    d.dim = dim;
    d.n = records.size();
    d.cre.assign(static_cast<std::size_t>(dim) * d.n, 0.0);
    d.cim.assign(static_cast<std::size_t>(dim) * d.n, 0.0);
    std::vector<double> phi(static_cast<std::size_t>(dim));
    for (std::size_t i = 0; i < d.n; ++i) {
        fock_position_amplitudes(dim, records[i].x, phi.data());
        const double cr = std::cos(records[i].phase);
        const double ci = std::sin(records[i].phase);
        double fr = 1.0, fi = 0.0;
        for (int m = 0; m < dim; ++m) {
            d.cre[static_cast<std::size_t>(m) * d.n + i] = phi[static_cast<std::size_t>(m)] * fr;
            d.cim[static_cast<std::size_t>(m) * d.n + i] = phi[static_cast<std::size_t>(m)] * fi;
            const double nfr = fr * cr - fi * ci;
            fi = fr * ci + fi * cr;
            fr = nfr;
        }
    }
    return d;
}

namespace {

// Guarded lower Cholesky identical in policy to the one in states.cpp, kept
// local: operates on the loss congruence G which is PSD by construction.
CMat cholesky_psd(const CMat& g) {
    const int n = static_cast<int>(g.rows());
    const double tol = 1e-14 * std::max(g.trace().real(), 1e-300);
    CMat l = CMat::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        double d = g(j, j).real();
        for (int k = 0; k < j; ++k) d -= std::norm(l(j, k));
        if (d <= tol) continue;
        const double piv = std::sqrt(d);
        l(j, j) = piv;
        for (int i = j + 1; i < n; ++i) {
            cxd s = g(i, j);
            for (int k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
            l(i, j) = s / piv;
        }
    }
    return l;
}

}  // namespace

kernels::PackedRows homodyne_factor_rows(const TFactor& t, const BinomialLossTable& b) {
    const int m = t.dim();
    if (b.dim() != m) throw DimensionMismatch("homodyne_factor_rows: table dim mismatch");
    const CMat gram = t.matrix().adjoint() * t.matrix();

    CMat g = CMat::Zero(m, m);
    for (int n = 0; n < m; ++n) {
        for (int n2 = 0; n2 <= n; ++n2) {
            cxd s(0.0, 0.0);
            for (int j = 0; j + n < m; ++j)
                s += b(n + j, n) * b(n2 + j, n2) * gram(n + j, n2 + j);
            g(n, n2) = s;
            g(n2, n) = std::conj(s);
        }
    }
    const CMat l = cholesky_psd(g);

    // y = ||L^dag c||^2: row k of L^dag has support on columns k..m-1.
    kernels::PackedRows rows;
    rows.clear(m);
    for (int k = 0; k < m; ++k) {
        rows.start.push_back(k);
        rows.len.push_back(m - k);
        for (int col = k; col < m; ++col) {
            const cxd w = std::conj(l(col, k));
            rows.wr.push_back(w.real());
            rows.wi.push_back(w.imag());
        }
    }
    return rows;
}

void gaussian_homodyne_moments(const GaussianParams& p, double phase, double eta,
                               double& mean, double& var) {
    p.validate();
    check_eta_open(eta);
    const double c = std::cos(phase), s = std::sin(phase);
    const double ideal_var =
        (p.kappa * p.kappa * c * c + s * s) / (4.0 * p.delta * p.delta * p.kappa);
    mean = std::sqrt(eta) * (p.a * c + p.b * s);
    var = eta * ideal_var + 0.25 * (1.0 - eta);
}

double gaussian_homodyne_density(const GaussianParams& p, double phase, double eta,
                                 double x) {
    double mean, var;
    gaussian_homodyne_moments(p, phase, eta, mean, var);
    const double d = x - mean;
    return std::exp(-0.5 * d * d / var) / std::sqrt(kTwoPi * var);
}

void squeezed_homodyne_moments(double x0, double r, double eta, double& mean, double& var) {
    check_eta_open(eta);
    mean = eta * x0;
    var = 0.25 * (std::exp(-2.0 * r) + 1.0 - eta);
}

double squeezed_homodyne_density(double x0, double r, double eta, double x) {
    double mean, var;
    squeezed_homodyne_moments(x0, r, eta, mean, var);
    const double d = x - mean;
    return std::exp(-0.5 * d * d / var) / std::sqrt(kTwoPi * var);
}

// --- spin -----------------------------------------------------------------------

std::array<cxd, 2> bloch_spinor(const std::array<double, 3>& omega) {
    const double z = omega[2];
    if (z < -1.0 + 1e-14) return {cxd(0.0, 0.0), cxd(1.0, 0.0)};
    const double up = std::sqrt(0.5 * (1.0 + z));
    return {cxd(up, 0.0), cxd(omega[0], omega[1]) / (2.0 * up)};
}

std::array<cxd, 4> joint_spin_amplitudes(const SpinOutcome& out) {
    const auto sa = bloch_spinor(out.omega_a);
    const auto sb = bloch_spinor(out.omega_b);
    return {sa[0] * sb[0], sa[0] * sb[1], sa[1] * sb[0], sa[1] * sb[1]};
}

double spin_projector_expectation(const TFactor& t, const SpinOutcome& out) {
    if (t.dim() != 4) throw DimensionMismatch("spin_projector_expectation: T must be 4x4");
    out.validate();
    const auto psi = joint_spin_amplitudes(out);
    double total = 0.0;
    for (int k = 0; k < 4; ++k) {
        cxd inner(0.0, 0.0);
        for (int m = 0; m <= k; ++m) inner += t(k, m) * psi[static_cast<std::size_t>(m)];
        total += std::norm(inner);
    }
    return total;
}

SpinDesign SpinDesign::make(const std::vector<SpinOutcome>& outcomes) {
    SpinDesign d;
    d.n = outcomes.size();
    d.cre.assign(4 * d.n, 0.0);
    d.cim.assign(4 * d.n, 0.0);
    for (std::size_t i = 0; i < d.n; ++i) {
        outcomes[i].validate();
        const auto psi = joint_spin_amplitudes(outcomes[i]);
        for (int m = 0; m < 4; ++m) {
            d.cre[static_cast<std::size_t>(m) * d.n + i] = psi[static_cast<std::size_t>(m)].real();
            d.cim[static_cast<std::size_t>(m) * d.n + i] = psi[static_cast<std::size_t>(m)].imag();
        }
    }
    return d;
}

kernels::PackedRows spin_factor_rows(const TFactor& t) {
    if (t.dim() != 4) throw DimensionMismatch("spin_factor_rows: T must be 4x4");
    kernels::PackedRows rows;
    rows.clear(4);
    for (int k = 0; k < 4; ++k) {
        rows.start.push_back(0);
        rows.len.push_back(k + 1);
        for (int m = 0; m <= k; ++m) {
            rows.wr.push_back(t(k, m).real());
            rows.wi.push_back(t(k, m).imag());
        }
    }
    return rows;
}

// --- ON/OFF ---------------------------------------------------------------------

double no_click_probability(const DensityMatrix& rho, double eta) {
    if (eta < 0.0 || eta > 1.0)
        throw std::invalid_argument("no_click_probability: eta must lie in [0, 1]");
    const double q = 1.0 - eta;
    double p0 = 0.0;
    double w = 1.0;
    for (int p = 0; p < rho.dim(); ++p) {
        p0 += w * rho(p, p).real();
        w *= q;
    }
    return std::clamp(p0, 0.0, 1.0);
}

}  // namespace qmle
