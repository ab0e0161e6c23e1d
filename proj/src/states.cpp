#include "qmle/states.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace qmle {

namespace {

constexpr double kLeakageThreshold = 1e-6;

// exp(K) for skew-Hermitian K via the spectral form of H = -iK.
CMat exp_skew_hermitian(const CMat& k) {
    const CMat h = cxd(0.0, -1.0) * k;
    Eigen::SelfAdjointEigenSolver<CMat> es(h);
    const Eigen::VectorXd lam = es.eigenvalues();
    CVec phase(lam.size());
    for (Eigen::Index i = 0; i < lam.size(); ++i)
        phase(i) = std::polar(1.0, lam(i));
    return es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
}

CMat annihilation_operator(int dim) {
    CMat a = CMat::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

}  // namespace

// --- StateVector ------------------------------------------------------------

StateVector::StateVector(CVec amplitudes) : amp_(std::move(amplitudes)) {
    if (amp_.size() < 1) throw std::invalid_argument("StateVector: empty amplitude vector");
    const double n2 = amp_.squaredNorm();
    if (n2 < 1e-300) throw std::invalid_argument("StateVector: zero norm");
    amp_ /= std::sqrt(n2);
}

double StateVector::mean_photon_number() const {
    double s = 0.0;
    for (int n = 0; n < dim(); ++n) s += n * std::norm(amp_(n));
    return s;
}

// --- DensityMatrix ----------------------------------------------------------

DensityMatrix::DensityMatrix(CMat elements) : mat_(std::move(elements)) {
    if (mat_.rows() != mat_.cols() || mat_.rows() < 1)
        throw std::invalid_argument("DensityMatrix: non-square matrix");
    mat_ = 0.5 * (mat_ + mat_.adjoint().eval());
    const double tr = mat_.trace().real();
    if (tr < 1e-300) throw std::invalid_argument("DensityMatrix: non-positive trace");
    mat_ /= tr;
}

DensityMatrix DensityMatrix::from_pure(const StateVector& psi) {
    return DensityMatrix(psi.amplitudes() * psi.amplitudes().adjoint());
}

std::vector<double> DensityMatrix::diagonal() const {
    std::vector<double> d(static_cast<std::size_t>(dim()));
    for (int i = 0; i < dim(); ++i) d[static_cast<std::size_t>(i)] = mat_(i, i).real();
    return d;
}

DensityMatrix DensityMatrix::padded(int d) const {
    if (d < dim()) throw DimensionMismatch("padded: target dimension smaller than current");
    CMat m = CMat::Zero(d, d);
    m.topLeftCorner(dim(), dim()) = mat_;
    return DensityMatrix(std::move(m));
}

double DensityMatrix::purity() const { return (mat_ * mat_).trace().real(); }

void DensityMatrix::validate() const {
    const double herm = (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff();
    if (herm > 1e-12) throw std::runtime_error("DensityMatrix: not Hermitian");
    if (std::abs(mat_.trace().real() - 1.0) > 1e-12)
        throw std::runtime_error("DensityMatrix: trace != 1");
    Eigen::SelfAdjointEigenSolver<CMat> es(mat_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10)
        throw std::runtime_error("DensityMatrix: negative eigenvalue");
}

// --- TFactor ----------------------------------------------------------------

TFactor::TFactor(CMat elements) : mat_(std::move(elements)) {
    if (mat_.rows() != mat_.cols() || mat_.rows() < 1)
        throw std::invalid_argument("TFactor: non-square matrix");
    for (int i = 0; i < dim(); ++i) {
        for (int j = i + 1; j < dim(); ++j)
            if (mat_(i, j) != cxd(0.0, 0.0))
                throw std::invalid_argument("TFactor: nonzero entry above the diagonal");
        if (mat_(i, i).imag() != 0.0 || mat_(i, i).real() < 0.0)
            throw std::invalid_argument("TFactor: diagonal must be real and non-negative");
    }
}

TFactor TFactor::from_parameters(const std::vector<double>& params, int dim) {
    if (static_cast<int>(params.size()) != parameter_count(dim))
        throw std::invalid_argument("TFactor::from_parameters: wrong parameter count");
    CMat m = CMat::Zero(dim, dim);
    std::size_t idx = 0;
    for (int k = 0; k < dim; ++k) {
        for (int c = 0; c < k; ++c) {
            const double re = params[idx++];
            const double im = params[idx++];
            m(k, c) = cxd(re, im);
        }
        m(k, k) = std::abs(params[idx++]);
    }
    return TFactor(std::move(m));
}

std::vector<double> TFactor::to_parameters() const {
    std::vector<double> p;
    p.reserve(static_cast<std::size_t>(parameter_count(dim())));
    for (int k = 0; k < dim(); ++k) {
        for (int c = 0; c < k; ++c) {
            p.push_back(mat_(k, c).real());
            p.push_back(mat_(k, c).imag());
        }
        p.push_back(mat_(k, k).real());
    }
    return p;
}

double TFactor::gram_trace() const { return mat_.squaredNorm(); }

// --- GaussianParams ---------------------------------------------------------

void GaussianParams::validate() const {
    if (!(delta > 0.0) || !(kappa > 0.0))
        throw std::invalid_argument("GaussianParams: delta and kappa must be positive");
}

// --- constructors -----------------------------------------------------------

StateVector coherent_state(cxd alpha, int dim) {
    if (dim < 1) throw std::invalid_argument("coherent_state: dim must be >= 1");
    CVec c(dim);
    c(0) = std::exp(-0.5 * std::norm(alpha));
    for (int n = 1; n < dim; ++n) c(n) = c(n - 1) * alpha / std::sqrt(static_cast<double>(n));
    const double leak = 1.0 - c.squaredNorm();
    if (leak >= kLeakageThreshold)
        throw CutoffTooSmall("coherent_state: truncation leakage " + std::to_string(leak));
    return StateVector(std::move(c));
}

StateVector squeezed_vacuum(double r, int dim) {
    if (dim < 2) throw std::invalid_argument("squeezed_vacuum: dim must be >= 2");
    CVec c = CVec::Zero(dim);
    const double t = std::tanh(r);
    double amp = 1.0 / std::sqrt(std::cosh(r));
    c(0) = amp;
    for (int m = 1; 2 * m < dim; ++m) {
        amp *= -t * std::sqrt((2.0 * m - 1.0) / (2.0 * m));
        c(2 * m) = amp;
    }
    const double leak = 1.0 - c.squaredNorm();
    if (leak >= kLeakageThreshold)
        throw CutoffTooSmall("squeezed_vacuum: truncation leakage " + std::to_string(leak));
    return StateVector(std::move(c));
}

DensityMatrix squeezed_thermal_density(double n_th, double r, cxd mu, int dim) {
    if (dim < 1) throw std::invalid_argument("squeezed_thermal_density: dim must be >= 1");
    if (n_th < 0.0) throw std::invalid_argument("squeezed_thermal_density: n_th must be >= 0");
    const int pad = 32 + dim / 2;
    const int w = dim + pad;

    CMat rho = CMat::Zero(w, w);
    if (n_th == 0.0) {
        rho(0, 0) = 1.0;
    } else {
        const double q = n_th / (n_th + 1.0);
        double p = 1.0 / (n_th + 1.0);
        for (int n = 0; n < w; ++n) {
            rho(n, n) = p;
            p *= q;
        }
    }

    const CMat a = annihilation_operator(w);
    if (r != 0.0) {
        const CMat a2 = a * a;
        const CMat s = exp_skew_hermitian(0.5 * r * (a2 - a2.adjoint()));
        rho = s * rho * s.adjoint();
    }
    if (mu != cxd(0.0, 0.0)) {
        const CMat d = exp_skew_hermitian(mu * a.adjoint() - std::conj(mu) * a);
        rho = d * rho * d.adjoint();
    }

    double kept = 0.0;
    for (int n = 0; n < dim; ++n) kept += rho(n, n).real();
    if (1.0 - kept >= kLeakageThreshold)
        throw CutoffTooSmall("squeezed_thermal_density: truncated trace " + std::to_string(kept));
    return DensityMatrix(rho.topLeftCorner(dim, dim));
}

DensityMatrix singlet_density() {
    CVec psi = CVec::Zero(4);
    psi(1) = 1.0 / std::sqrt(2.0);
    psi(2) = -1.0 / std::sqrt(2.0);
    return DensityMatrix::from_pure(StateVector(std::move(psi)));
}

DensityMatrix maximally_mixed(int dim) {
    return DensityMatrix(CMat::Identity(dim, dim));
}

// --- conversions ------------------------------------------------------------

DensityMatrix t_factor_to_density(const TFactor& t) {
    const double tr = t.gram_trace();
    if (tr < 1e-300) throw ZeroFactor("t_factor_to_density: Tr(T^dag T) vanishes");
    return DensityMatrix(t.matrix().adjoint() * t.matrix());
}

namespace {

// Guarded lower Cholesky of a PSD matrix: zero pivots drop their column.
CMat guarded_cholesky(const CMat& m) {
    const int n = static_cast<int>(m.rows());
    const double tol = 1e-14 * std::max(m.trace().real(), 1e-300);
    CMat l = CMat::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        double d = m(j, j).real();
        for (int k = 0; k < j; ++k) d -= std::norm(l(j, k));
        if (d <= tol) continue;  // rank-deficient direction
        const double piv = std::sqrt(d);
        l(j, j) = piv;
        for (int i = j + 1; i < n; ++i) {
            cxd s = m(i, j);
            for (int k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
            l(i, j) = s / piv;
        }
    }
    return l;
}

}  // namespace

TFactor t_factor_from_density(const DensityMatrix& rho) {
    const int n = rho.dim();
    CMat flipped(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) flipped(i, j) = rho(n - 1 - i, n - 1 - j);
    const CMat l = guarded_cholesky(flipped);
    CMat t(n, n);
    for (int i = 0; i < n; ++i)  // T = (J L J)^dag
        for (int j = 0; j < n; ++j) t(i, j) = std::conj(l(n - 1 - j, n - 1 - i));
    // rounding can leave the dropped-pivot diagonal at -0.0
    for (int i = 0; i < n; ++i) t(i, i) = std::abs(t(i, i));
    return TFactor(std::move(t));
}

TFactor t_factor_from_state(const StateVector& psi) {
    const int n = psi.dim();
    int last = n - 1;
    while (last > 0 && std::abs(psi[last]) < 1e-300) --last;
    const cxd phase = psi[last] / std::abs(psi[last]);
    CMat t = CMat::Zero(n, n);
    for (int m = 0; m < last; ++m) t(last, m) = std::conj(psi[m] / phase);
    t(last, last) = std::abs(psi[last]);
    return TFactor(std::move(t));
}

double overlap(const DensityMatrix& rho1, const DensityMatrix& rho2) {
    if (rho1.dim() != rho2.dim())
        throw DimensionMismatch("overlap: dimensions differ");
    const double cross = (rho1.matrix() * rho2.matrix()).trace().real();
    const double o = cross / std::sqrt(rho1.purity() * rho2.purity());
    return std::clamp(o, 0.0, 1.0);
}

std::vector<double> squeezed_thermal_photon_distribution(double n_th, double kappa,
                                                         int n_max) {
    if (n_th < 0.0 || !(kappa > 0.0) || n_max < 0)
        throw std::invalid_argument("squeezed_thermal_photon_distribution: bad arguments");
    const std::size_t count = static_cast<std::size_t>(n_max) + 1;

    auto integrate = [&](int points) {
        std::vector<double> out(count, 0.0);
        const double h = 2.0 * kPi / points;
        for (int g = 0; g < points; ++g) {  // uniform trapezoid on a periodic integrand
            const double phi = g * h;
            const double c = (n_th + 0.5) * (std::sin(phi) * std::sin(phi) / kappa +
                                             kappa * std::cos(phi) * std::cos(phi)) +
                             0.5;
            double term = 1.0 / c;
            const double ratio = (c - 1.0) / c;
            for (std::size_t n = 0; n < count; ++n) {
                out[n] += term;
                term *= ratio;
            }
        }
        for (double& v : out) v /= points;
        return out;
    };

    std::vector<double> prev = integrate(64);
    for (int points = 128; points <= (1 << 20); points *= 2) {
        std::vector<double> cur = integrate(points);
        double change = 0.0;
        for (std::size_t n = 0; n < count; ++n)
            change = std::max(change, std::abs(cur[n] - prev[n]));
        if (change <= 1e-10) {
            for (double& v : cur) v = std::max(v, 0.0);  // clear quadrature-level negatives
            return cur;
        }
        prev = std::move(cur);
    }
    throw QuadratureNotConverged("squeezed_thermal_photon_distribution: 1e-10 not reached");
}

// --- Gaussian-parameter bridge ----------------------------------------------

PhotonNumbers params_to_photon_numbers(const GaussianParams& p) {
    p.validate();
    if (p.delta > 1.0)
        throw UnphysicalParams("params_to_photon_numbers: delta > 1 (n_th < 0)");
    PhotonNumbers n;
    n.n_th = 0.5 * (1.0 / (p.delta * p.delta) - 1.0);
    n.n_sq = (1.0 + p.kappa * p.kappa) / (4.0 * p.kappa) - 0.5;
    n.n_coh = p.a * p.a + p.b * p.b;
    return n;
}

void params_to_state_args(const GaussianParams& p, double& n_th, double& r, cxd& mu) {
    p.validate();
    n_th = std::max(0.0, 0.5 * (1.0 / (p.delta * p.delta) - 1.0));
    r = -0.5 * std::log(p.kappa);
    mu = cxd(p.a, p.b);
}

GaussianParams params_from_state_args(double n_th, double r, cxd mu) {
    if (n_th < 0.0) throw std::invalid_argument("params_from_state_args: n_th < 0");
    GaussianParams p;
    p.delta = 1.0 / std::sqrt(1.0 + 2.0 * n_th);
    p.kappa = std::exp(-2.0 * r);
    p.a = mu.real();
    p.b = mu.imag();
    return p;
}

DensityMatrix gaussian_params_to_density(const GaussianParams& p, int dim) {
    double n_th, r;
    cxd mu;
    params_to_state_args(p, n_th, r, mu);
    return squeezed_thermal_density(n_th, r, mu, dim);
}

double gaussian_state_overlap(const GaussianParams& p1, const GaussianParams& p2) {
    p1.validate();
    p2.validate();
    auto var_x = [](const GaussianParams& p) { return p.kappa / (4.0 * p.delta * p.delta); };
    auto var_y = [](const GaussianParams& p) { return 1.0 / (4.0 * p.delta * p.delta * p.kappa); };
    const double sx = var_x(p1) + var_x(p2);
    const double sy = var_y(p1) + var_y(p2);
    const double dx = p1.a - p2.a;
    const double dy = p1.b - p2.b;
    const double cross =
        std::exp(-0.5 * (dx * dx / sx + dy * dy / sy)) / (2.0 * std::sqrt(sx * sy));
    const double pur1 = 1.0 / (4.0 * std::sqrt(var_x(p1) * var_y(p1)));
    const double pur2 = 1.0 / (4.0 * std::sqrt(var_x(p2) * var_y(p2)));
    return std::clamp(cross / std::sqrt(pur1 * pur2), 0.0, 1.0);
}

}  // namespace qmle
