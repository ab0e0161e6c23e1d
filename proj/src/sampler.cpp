#include "qmle/sampler.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "qmle/rng.hpp"

namespace qmle {

void SamplerConfig::validate() const {
    if (n_samples < 1) throw std::invalid_argument("SamplerConfig: n_samples must be >= 1");
    if (!(eta > 0.0) || eta > 1.0)
        throw std::invalid_argument("SamplerConfig: eta must lie in (0, 1]");
    if (phase_mode == PhaseMode::FixedGrid && grid_k < 1)
        throw std::invalid_argument("SamplerConfig: grid_k must be >= 1");
    if (cdf_cells < 64) throw std::invalid_argument("SamplerConfig: cdf_cells must be >= 64");
}

namespace {

double draw_phase(const SamplerConfig& cfg, std::int64_t index, RandomStream& rs) {
    if (cfg.phase_mode == PhaseMode::FixedGrid)
        return (index % cfg.grid_k) * kPi / cfg.grid_k;
    return rs.uniform(0.0, 2.0 * kPi);
}

double apply_loss(double x_ideal, double eta, RandomStream& rs) {
    if (eta == 1.0) return x_ideal;
    return std::sqrt(eta) * x_ideal + std::sqrt(0.25 * (1.0 - eta)) * rs.normal();
}

// Ideal-marginal sampler for a Fock-basis state: spectral mixture of pure
// components, each sampled by inverting the tabulated CDF of |psi(x|phi)|^2.
class FockMarginalSampler {
  public:
    FockMarginalSampler(const DensityMatrix& rho, int cells)
        : dim_(rho.dim()), cells_(cells) {
        half_width_ = 0.5 * std::sqrt(2.0 * dim_ - 1.0) + 4.0;
        step_ = 2.0 * half_width_ / cells_;
        table_.resize(static_cast<std::size_t>(cells_ + 1) * dim_);
        for (int g = 0; g <= cells_; ++g)
            fock_position_amplitudes(dim_, -half_width_ + g * step_,
                                     &table_[static_cast<std::size_t>(g) * dim_]);

        Eigen::SelfAdjointEigenSolver<CMat> es(rho.matrix());
        vectors_ = es.eigenvectors();
        Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
        lam /= lam.sum();
        cumulative_.resize(static_cast<std::size_t>(dim_));
        double c = 0.0;
        for (int k = 0; k < dim_; ++k) {
            c += lam(k);
            cumulative_[static_cast<std::size_t>(k)] = c;
        }
        cumulative_.back() = 1.0;
        density_.resize(static_cast<std::size_t>(cells_) + 1);
        rotated_.resize(static_cast<std::size_t>(dim_));
    }

    double sample_ideal(double phase, RandomStream& rs) {
        const double u_comp = rs.uniform();
        const double u_x = rs.uniform();
        const int k = static_cast<int>(
            std::lower_bound(cumulative_.begin(), cumulative_.end(), u_comp) -
            cumulative_.begin());

        // psi_k rotated by the LO phase: coefficients V(n,k) e^{i n phi}
        const double cr = std::cos(phase), ci = std::sin(phase);
        double fr = 1.0, fi = 0.0;
        for (int n = 0; n < dim_; ++n) {
            rotated_[static_cast<std::size_t>(n)] = vectors_(n, k) * cxd(fr, fi);
            const double nfr = fr * cr - fi * ci;
            fi = fr * ci + fi * cr;
            fr = nfr;
        }
        for (int g = 0; g <= cells_; ++g) {
            const double* row = &table_[static_cast<std::size_t>(g) * dim_];
            double ar = 0.0, ai = 0.0;
            for (int n = 0; n < dim_; ++n) {
                ar += rotated_[static_cast<std::size_t>(n)].real() * row[n];
                ai += rotated_[static_cast<std::size_t>(n)].imag() * row[n];
            }
            density_[static_cast<std::size_t>(g)] = ar * ar + ai * ai;
        }

        double total = 0.0;
        for (int c = 0; c < cells_; ++c) total += cell_mass(c);

        const double target = u_x * total;
        int cell = cells_ - 1;
        double below = 0.0;
        for (int c = 0; c < cells_; ++c) {
            const double mass = cell_mass(c);
            if (below + mass >= target) {
                cell = c;
                break;
            }
            below += mass;
        }
        return -half_width_ + (cell + invert_cell(cell, target - below)) * step_;
    }

  private:
    // Cell mass by a cubic fit through four nodes (fourth order); the
    // trapezoid rule alone biases the CDF at O(h^2), which refinement tests
    // can see. Falls back to the trapezoid at the domain edges.
    double cell_mass(int c) const {
        const double q0 = density_[static_cast<std::size_t>(c)];
        const double q1 = density_[static_cast<std::size_t>(c) + 1];
        if (c == 0 || c + 1 == cells_) return 0.5 * step_ * (q0 + q1);
        const double qm = density_[static_cast<std::size_t>(c) - 1];
        const double qp = density_[static_cast<std::size_t>(c) + 2];
        const double m = step_ * (-qm + 13.0 * q0 + 13.0 * q1 - qp) / 24.0;
        return m > 0.0 ? m : 0.5 * step_ * (q0 + q1);
    }

    // Cubic Hermite CDF inside cell c: F(0) = 0, F(1) = mass,
    // F'(t) = step * pdf at the endpoints. Safeguarded Newton.
    double invert_cell(int c, double local_target) const {
        const double q0 = step_ * density_[static_cast<std::size_t>(c)];
        const double q1 = step_ * density_[static_cast<std::size_t>(c) + 1];
        const double mass = cell_mass(c);
        if (mass <= 0.0) return 0.5;
        const double a = q0 + q1 - 2.0 * mass;
        const double b = 3.0 * mass - 2.0 * q0 - q1;
        double t = 0.5, lo = 0.0, hi = 1.0;
        for (int it = 0; it < 60; ++it) {
            const double f = ((a * t + b) * t + q0) * t - local_target;
            (f > 0.0 ? hi : lo) = t;
            const double d = (3.0 * a * t + 2.0 * b) * t + q0;
            double next = (d > 0.0) ? t - f / d : 0.5 * (lo + hi);
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            if (std::abs(next - t) < 1e-15) return next;
            t = next;
        }
        return t;
    }

    int dim_;
    int cells_;
    double half_width_;
    double step_;
    std::vector<double> table_;       // node-major wavefunctions
    CMat vectors_;
    std::vector<double> cumulative_;  // spectral weights
    std::vector<double> density_;     // scratch, per record
    std::vector<cxd> rotated_;        // scratch, per record
};

}  // namespace

std::vector<HomodyneRecord> sample_homodyne(const DensityMatrix& rho,
                                            const SamplerConfig& cfg) {
    cfg.validate();
    FockMarginalSampler marginal(rho, cfg.cdf_cells);
    SplitRng rng(cfg.seed);
    std::vector<HomodyneRecord> out;
    out.reserve(static_cast<std::size_t>(cfg.n_samples));
    for (std::int64_t i = 0; i < cfg.n_samples; ++i) {
        RandomStream rs = rng.stream(static_cast<std::uint64_t>(i));
        const double phase = draw_phase(cfg, i, rs);
        const double ideal = marginal.sample_ideal(phase, rs);
        out.push_back(HomodyneRecord::wrapped(phase, apply_loss(ideal, cfg.eta, rs)));
    }
    return out;
}

std::vector<HomodyneRecord> sample_homodyne_gaussian(const GaussianParams& p,
                                                     const SamplerConfig& cfg) {
    cfg.validate();
    p.validate();
    SplitRng rng(cfg.seed);
    std::vector<HomodyneRecord> out;
    out.reserve(static_cast<std::size_t>(cfg.n_samples));
    for (std::int64_t i = 0; i < cfg.n_samples; ++i) {
        RandomStream rs = rng.stream(static_cast<std::uint64_t>(i));
        const double phase = draw_phase(cfg, i, rs);
        double mean, var;
        gaussian_homodyne_moments(p, phase, 1.0, mean, var);
        const double ideal = mean + std::sqrt(var) * rs.normal();
        out.push_back(HomodyneRecord::wrapped(phase, apply_loss(ideal, cfg.eta, rs)));
    }
    return out;
}

std::vector<HomodyneRecord> sample_squeezed_reference(double x0, double r,
                                                      const SamplerConfig& cfg) {
    cfg.validate();
    double mean, var;
    squeezed_homodyne_moments(x0, r, cfg.eta, mean, var);
    const double sd = std::sqrt(var);
    SplitRng rng(cfg.seed);
    std::vector<HomodyneRecord> out;
    out.reserve(static_cast<std::size_t>(cfg.n_samples));
    for (std::int64_t i = 0; i < cfg.n_samples; ++i) {
        RandomStream rs = rng.stream(static_cast<std::uint64_t>(i));
        out.push_back(HomodyneRecord{0.0, mean + sd * rs.normal()});
    }
    return out;
}

std::vector<SpinOutcome> sample_spin_pair(const DensityMatrix& rho,
                                          const SamplerConfig& cfg) {
    cfg.validate();
    if (rho.dim() != 4) throw DimensionMismatch("sample_spin_pair: rho must be 4x4");

    auto draw_axis = [](RandomStream& rs) {
        const double z = rs.uniform(-1.0, 1.0);
        const double az = rs.uniform(0.0, 2.0 * kPi);
        const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
        return std::array<double, 3>{s * std::cos(az), s * std::sin(az), z};
    };
    auto flipped = [](const std::array<double, 3>& v) {
        return std::array<double, 3>{-v[0], -v[1], -v[2]};
    };
    auto born = [&rho](const SpinOutcome& o) {
        const auto psi = joint_spin_amplitudes(o);
        cxd p(0.0, 0.0);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                p += std::conj(psi[static_cast<std::size_t>(i)]) * rho(i, j) *
                     psi[static_cast<std::size_t>(j)];
        return std::max(0.0, p.real());
    };

    SplitRng rng(cfg.seed);
    std::vector<SpinOutcome> out;
    out.reserve(static_cast<std::size_t>(cfg.n_samples));
    for (std::int64_t i = 0; i < cfg.n_samples; ++i) {
        RandomStream rs = rng.stream(static_cast<std::uint64_t>(i));
        const auto axis_a = draw_axis(rs);
        const auto axis_b = draw_axis(rs);
        const SpinOutcome candidates[4] = {
            {axis_a, axis_b},
            {axis_a, flipped(axis_b)},
            {flipped(axis_a), axis_b},
            {flipped(axis_a), flipped(axis_b)},
        };
        double probs[4];
        double total = 0.0;
        for (int c = 0; c < 4; ++c) total += probs[c] = born(candidates[c]);
        const double u = rs.uniform() * total;
        double acc = 0.0;
        int pick = 3;
        for (int c = 0; c < 4; ++c) {
            acc += probs[c];
            if (u <= acc) {
                pick = c;
                break;
            }
        }
        out.push_back(candidates[pick]);
    }
    return out;
}

ClickSummary sample_on_off(const DensityMatrix& rho, const SamplerConfig& cfg) {
    if (cfg.n_samples < 1) throw std::invalid_argument("sample_on_off: n_samples must be >= 1");
    if (cfg.eta < 0.0 || cfg.eta > 1.0)
        throw std::invalid_argument("sample_on_off: eta must lie in [0, 1]");
    const double p_click = 1.0 - no_click_probability(rho, cfg.eta);
    SplitRng rng(cfg.seed);
    std::int64_t clicks = 0;
    for (std::int64_t i = 0; i < cfg.n_samples; ++i) {
        RandomStream rs = rng.stream(static_cast<std::uint64_t>(i));
        if (rs.uniform() < p_click) ++clicks;
    }
    return ClickSummary{cfg.n_samples, clicks};
}

}  // namespace qmle
