#pragma once

#include <optional>
#include <vector>

#include "qmle/optimize.hpp"
#include "qmle/povm.hpp"

namespace qmle {

/// Efficiency point estimate with its Cramer-Rao error bar.
struct EfficiencyEstimate {
    double eta_ml = 0.0;
    double sigma = 0.0;  // 1/sqrt(N F); meaningful only when sigma_defined
    bool sigma_defined = false;
    double fisher = 0.0;  // per-measurement Fisher information at eta_ml
    long n_used = 0;

    bool saturated = false;  // all trials clicked: estimate pinned at 1
    bool no_clicks = false;  // no trial clicked: estimate 0, sigma undefined
    bool clamped = false;    // point estimate clamped into [0, 1]

    // Diagnostics kept for comparison, never used as the estimate:
    // closed-form candidate from the quadratic stationarity route (linear
    // detector), and the eta^2-prefactor Fisher variant plus the weak-field
    // limit (avalanche detector).
    std::optional<double> eta_closed_form;
    std::optional<double> fisher_eta_sq_variant;
    std::optional<double> fisher_weak_field;
};

// --- Gaussian-state estimation -------------------------------------------------

/// sum_i ln gaussian_homodyne_density(p, phi_i, eta, x_i).
double gaussian_log_likelihood(const GaussianParams& p,
                               const std::vector<HomodyneRecord>& data, double eta);

/// Batched evaluator used by the fit (equivalent to the sum above within
/// rounding; equivalence-tested).
class GaussianLikelihood {
  public:
    GaussianLikelihood(const std::vector<HomodyneRecord>& data, double eta,
                       int threads = 1);
    double operator()(const GaussianParams& p) const;
    std::size_t size() const { return x_.size(); }

  private:
    std::vector<double> x_, cos_, sin_;
    double eta_;
    int threads_;
    mutable std::vector<double> v_, d2_;
};

struct GaussianEstimate {
    GaussianParams params;     // delta clamped into (0, 1]
    PhotonNumbers photons;     // derived from the clamped parameters
    double delta_unclamped = 1.0;
    double log_likelihood = 0.0;
    long evals = 0;
    bool converged = false;
};

OptConfig default_gaussian_config();

/// Four-parameter simplex fit of (delta, kappa, a, b), moment-initialized,
/// optimized in (ln delta, ln kappa, a, b). Requires at least three distinct
/// phases (DegeneratePhases otherwise).
GaussianEstimate estimate_gaussian(const std::vector<HomodyneRecord>& data, double eta,
                                   const OptConfig& cfg);
GaussianEstimate estimate_gaussian(const std::vector<HomodyneRecord>& data, double eta);

// --- linear-detector efficiency --------------------------------------------------

/// ML efficiency of a linear detector from phase-0 homodyne records of the
/// known squeezed reference |x0, r>: 64-point grid pre-scan, golden-section
/// refinement of the exact Gaussian log-likelihood, Cramer-Rao sigma from the
/// numeric Fisher information (central differences, relative step 1e-5).
EfficiencyEstimate estimate_eta_linear(const std::vector<HomodyneRecord>& data, double x0,
                                       double r);

/// Mean-value estimate x_bar / x0, clamped into [0, 1].
double naive_eta(const std::vector<HomodyneRecord>& data, double x0,
                 bool* clamped = nullptr);

// --- avalanche-detector efficiency ------------------------------------------------

/// Reference state for ON/OFF calibration.
class OnOffReference {
  public:
    enum class Kind { Coherent, SinglePhoton, Density };

    static OnOffReference coherent(double alpha_sq);
    static OnOffReference single_photon();
    static OnOffReference density(DensityMatrix rho);

    Kind kind() const { return kind_; }
    double alpha_sq() const { return alpha_sq_; }

    double no_click(double eta) const;  // P0(eta)

  private:
    OnOffReference(Kind k, double a) : kind_(k), alpha_sq_(a) {}
    Kind kind_;
    double alpha_sq_ = 0.0;
    std::optional<DensityMatrix> rho_;
};

/// eta solving P0(eta) = 1 - N_c/N: closed form for a coherent reference,
/// N_c/N for a single-photon reference, monotone bisection for a general
/// density.
EfficiencyEstimate estimate_eta_avalanche(const ClickSummary& s, const OnOffReference& ref);

/// Two-outcome Fisher information F = (dP0/deta)^2 / (P0 (1-P0)) for a
/// coherent reference, by direct differentiation of P0 = e^{-eta |alpha|^2}.
double fisher_on_off(double eta, double alpha_sq);

struct OnOffFisherDetails {
    double fisher = 0.0;            // |alpha|^4 / (e^{eta |alpha|^2} - 1)
    double weak_field_limit = 0.0;  // |alpha|^2 / eta
    double eta_sq_variant = 0.0;    // eta^2 / (e^{eta |alpha|^2} - 1), for comparison
};
OnOffFisherDetails fisher_on_off_details(double eta, double alpha_sq);

/// Cramer-Rao standard deviation 1/sqrt(n F).
double cramer_rao_sigma(double fisher, long n);

/// Fisher information of a one-parameter outcome density by central
/// differences in the parameter and Simpson quadrature in x.
double numeric_fisher(const std::function<double(double, double)>& density, double eta,
                      double x_lo, double x_hi, int points, double rel_step = 1e-5);

}  // namespace qmle
