#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "qmle/common.hpp"
#include "qmle/kernels.hpp"
#include "qmle/states.hpp"

namespace qmle {

// Quadrature convention used throughout: x_phi = (a^dag e^{i phi} + a e^{-i phi})/2,
// vacuum variance 1/4. Detector loss acts as a Bernoulli (binomial) photon
// loss channel before an ideal quadrature measurement, equivalently
//   x = sqrt(eta) * x_ideal + Gaussian noise of variance (1 - eta)/4.

/// One homodyne datum: LO phase (wrapped into [0, 2pi)) and outcome x.
struct HomodyneRecord {
    double phase = 0.0;
    double x = 0.0;

    static HomodyneRecord wrapped(double phase, double x);
};

/// Recorded Bloch directions of a joint two-qubit spin measurement.
struct SpinOutcome {
    std::array<double, 3> omega_a{0, 0, 1};
    std::array<double, 3> omega_b{0, 0, 1};

    void validate() const;  // both unit vectors within 1e-12
};

/// ON/OFF detection tally: N trials, N_c clicks.
struct ClickSummary {
    std::int64_t n_total = 0;
    std::int64_t n_clicks = 0;

    void validate() const;
};

// --- oscillator wavefunctions and loss coefficients --------------------------

/// <n|x> for the vacuum-variance-1/4 quadrature; evaluated with the
/// normalized three-term recurrence (no factorials), stable to n ~ 10^4.
double fock_position_amplitude(int n, double x);

/// All <n|x> for n = 0..dim-1 into out[0..dim-1].
void fock_position_amplitudes(int dim, double x, double* out);

/// B_{n+j,n} = [ binom(n+j, n) eta^n (1-eta)^j ]^{1/2}, via log-gamma.
double binomial_loss_coefficient(int n, int j, double eta);

/// Cached B_{m,n} for 0 <= n <= m < dim at fixed eta.
class BinomialLossTable {
  public:
    BinomialLossTable(int dim, double eta);
    int dim() const { return dim_; }
    double eta() const { return eta_; }
    double operator()(int m, int n) const { return b_[static_cast<std::size_t>(m) * dim_ + n]; }

  private:
    int dim_;
    double eta_;
    std::vector<double> b_;
};

// --- homodyne ----------------------------------------------------------------

/// Tr[T^dag T H(x; phi)] as the explicitly positive triple sum
///   sum_k sum_j | sum_n <k|T|n+j> B_{n+j,n} <n|x> e^{i n phi} |^2 .
/// Reference implementation; the batched likelihood path is equivalence-
/// tested against it.
double homodyne_expectation(const TFactor& t, const HomodyneRecord& rec, double eta);

/// Tr[rho H(x; phi)] evaluated directly as sum_j <w_j| rho |w_j> without the
/// factorized rearrangement (independent route used by tests and the
/// concavity checks).
double homodyne_expectation_density(const DensityMatrix& rho, const HomodyneRecord& rec,
                                    double eta);

/// Per-dataset precompute for the batched likelihood: complex planes
/// c[n][i] = <n|x_i> e^{i n phi_i}.
struct HomodyneDesign {
    int dim = 0;
    std::size_t n = 0;
    std::vector<double> cre, cim;  // layout [m * n + i]

    static HomodyneDesign make(const std::vector<HomodyneRecord>& records, int dim);
};

/// Factor rows W with sum_k |W_k . c|^2 = Tr[T^dag T H(x;phi)]: the loss
/// congruence G = sum_j D_j^dag (T^dag T) D_j is formed and Cholesky-factored
/// once per T; near-null pivots are dropped, keeping the value a sum of
/// squares.
kernels::PackedRows homodyne_factor_rows(const TFactor& t, const BinomialLossTable& b);

/// Closed-form homodyne outcome density of the Gaussian state `p` at LO
/// phase `phase` and efficiency `eta`:
///   N( sqrt(eta) (a cos + b sin),  eta sigma^2(phase) + (1-eta)/4 ),
///   sigma^2(phase) = (kappa^2 cos^2 + sin^2) / (4 delta^2 kappa).
double gaussian_homodyne_density(const GaussianParams& p, double phase, double eta,
                                 double x);

/// Mean and variance of the above law.
void gaussian_homodyne_moments(const GaussianParams& p, double phase, double eta,
                               double& mean, double& var);

/// Homodyne law of the squeezed reference |x0, r> = D(x0) S(r) |0> measured
/// at phase 0 by a linear detector of efficiency eta:
///   N( eta x0, (e^{-2r} + 1 - eta)/4 ).
double squeezed_homodyne_density(double x0, double r, double eta, double x);
void squeezed_homodyne_moments(double x0, double r, double eta, double& mean,
                               double& var);

// --- spin ---------------------------------------------------------------------

/// Qubit spinor pointing along the Bloch direction omega.
std::array<cxd, 2> bloch_spinor(const std::array<double, 3>& omega);

/// Product-state amplitudes |Omega_A, Omega_B> in the |00>,|01>,|10>,|11> basis.
std::array<cxd, 4> joint_spin_amplitudes(const SpinOutcome& out);

/// Tr(T^dag T F) = sum_mu |<mu|T|Omega_A, Omega_B>|^2; T must be 4x4.
double spin_projector_expectation(const TFactor& t, const SpinOutcome& out);

/// Per-dataset planes of joint spin amplitudes for the batched likelihood.
struct SpinDesign {
    std::size_t n = 0;
    std::vector<double> cre, cim;  // layout [m * n + i], m = 0..3

    static SpinDesign make(const std::vector<SpinOutcome>& outcomes);
};

/// Rows of T itself (lower-triangular packing) for the batched ||T psi||^2.
kernels::PackedRows spin_factor_rows(const TFactor& t);

// --- ON/OFF -------------------------------------------------------------------

/// P_0 = sum_p (1-eta)^p rho_pp, the no-click probability of an avalanche
/// detector of efficiency eta on the Fock-basis state rho.
double no_click_probability(const DensityMatrix& rho, double eta);

}  // namespace qmle
