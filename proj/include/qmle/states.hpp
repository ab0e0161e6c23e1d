#pragma once

#include <Eigen/Dense>
#include <vector>

#include "qmle/common.hpp"

namespace qmle {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

/// Pure state over a finite basis (Fock-truncated mode or two qubits).
/// Squared norm is 1 within 1e-12 after construction.
class StateVector {
  public:
    explicit StateVector(CVec amplitudes);

    int dim() const { return static_cast<int>(amp_.size()); }
    const CVec& amplitudes() const { return amp_; }
    cxd operator[](int n) const { return amp_(n); }

    double mean_photon_number() const;

  private:
    CVec amp_;
};

/// Hermitian, unit-trace, positive matrix over a finite basis.
///
/// Hermiticity holds exactly by construction (the constructor symmetrizes),
/// the trace is renormalized to 1, and positivity is a property of how
/// instances are produced (T^dag T, projectors, convex mixtures); validate()
/// checks all three.
class DensityMatrix {
  public:
    explicit DensityMatrix(CMat elements);
    static DensityMatrix from_pure(const StateVector& psi);

    int dim() const { return static_cast<int>(mat_.rows()); }
    const CMat& matrix() const { return mat_; }
    cxd operator()(int i, int j) const { return mat_(i, j); }

    /// Diagonal as a real vector (photon-number probabilities in Fock basis).
    std::vector<double> diagonal() const;

    /// Zero-pad (or error on shrink) to a larger basis.
    DensityMatrix padded(int dim) const;

    double purity() const;  // Tr(rho^2)

    /// Throws if Hermiticity/trace/positivity are violated beyond tolerance
    /// (eigenvalues below -1e-10 count as violations).
    void validate() const;

  private:
    CMat mat_;
};

/// Lower-triangular complex matrix with real non-negative diagonal;
/// rho = T^dag T / Tr(T^dag T) is positive and Hermitian for any such T.
/// Carries dim^2 real parameters (dim diagonal + dim(dim-1)/2 complex).
class TFactor {
  public:
    explicit TFactor(CMat elements);  // strictly-upper part must be zero

    /// Unpack from the flat parameter layout used by the optimizer:
    /// rows k = 0..dim-1, columns m = 0..k; off-diagonal entries contribute
    /// (re, im) pairs, the diagonal one real number whose absolute value is
    /// used (its sign is redundant under rho = T^dag T).
    static TFactor from_parameters(const std::vector<double>& params, int dim);
    std::vector<double> to_parameters() const;

    static int parameter_count(int dim) { return dim * dim; }

    int dim() const { return static_cast<int>(mat_.rows()); }
    const CMat& matrix() const { return mat_; }
    cxd operator()(int i, int j) const { return mat_(i, j); }

    double gram_trace() const;  // Tr(T^dag T)

  private:
    CMat mat_;
};

/// Four real parameters of a Gaussian Wigner function
///   W(x,y) \propto exp{-2 delta^2 [ (x-a)^2 / kappa + kappa (y-b)^2 ]}.
/// delta in (0,1] for physical states (n_th >= 0); kappa > 0.
struct GaussianParams {
    double delta = 1.0;
    double kappa = 1.0;
    double a = 0.0;
    double b = 0.0;

    void validate() const;          // delta > 0, kappa > 0
    bool is_physical() const { return delta > 0.0 && delta <= 1.0 && kappa > 0.0; }
};

// --- canonical state constructors ----------------------------------------

/// Coherent state |alpha> truncated to dim Fock levels and renormalized.
/// Throws CutoffTooSmall if the truncation leakage 1 - sum |c_n|^2 >= 1e-6.
StateVector coherent_state(cxd alpha, int dim);

/// Squeezed vacuum S(r)|0>, S(r) = exp[r(a^2 - a^dag^2)/2]; even Fock
/// support only, mean photon number sinh^2 r. For r > 0 the x quadrature
/// is squeezed (variance e^{-2r}/4).
StateVector squeezed_vacuum(double r, int dim);

/// Displaced squeezed thermal state D(mu) S(r) nu(n_th) S^dag(r) D^dag(mu),
/// built by conjugating the thermal diagonal with dense matrix
/// representations of S and D at a padded dimension, then truncating.
/// Throws CutoffTooSmall if the truncated trace falls below 1 - 1e-6.
DensityMatrix squeezed_thermal_density(double n_th, double r, cxd mu, int dim);

/// Two-qubit singlet projector onto (|01> - |10>)/sqrt(2); basis order
/// |00>,|01>,|10>,|11>.
DensityMatrix singlet_density();

DensityMatrix maximally_mixed(int dim);

// --- conversions and metrics ----------------------------------------------

/// rho = T^dag T / Tr(T^dag T). Throws ZeroFactor if Tr(T^dag T) < 1e-300.
DensityMatrix t_factor_to_density(const TFactor& t);

/// Inverse of the above up to unitary gauge: a lower-triangular T with
/// T^dag T = rho (reverse-ordered Cholesky; near-zero pivots are dropped).
TFactor t_factor_from_density(const DensityMatrix& rho);

/// T with a single nonzero row reproducing |psi><psi|.
TFactor t_factor_from_state(const StateVector& psi);

/// Normalized overlap O = Tr(rho1 rho2) / sqrt(Tr rho1^2 Tr rho2^2);
/// O in [0,1], O = 1 iff rho1 = rho2. Throws DimensionMismatch.
double overlap(const DensityMatrix& rho1, const DensityMatrix& rho2);

/// Photon-number probabilities <n|rho|n>, n = 0..n_max, of a squeezed
/// thermal state via the phase integral
///   p_n = (2 pi)^{-1} \int_0^{2pi} dphi [C-1]^n / C^{n+1},
///   C(phi) = (n_th + 1/2)(sin^2 phi / kappa + kappa cos^2 phi) + 1/2.
/// Uniform trapezoid with grid doubling until every entry is stable to
/// 1e-10; throws QuadratureNotConverged otherwise.
std::vector<double> squeezed_thermal_photon_distribution(double n_th, double kappa,
                                                         int n_max);

// --- Gaussian-parameter bridge ---------------------------------------------

struct PhotonNumbers {
    double n_th = 0.0;
    double n_sq = 0.0;
    double n_coh = 0.0;
    double total() const { return n_th + n_sq + n_coh + 2.0 * n_th * n_sq; }
};

/// n_th = (1/delta^2 - 1)/2, n_sq = (1+kappa^2)/(4 kappa) - 1/2,
/// n_coh = a^2 + b^2. Throws UnphysicalParams if delta > 1.
PhotonNumbers params_to_photon_numbers(const GaussianParams& p);

/// Operator-language equivalents: r = -log(kappa)/2, mu = a + i b,
/// n_th from delta. The r sign matches squeezed_vacuum (kappa > 1 means
/// the x quadrature is anti-squeezed).
void params_to_state_args(const GaussianParams& p, double& n_th, double& r, cxd& mu);
GaussianParams params_from_state_args(double n_th, double r, cxd mu);

/// Dense realization of the parameterized Gaussian state, cutoff chosen by
/// the caller (same leakage contract as squeezed_thermal_density).
DensityMatrix gaussian_params_to_density(const GaussianParams& p, int dim);

/// Closed-form normalized overlap of two Gaussian states (no truncation);
/// agrees with overlap() on the Fock realizations.
double gaussian_state_overlap(const GaussianParams& p1, const GaussianParams& p2);

}  // namespace qmle
