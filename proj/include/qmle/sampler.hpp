#pragma once

#include <cstdint>
#include <vector>

#include "qmle/povm.hpp"
#include "qmle/states.hpp"

namespace qmle {

enum class PhaseMode {
    UniformRandom,  // phi ~ U[0, 2pi) per record
    FixedGrid,      // phi_i = (i mod k) * pi / k
};

struct SamplerConfig {
    std::uint64_t seed = 0;
    std::int64_t n_samples = 1;
    double eta = 1.0;
    PhaseMode phase_mode = PhaseMode::UniformRandom;
    int grid_k = 12;
    int cdf_cells = 2048;  // inverse-CDF grid resolution for Fock-basis sampling

    void validate() const;
};

/// Homodyne records from an arbitrary Fock-basis state. Per record: draw the
/// LO phase, draw an ideal outcome by inverting the grid CDF of the ideal
/// marginal (the state is eigendecomposed once; each record samples one
/// spectral component), then apply the loss decomposition
/// x = sqrt(eta) x_ideal + N(0, (1-eta)/4). Deterministic given the seed.
std::vector<HomodyneRecord> sample_homodyne(const DensityMatrix& rho,
                                            const SamplerConfig& cfg);

/// Same outcome law for a Gaussian state, using the closed-form ideal
/// marginal N(a cos + b sin, sigma^2(phi)) instead of the grid.
std::vector<HomodyneRecord> sample_homodyne_gaussian(const GaussianParams& p,
                                                     const SamplerConfig& cfg);

/// Phase-0 records of the squeezed reference |x0, r> seen by a linear
/// detector: x ~ N(eta x0, (e^{-2r} + 1 - eta)/4).
std::vector<HomodyneRecord> sample_squeezed_reference(double x0, double r,
                                                      const SamplerConfig& cfg);

/// Two-qubit joint spin measurements: per record both parties draw an
/// independent uniform axis, the +/- outcome pair follows the Born
/// probabilities of the four joint projectors, and the outcome directions
/// (axis or its negation) are recorded.
std::vector<SpinOutcome> sample_spin_pair(const DensityMatrix& rho,
                                          const SamplerConfig& cfg);

/// N Bernoulli trials with click probability 1 - P_0(eta). Unlike the other
/// samplers eta = 0 is allowed (a blind detector never clicks).
ClickSummary sample_on_off(const DensityMatrix& rho, const SamplerConfig& cfg);

}  // namespace qmle
