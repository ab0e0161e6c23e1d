#pragma once

#include <vector>

#include "qmle/optimize.hpp"
#include "qmle/povm.hpp"

namespace qmle {

struct ReconstructionReport {
    DensityMatrix rho_ml;
    double log_likelihood = 0.0;  // penalized objective at the maximum (lambda = N)
    long evals = 0;
    bool converged = false;
    int cutoff = 0;
    double eta_assumed = 1.0;  // NaN for spin data
    bool non_unique_warning = false;
};

/// sum_i ln y_i in a fixed chunked association order (bit-reproducible at a
/// fixed thread count). Throws ZeroProbabilityRecord (with the lowest
/// offending index) when any y_i < 1e-300.
double sum_log_strict(const std::vector<double>& y, int threads);

/// Reusable penalized log-likelihood
///   L(T) = sum_i ln Tr(T^dag T Pi_i) - N Tr(T^dag T)
/// over homodyne records; the per-record kernel expectations run through the
/// batched factor-rows path.
class HomodyneLikelihood {
  public:
    HomodyneLikelihood(const std::vector<HomodyneRecord>& records, int cutoff, double eta,
                       int threads = 1);

    double operator()(const TFactor& t) const;  // throws ZeroProbabilityRecord
    double value_or_neg_inf(const TFactor& t) const;
    std::size_t size() const { return design_.n; }
    int cutoff() const { return design_.dim; }
    double eta() const { return table_.eta(); }

  private:
    HomodyneDesign design_;
    BinomialLossTable table_;
    int threads_;
    mutable std::vector<double> y_;
};

/// Same contract over two-qubit spin outcomes (16 real parameters).
class SpinLikelihood {
  public:
    explicit SpinLikelihood(const std::vector<SpinOutcome>& outcomes, int threads = 1);

    double operator()(const TFactor& t) const;
    double value_or_neg_inf(const TFactor& t) const;
    std::size_t size() const { return design_.n; }

  private:
    SpinDesign design_;
    int threads_;
    mutable std::vector<double> y_;
};

double log_likelihood_t(const TFactor& t, const std::vector<HomodyneRecord>& data,
                        double eta);
double log_likelihood_t(const TFactor& t, const std::vector<SpinOutcome>& data);

/// Simplex settings sized for an M^2-parameter reconstruction.
OptConfig default_reconstruction_config(int n_params);

/// Fock-basis density-matrix reconstruction from homodyne records: downhill
/// simplex over the M^2 real parameters of T starting from the maximally
/// mixed factor.
ReconstructionReport reconstruct_fock(const std::vector<HomodyneRecord>& data, int cutoff,
                                      double eta, const OptConfig& cfg);
ReconstructionReport reconstruct_fock(const std::vector<HomodyneRecord>& data, int cutoff,
                                      double eta);

/// Two-qubit reconstruction from spin outcomes. A second run from a
/// perturbed start probes for a non-unique maximum (insufficient quorum);
/// disagreement beyond 1e-3 in overlap raises non_unique_warning.
ReconstructionReport reconstruct_spin(const std::vector<SpinOutcome>& data,
                                      const OptConfig& cfg);
ReconstructionReport reconstruct_spin(const std::vector<SpinOutcome>& data);

}  // namespace qmle
