#include "qmle/mle_state.hpp"

#include <cmath>
#include <limits>
#include <thread>

#include "qmle/rng.hpp"

namespace qmle {

namespace {

constexpr double kProbFloor = 1e-300;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct ChunkSum {
    double value = 0.0;
    std::size_t bad = SIZE_MAX;
};

ChunkSum sum_log_range(const double* y, std::size_t lo, std::size_t hi) {
    ChunkSum c;
    for (std::size_t i = lo; i < hi; ++i) {
        if (y[i] < kProbFloor) {
            c.bad = i;
            return c;
        }
        c.value += std::log(y[i]);
    }
    return c;
}

void run_chunked(std::size_t n, int threads,
                 const std::function<void(int, std::size_t, std::size_t)>& body) {
    if (threads <= 1 || n < 2048) {
        body(0, 0, n);
        return;
    }
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
        const std::size_t lo = n * static_cast<std::size_t>(t) / static_cast<std::size_t>(threads);
        const std::size_t hi =
            n * static_cast<std::size_t>(t + 1) / static_cast<std::size_t>(threads);
        pool.emplace_back(body, t, lo, hi);
    }
    for (auto& th : pool) th.join();
}

}  // namespace

double sum_log_strict(const std::vector<double>& y, int threads) {
    const std::size_t n = y.size();
    if (threads <= 1 || n < 2048) {
        const ChunkSum c = sum_log_range(y.data(), 0, n);
        if (c.bad != SIZE_MAX)
            throw ZeroProbabilityRecord(c.bad, "record " + std::to_string(c.bad) +
                                                   " has model probability < 1e-300");
        return c.value;
    }
    std::vector<ChunkSum> parts(static_cast<std::size_t>(threads));
    run_chunked(n, threads, [&](int t, std::size_t lo, std::size_t hi) {
        parts[static_cast<std::size_t>(t)] = sum_log_range(y.data(), lo, hi);
    });
    double total = 0.0;
    for (const ChunkSum& c : parts) {  // fixed combine order
        if (c.bad != SIZE_MAX)
            throw ZeroProbabilityRecord(c.bad, "record " + std::to_string(c.bad) +
                                                   " has model probability < 1e-300");
        total += c.value;
    }
    return total;
}

// --- HomodyneLikelihood -------------------------------------------------------

HomodyneLikelihood::HomodyneLikelihood(const std::vector<HomodyneRecord>& records,
                                       int cutoff, double eta, int threads)
    : design_(HomodyneDesign::make(records, cutoff)),
      table_(cutoff, eta),
      threads_(threads),
      y_(records.size()) {
    if (records.empty()) throw std::invalid_argument("HomodyneLikelihood: no records");
}

double HomodyneLikelihood::operator()(const TFactor& t) const {
    if (t.dim() != design_.dim)
        throw DimensionMismatch("HomodyneLikelihood: T dimension != cutoff");
    const kernels::PackedRows rows = homodyne_factor_rows(t, table_);
    const auto& impl = kernels::active();
    run_chunked(design_.n, threads_, [&](int, std::size_t lo, std::size_t hi) {
        impl.rows_normsq_batch(rows, design_.cre.data() + lo, design_.cim.data() + lo,
                               hi - lo, design_.n, y_.data() + lo);
    });
    const double data_term = sum_log_strict(y_, threads_);
    return data_term - static_cast<double>(design_.n) * t.gram_trace();
}

double HomodyneLikelihood::value_or_neg_inf(const TFactor& t) const {
    try {
        return (*this)(t);
    } catch (const ZeroProbabilityRecord&) {
        return kNegInf;
    }
}

// --- SpinLikelihood -----------------------------------------------------------

SpinLikelihood::SpinLikelihood(const std::vector<SpinOutcome>& outcomes, int threads)
    : design_(SpinDesign::make(outcomes)), threads_(threads), y_(outcomes.size()) {
    if (outcomes.empty()) throw std::invalid_argument("SpinLikelihood: no outcomes");
}

double SpinLikelihood::operator()(const TFactor& t) const {
    const kernels::PackedRows rows = spin_factor_rows(t);
    const auto& impl = kernels::active();
    run_chunked(design_.n, threads_, [&](int, std::size_t lo, std::size_t hi) {
        impl.rows_normsq_batch(rows, design_.cre.data() + lo, design_.cim.data() + lo,
                               hi - lo, design_.n, y_.data() + lo);
    });
    const double data_term = sum_log_strict(y_, threads_);
    return data_term - static_cast<double>(design_.n) * t.gram_trace();
}

double SpinLikelihood::value_or_neg_inf(const TFactor& t) const {
    try {
        return (*this)(t);
    } catch (const ZeroProbabilityRecord&) {
        return kNegInf;
    }
}

double log_likelihood_t(const TFactor& t, const std::vector<HomodyneRecord>& data,
                        double eta) {
    return HomodyneLikelihood(data, t.dim(), eta)(t);
}

double log_likelihood_t(const TFactor& t, const std::vector<SpinOutcome>& data) {
    return SpinLikelihood(data)(t);
}

// --- reconstruction drivers -----------------------------------------------------

OptConfig default_reconstruction_config(int n_params) {
    OptConfig cfg;
    cfg.max_evals = 700 * n_params;
    cfg.x_tol = 0.05;
    cfg.f_tol = 1e-3;
    cfg.initial_step = {0.1};
    cfg.restarts = 2;
    return cfg;
}

namespace {

std::vector<double> mixed_start_parameters(int dim) {
    CMat m = CMat::Identity(dim, dim) / std::sqrt(static_cast<double>(dim));
    return TFactor(std::move(m)).to_parameters();
}

template <typename Likelihood>
OptResult maximize_t(const Likelihood& lik, const std::vector<double>& start, int dim,
                     const OptConfig& cfg) {
    auto objective = [&lik, dim](const std::vector<double>& p) {
        return lik.value_or_neg_inf(TFactor::from_parameters(p, dim));
    };
    return nelder_mead_maximize(objective, start, cfg);
}

}  // namespace

ReconstructionReport reconstruct_fock(const std::vector<HomodyneRecord>& data, int cutoff,
                                      double eta, const OptConfig& cfg) {
    if (cutoff < 2) throw std::invalid_argument("reconstruct_fock: cutoff must be >= 2");
    const HomodyneLikelihood lik(data, cutoff, eta, cfg.threads);
    const OptResult r = maximize_t(lik, mixed_start_parameters(cutoff), cutoff, cfg);
    const TFactor best = TFactor::from_parameters(r.argmax, cutoff);
    ReconstructionReport report{t_factor_to_density(best), r.value,    r.evals,
                                r.converged,               cutoff,     eta,
                                false};
    report.rho_ml.validate();
    return report;
}

ReconstructionReport reconstruct_fock(const std::vector<HomodyneRecord>& data, int cutoff,
                                      double eta) {
    return reconstruct_fock(data, cutoff, eta,
                            default_reconstruction_config(TFactor::parameter_count(cutoff)));
}

ReconstructionReport reconstruct_spin(const std::vector<SpinOutcome>& data,
                                      const OptConfig& cfg) {
    const SpinLikelihood lik(data, cfg.threads);
    const std::vector<double> start = mixed_start_parameters(4);
    const OptResult r1 = maximize_t(lik, start, 4, cfg);

    // probe for a non-unique maximum from a perturbed start
    RandomStream rs = SplitRng(cfg.seed).stream(0x9b0be);
    std::vector<double> start2 = start;
    for (double& p : start2) p += rs.uniform(-0.15, 0.15);
    const OptResult r2 = maximize_t(lik, start2, 4, cfg);

    const DensityMatrix rho1 = t_factor_to_density(TFactor::from_parameters(r1.argmax, 4));
    const DensityMatrix rho2 = t_factor_to_density(TFactor::from_parameters(r2.argmax, 4));
    const bool warn = overlap(rho1, rho2) < 1.0 - 1e-3;

    const bool first_better = r1.value >= r2.value;
    ReconstructionReport report{first_better ? rho1 : rho2,
                                first_better ? r1.value : r2.value,
                                r1.evals + r2.evals,
                                first_better ? r1.converged : r2.converged,
                                4,
                                std::numeric_limits<double>::quiet_NaN(),
                                warn};
    report.rho_ml.validate();
    return report;
}

ReconstructionReport reconstruct_spin(const std::vector<SpinOutcome>& data) {
    return reconstruct_spin(data, default_reconstruction_config(16));
}

}  // namespace qmle
