#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "qmle/common.hpp"

namespace qmle {

struct OptConfig {
    int max_evals = 4000;  // budget per attempt; restarts each get their own
    double x_tol = 1e-6;
    double f_tol = 1e-9;
    /// Axis-aligned initial simplex steps; scalar broadcast when size 1,
    /// 0.1 everywhere when empty.
    std::vector<double> initial_step;
    int restarts = 0;
    std::uint64_t seed = 0;  // drives restart/rebuild perturbation signs
    int threads = 1;         // data-parallel objectives honor this

    /// Optional per-iteration hook (iteration, best f, worst f), f as maximized.
    std::function<void(int, double, double)> observer;

    void validate(int dim) const;
};

struct OptResult {
    std::vector<double> argmax;
    double value = 0.0;
    long evals = 0;
    bool converged = false;
};

/// Downhill simplex maximization with the classical coefficients
/// (reflection 1, expansion 2, contraction 0.5, shrink 0.5). Convergence
/// requires both the simplex diameter below x_tol and the value spread below
/// f_tol; a simplex that collapses without ever seeing values differ by more
/// than f_tol is treated as stalled on a plateau, re-expanded in place, and
/// the run keeps consuming its budget. Throws NonFiniteObjective when f is
/// not finite at x0; later non-finite values are treated as -infinity.
OptResult nelder_mead_maximize(const std::function<double(const std::vector<double>&)>& f,
                               const std::vector<double>& x0, const OptConfig& cfg);

/// Golden-section maximization on [lo, hi] down to bracket width tol;
/// returns the final bracket midpoint. Unimodality is the caller's
/// responsibility (grid pre-scan).
double maximize_scalar(const std::function<double(double)>& f, double lo, double hi,
                       double tol);

}  // namespace qmle
