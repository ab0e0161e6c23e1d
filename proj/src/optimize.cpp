#include "qmle/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qmle/rng.hpp"

namespace qmle {

void OptConfig::validate(int dim) const {
    if (!(x_tol > 0.0) || !(f_tol > 0.0))
        throw std::invalid_argument("OptConfig: tolerances must be positive");
    if (max_evals < dim + 1)
        throw std::invalid_argument("OptConfig: max_evals must be >= dimension + 1");
    if (restarts < 0) throw std::invalid_argument("OptConfig: restarts must be >= 0");
    if (threads < 1) throw std::invalid_argument("OptConfig: threads must be >= 1");
    if (!(initial_step.empty() || initial_step.size() == 1 ||
          static_cast<int>(initial_step.size()) == dim))
        throw std::invalid_argument("OptConfig: initial_step must be empty, scalar, or dim-sized");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double step_for(const OptConfig& cfg, int i) {
    if (cfg.initial_step.empty()) return 0.1;
    if (cfg.initial_step.size() == 1) return cfg.initial_step[0];
    return cfg.initial_step[static_cast<std::size_t>(i)];
}

struct Attempt {
    std::vector<double> best_x;
    double best_f = kInf;  // minimized value
    long evals = 0;
    bool converged = false;
};

// One simplex run minimizing g; budget counts g evaluations.
Attempt simplex_attempt(const std::function<double(const std::vector<double>&)>& g,
                        const std::vector<double>& start, const OptConfig& cfg,
                        long budget, RandomStream& perturb,
                        const std::function<void(int, double, double)>& observer,
                        double scale) {
    const int dim = static_cast<int>(start.size());
    Attempt out;
    out.best_x = start;

    long evals = 0;
    double seen_min = kInf, seen_max = -kInf;
    auto eval = [&](const std::vector<double>& x) {
        if (evals >= budget) return kInf;  // budget fence: no call, no effect
        ++evals;
        double val = g(x);
        if (std::isnan(val)) val = kInf;
        if (val < out.best_f) {
            out.best_f = val;
            out.best_x = x;
        }
        if (val < seen_min) seen_min = val;
        if (val < kInf && val > seen_max) seen_max = val;
        return val;
    };

    std::vector<std::vector<double>> v(static_cast<std::size_t>(dim) + 1);
    std::vector<double> fv(static_cast<std::size_t>(dim) + 1);

    // center taken by value: rebuilds pass a vertex of the simplex being rebuilt
    auto build = [&](const std::vector<double> center, double scale, bool flip_signs) {
        v[0] = center;
        fv[0] = eval(v[0]);
        for (int i = 0; i < dim; ++i) {
            v[static_cast<std::size_t>(i) + 1] = center;
            double s = scale * step_for(cfg, i);
            if (flip_signs && (perturb.next_u64() & 1u)) s = -s;
            v[static_cast<std::size_t>(i) + 1][static_cast<std::size_t>(i)] += s;
            fv[static_cast<std::size_t>(i) + 1] = eval(v[static_cast<std::size_t>(i) + 1]);
        }
    };
    build(start, scale, false);
    if (!std::isfinite(fv[0]))
        throw NonFiniteObjective("nelder_mead_maximize: objective not finite at start");

    std::vector<std::size_t> order(static_cast<std::size_t>(dim) + 1);
    std::vector<double> centroid(static_cast<std::size_t>(dim));
    std::vector<double> xr(static_cast<std::size_t>(dim)), xe(static_cast<std::size_t>(dim)),
        xc(static_cast<std::size_t>(dim));

    int iter = 0;
    while (evals < budget) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        const std::size_t ib = order.front(), iw = order.back();
        const std::size_t is = order[order.size() - 2];  // second worst

        if (observer) observer(iter, -fv[ib], -fv[iw]);
        ++iter;

        double diameter = 0.0;
        for (std::size_t j = 0; j <= static_cast<std::size_t>(dim); ++j)
            for (int i = 0; i < dim; ++i)
                diameter = std::max(diameter, std::abs(v[j][static_cast<std::size_t>(i)] -
                                                       v[ib][static_cast<std::size_t>(i)]));
        const double spread = fv[iw] - fv[ib];
        if (diameter < cfg.x_tol && spread < cfg.f_tol) {
            if (seen_max - seen_min > cfg.f_tol) {
                out.converged = true;
                break;
            }
            // collapsed without ever seeing structure: plateau stall.
            // Re-expand around the incumbent and keep burning budget.
            build(v[ib], scale, true);
            continue;
        }

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t j = 0; j <= static_cast<std::size_t>(dim); ++j) {
            if (j == iw) continue;
            for (int i = 0; i < dim; ++i)
                centroid[static_cast<std::size_t>(i)] += v[j][static_cast<std::size_t>(i)];
        }
        for (double& c : centroid) c /= dim;

        for (int i = 0; i < dim; ++i)
            xr[static_cast<std::size_t>(i)] =
                centroid[static_cast<std::size_t>(i)] +
                (centroid[static_cast<std::size_t>(i)] - v[iw][static_cast<std::size_t>(i)]);
        const double fr = eval(xr);

        if (fr < fv[ib]) {
            for (int i = 0; i < dim; ++i)
                xe[static_cast<std::size_t>(i)] =
                    centroid[static_cast<std::size_t>(i)] +
                    2.0 * (xr[static_cast<std::size_t>(i)] - centroid[static_cast<std::size_t>(i)]);
            const double fe = eval(xe);
            if (fe < fr) {
                v[iw] = xe;
                fv[iw] = fe;
            } else {
                v[iw] = xr;
                fv[iw] = fr;
            }
        } else if (fr < fv[is]) {
            v[iw] = xr;
            fv[iw] = fr;
        } else {
            const bool outside = fr < fv[iw];
            const std::vector<double>& toward = outside ? xr : v[iw];
            for (int i = 0; i < dim; ++i)
                xc[static_cast<std::size_t>(i)] =
                    centroid[static_cast<std::size_t>(i)] +
                    0.5 * (toward[static_cast<std::size_t>(i)] -
                           centroid[static_cast<std::size_t>(i)]);
            const double fc = eval(xc);
            if (fc < (outside ? fr : fv[iw])) {
                v[iw] = xc;
                fv[iw] = fc;
            } else {
                for (std::size_t j = 0; j <= static_cast<std::size_t>(dim); ++j) {
                    if (j == ib) continue;
                    for (int i = 0; i < dim; ++i)
                        v[j][static_cast<std::size_t>(i)] =
                            v[ib][static_cast<std::size_t>(i)] +
                            0.5 * (v[j][static_cast<std::size_t>(i)] -
                                   v[ib][static_cast<std::size_t>(i)]);
                    fv[j] = eval(v[j]);
                    if (evals >= budget) break;
                }
            }
        }
    }

    out.evals = evals;
    return out;
}

}  // namespace

OptResult nelder_mead_maximize(const std::function<double(const std::vector<double>&)>& f,
                               const std::vector<double>& x0, const OptConfig& cfg) {
    const int dim = static_cast<int>(x0.size());
    if (dim < 1) throw std::invalid_argument("nelder_mead_maximize: empty start point");
    cfg.validate(dim);

    auto g = [&f](const std::vector<double>& x) { return -f(x); };
    RandomStream perturb(SplitRng(cfg.seed).stream(0));

    OptResult result;
    result.argmax = x0;
    result.value = -kInf;
    bool have_incumbent = false;

    for (int attempt = 0; attempt <= cfg.restarts; ++attempt) {
        const std::vector<double>& start = have_incumbent ? result.argmax : x0;
        // restarts re-seed at the incumbent with a progressively finer simplex
        const double scale = std::pow(0.35, attempt);
        Attempt a =
            simplex_attempt(g, start, cfg, cfg.max_evals, perturb, cfg.observer, scale);
        result.evals += a.evals;
        result.converged = a.converged;
        if (!have_incumbent || -a.best_f > result.value) {
            result.argmax = a.best_x;
            result.value = -a.best_f;
            have_incumbent = true;
        }
    }
    return result;
}

double maximize_scalar(const std::function<double(double)>& f, double lo, double hi,
                       double tol) {
    if (!(lo < hi)) throw std::invalid_argument("maximize_scalar: need lo < hi");
    if (!(tol > 0.0)) throw std::invalid_argument("maximize_scalar: tol must be positive");
    const double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 >= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace qmle
