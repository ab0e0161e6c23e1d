#include "qmle/mle_params.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "qmle/kernels.hpp"

namespace qmle {

namespace {

constexpr double kTwoPi = 2.0 * kPi;

void check_eta_open(double eta) {
    if (!(eta > 0.0) || eta > 1.0)
        throw std::invalid_argument("eta must lie in (0, 1]");
}

}  // namespace

// --- Gaussian-state estimation ---------------------------------------------------

double gaussian_log_likelihood(const GaussianParams& p,
                               const std::vector<HomodyneRecord>& data, double eta) {
    p.validate();
    check_eta_open(eta);
    double total = 0.0;
    for (const HomodyneRecord& rec : data)
        total += std::log(gaussian_homodyne_density(p, rec.phase, eta, rec.x));
    return total;
}

GaussianLikelihood::GaussianLikelihood(const std::vector<HomodyneRecord>& data, double eta,
                                       int threads)
    : eta_(eta), threads_(threads) {
    check_eta_open(eta);
    if (data.empty()) throw std::invalid_argument("GaussianLikelihood: no records");
    const std::size_t n = data.size();
    x_.resize(n);
    cos_.resize(n);
    sin_.resize(n);
    v_.resize(n);
    d2_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        x_[i] = data[i].x;
        cos_[i] = std::cos(data[i].phase);
        sin_[i] = std::sin(data[i].phase);
    }
    (void)threads_;
}

double GaussianLikelihood::operator()(const GaussianParams& p) const {
    p.validate();
    const std::size_t n = x_.size();
    kernels::active().gaussian_terms_batch(p.delta, p.kappa, p.a, p.b, eta_, x_.data(),
                                           cos_.data(), sin_.data(), n, v_.data(),
                                           d2_.data());
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        total -= 0.5 * std::log(kTwoPi * v_[i]) + 0.5 * d2_[i] / v_[i];
    return total;
}

OptConfig default_gaussian_config() {
    OptConfig cfg;
    cfg.max_evals = 4000;
    cfg.x_tol = 1e-7;
    cfg.f_tol = 1e-7;
    cfg.initial_step = {0.2};
    cfg.restarts = 1;
    return cfg;
}

namespace {

int count_distinct_phases(const std::vector<HomodyneRecord>& data, int needed) {
    std::set<double> seen;
    for (const HomodyneRecord& rec : data) {
        seen.insert(rec.phase);
        if (static_cast<int>(seen.size()) >= needed) break;
    }
    return static_cast<int>(seen.size());
}

// Moment-based starting point: least squares for the mean structure, then a
// (1, cos 2phi) regression of the squared residuals for the variance shape.
GaussianParams moment_start(const std::vector<HomodyneRecord>& data, double eta) {
    const double n = static_cast<double>(data.size());
    double scc = 0, sss = 0, scs = 0, scx = 0, ssx = 0;
    for (const HomodyneRecord& rec : data) {
        const double c = std::cos(rec.phase), s = std::sin(rec.phase);
        scc += c * c;
        sss += s * s;
        scs += c * s;
        scx += c * rec.x;
        ssx += s * rec.x;
    }
    const double det = scc * sss - scs * scs;
    double ma = 0.0, mb = 0.0;  // mean coefficients in the measured scale
    if (std::abs(det) > 1e-9 * n * n) {
        ma = (sss * scx - scs * ssx) / det;
        mb = (scc * ssx - scs * scx) / det;
    }

    double s1 = 0, sc2 = 0, sc22 = 0, sr = 0, src2 = 0;
    for (const HomodyneRecord& rec : data) {
        const double c = std::cos(rec.phase), s = std::sin(rec.phase);
        const double resid = rec.x - ma * c - mb * s;
        const double r2 = resid * resid;
        const double c2 = std::cos(2.0 * rec.phase);
        s1 += 1.0;
        sc2 += c2;
        sc22 += c2 * c2;
        sr += r2;
        src2 += r2 * c2;
    }
    const double vdet = s1 * sc22 - sc2 * sc2;
    double va = sr / s1, vb = 0.0;  // Var(phi) ~ va + vb cos 2phi
    if (std::abs(vdet) > 1e-9 * n * n) {
        va = (sc22 * sr - sc2 * src2) / vdet;
        vb = (s1 * src2 - sc2 * sr) / vdet;
    }

    GaussianParams p;
    const double se = std::sqrt(eta);
    p.a = ma / se;
    p.b = mb / se;
    const double pterm = (va - 0.25 * (1.0 - eta)) / eta;  // q (kappa^2 + 1)/2
    const double qterm = vb / eta;                         // q (kappa^2 - 1)/2
    double kappa2 = 1.0;
    if (pterm > std::abs(qterm) && pterm > 0.0)
        kappa2 = (pterm + qterm) / (pterm - qterm);
    p.kappa = std::clamp(std::sqrt(std::max(kappa2, 1e-6)), 1e-3, 1e3);
    const double q = (pterm > 0.0) ? 2.0 * pterm / (p.kappa * p.kappa + 1.0) : 0.25;
    p.delta = std::clamp(0.5 / std::sqrt(std::max(q * p.kappa, 1e-8)), 0.05, 1.5);
    return p;
}

}  // namespace

GaussianEstimate estimate_gaussian(const std::vector<HomodyneRecord>& data, double eta,
                                   const OptConfig& cfg) {
    if (data.empty()) throw std::invalid_argument("estimate_gaussian: no records");
    if (count_distinct_phases(data, 3) < 3)
        throw DegeneratePhases("estimate_gaussian: need >= 3 distinct phases");

    const GaussianLikelihood lik(data, eta, cfg.threads);
    const GaussianParams p0 = moment_start(data, eta);
    const std::vector<double> start{std::log(p0.delta), std::log(p0.kappa), p0.a, p0.b};

    auto unpack = [](const std::vector<double>& v) {
        return GaussianParams{std::exp(v[0]), std::exp(v[1]), v[2], v[3]};
    };
    auto objective = [&](const std::vector<double>& v) {
        if (std::abs(v[0]) > 12.0 || std::abs(v[1]) > 12.0)
            return -std::numeric_limits<double>::infinity();
        return lik(unpack(v));
    };
    const OptResult r = nelder_mead_maximize(objective, start, cfg);

    GaussianEstimate est;
    est.delta_unclamped = std::exp(r.argmax[0]);
    est.params = unpack(r.argmax);
    est.params.delta = std::min(est.params.delta, 1.0);
    est.photons = params_to_photon_numbers(est.params);
    est.log_likelihood = r.value;
    est.evals = r.evals;
    est.converged = r.converged;
    return est;
}

GaussianEstimate estimate_gaussian(const std::vector<HomodyneRecord>& data, double eta) {
    return estimate_gaussian(data, eta, default_gaussian_config());
}

// --- linear-detector efficiency -----------------------------------------------------

EfficiencyEstimate estimate_eta_linear(const std::vector<HomodyneRecord>& data, double x0,
                                       double r) {
    if (data.empty()) throw std::invalid_argument("estimate_eta_linear: no records");
    if (!(x0 > 0.0))
        throw ReferenceUnidentifiable("estimate_eta_linear: reference needs x0 > 0");
    if (r < 0.0) throw std::invalid_argument("estimate_eta_linear: r must be >= 0");
    for (const HomodyneRecord& rec : data) {
        const double p = std::min(rec.phase, std::abs(rec.phase - kTwoPi));
        if (p > 1e-9)
            throw std::invalid_argument("estimate_eta_linear: records must be at phase 0");
    }

    const double n = static_cast<double>(data.size());
    double sx = 0.0, sxx = 0.0;
    for (const HomodyneRecord& rec : data) {
        sx += rec.x;
        sxx += rec.x * rec.x;
    }
    const double xbar = sx / n;
    const double x2bar = sxx / n;
    const double e2r = std::exp(-2.0 * r);

    // L(eta)/N via sufficient statistics of the Gaussian law
    auto avg_log_lik = [&](double eta) {
        const double var = 0.25 * (e2r + 1.0 - eta);
        const double dev2 = x2bar - 2.0 * eta * x0 * xbar + eta * eta * x0 * x0;
        return -0.5 * std::log(kTwoPi * var) - 0.5 * dev2 / var;
    };

    const double lo = 1e-6, hi = 1.0;
    int best = 0;
    double best_val = -std::numeric_limits<double>::infinity();
    constexpr int kGrid = 64;
    for (int i = 0; i <= kGrid; ++i) {
        const double eta = lo + (hi - lo) * i / kGrid;
        const double val = avg_log_lik(eta);
        if (val > best_val) {
            best_val = val;
            best = i;
        }
    }
    const double blo = lo + (hi - lo) * std::max(0, best - 1) / kGrid;
    const double bhi = lo + (hi - lo) * std::min(kGrid, best + 1) / kGrid;
    const double eta_ml = maximize_scalar(avg_log_lik, blo, bhi, 1e-10);

    EfficiencyEstimate est;
    est.eta_ml = eta_ml;
    est.n_used = static_cast<long>(data.size());

    double mean, var;
    squeezed_homodyne_moments(x0, r, eta_ml, mean, var);
    const double sd = std::sqrt(var);
    est.fisher = numeric_fisher(
        [&](double eta, double x) { return squeezed_homodyne_density(x0, r, eta, x); },
        eta_ml, mean - 12.0 * sd, mean + 12.0 * sd, 4001);
    est.sigma = cramer_rao_sigma(est.fisher, est.n_used);
    est.sigma_defined = true;

    // closed-form candidate retained for comparison only
    const double inner =
        1.0 + 64.0 * x0 * x0 *
                  (x2bar + (1.0 + e2r) * (x0 - 2.0 * xbar + x0 * e2r) * x0);
    if (inner >= 0.0)
        est.eta_closed_form = 1.0 + e2r + (1.0 - std::sqrt(inner)) / (x0 * x0);
    return est;
}

double naive_eta(const std::vector<HomodyneRecord>& data, double x0, bool* clamped) {
    if (data.empty()) throw std::invalid_argument("naive_eta: no records");
    if (x0 == 0.0) throw ReferenceUnidentifiable("naive_eta: x0 must be nonzero");
    double sx = 0.0;
    for (const HomodyneRecord& rec : data) sx += rec.x;
    const double raw = sx / static_cast<double>(data.size()) / x0;
    const double out = std::clamp(raw, 0.0, 1.0);
    if (clamped) *clamped = out != raw;
    return out;
}

// --- avalanche-detector efficiency ----------------------------------------------------

OnOffReference OnOffReference::coherent(double alpha_sq) {
    if (!(alpha_sq > 0.0))
        throw ReferenceUnidentifiable("OnOffReference: coherent reference needs |alpha|^2 > 0");
    return OnOffReference(Kind::Coherent, alpha_sq);
}

OnOffReference OnOffReference::single_photon() {
    return OnOffReference(Kind::SinglePhoton, 0.0);
}

OnOffReference OnOffReference::density(DensityMatrix rho) {
    OnOffReference ref(Kind::Density, 0.0);
    ref.rho_ = std::move(rho);
    return ref;
}

double OnOffReference::no_click(double eta) const {
    switch (kind_) {
        case Kind::Coherent: return std::exp(-eta * alpha_sq_);
        case Kind::SinglePhoton: return 1.0 - eta;
        case Kind::Density: return no_click_probability(*rho_, eta);
    }
    return 1.0;
}

EfficiencyEstimate estimate_eta_avalanche(const ClickSummary& s, const OnOffReference& ref) {
    s.validate();
    EfficiencyEstimate est;
    est.n_used = s.n_total;
    const double q = static_cast<double>(s.n_clicks) / static_cast<double>(s.n_total);

    if (s.n_clicks == 0) {
        est.eta_ml = 0.0;
        est.no_clicks = true;
        return est;
    }

    bool saturated = false;
    double eta = 0.0;
    switch (ref.kind()) {
        case OnOffReference::Kind::Coherent: {
            if (s.n_clicks == s.n_total) {
                saturated = true;
                eta = 1.0;
            } else {
                eta = -std::log1p(-q) / ref.alpha_sq();
                if (eta > 1.0) {
                    eta = 1.0;
                    est.clamped = true;
                }
            }
            break;
        }
        case OnOffReference::Kind::SinglePhoton: {
            eta = q;
            saturated = s.n_clicks == s.n_total;
            break;
        }
        case OnOffReference::Kind::Density: {
            const double target = 1.0 - q;  // solve P0(eta) = 1 - q, P0 decreasing
            if (ref.no_click(1.0) >= target) {
                eta = 1.0;
                saturated = ref.no_click(1.0) > target;
            } else {
                double lo = 0.0, hi = 1.0;
                for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    (ref.no_click(mid) >= target ? lo : hi) = mid;
                }
                eta = 0.5 * (lo + hi);
            }
            break;
        }
    }
    est.eta_ml = eta;
    est.saturated = saturated;

    if (!saturated && eta > 0.0 && eta < 1.0) {
        if (ref.kind() == OnOffReference::Kind::Coherent) {
            const OnOffFisherDetails f = fisher_on_off_details(eta, ref.alpha_sq());
            est.fisher = f.fisher;
            est.fisher_eta_sq_variant = f.eta_sq_variant;
            est.fisher_weak_field = f.weak_field_limit;
        } else {
            // numeric two-outcome Fisher from central differences of P0
            const double step = 1e-5 * std::max(eta, 1e-3);
            const double p0 = ref.no_click(eta);
            const double dp0 =
                (ref.no_click(std::min(eta + step, 1.0)) - ref.no_click(std::max(eta - step, 0.0))) /
                (std::min(eta + step, 1.0) - std::max(eta - step, 0.0));
            est.fisher = dp0 * dp0 / (p0 * (1.0 - p0));
        }
        if (est.fisher > 0.0) {
            est.sigma = cramer_rao_sigma(est.fisher, est.n_used);
            est.sigma_defined = true;
        }
    }
    return est;
}

double fisher_on_off(double eta, double alpha_sq) {
    if (!(eta > 0.0) || !(eta < 1.0))
        throw std::invalid_argument("fisher_on_off: eta must lie in (0, 1)");
    if (!(alpha_sq > 0.0)) throw std::invalid_argument("fisher_on_off: alpha_sq must be > 0");
    return alpha_sq * alpha_sq / std::expm1(eta * alpha_sq);
}

OnOffFisherDetails fisher_on_off_details(double eta, double alpha_sq) {
    OnOffFisherDetails d;
    d.fisher = fisher_on_off(eta, alpha_sq);
    d.weak_field_limit = alpha_sq / eta;
    d.eta_sq_variant = eta * eta / std::expm1(eta * alpha_sq);
    return d;
}

double cramer_rao_sigma(double fisher, long n) {
    if (!(fisher > 0.0)) throw std::invalid_argument("cramer_rao_sigma: F must be > 0");
    if (n < 1) throw std::invalid_argument("cramer_rao_sigma: n must be >= 1");
    return 1.0 / std::sqrt(static_cast<double>(n) * fisher);
}

double numeric_fisher(const std::function<double(double, double)>& density, double eta,
                      double x_lo, double x_hi, int points, double rel_step) {
    if (points < 3) throw std::invalid_argument("numeric_fisher: points must be >= 3");
    if (points % 2 == 0) ++points;  // Simpson needs an odd node count
    const double step = rel_step * std::max(std::abs(eta), 1e-3);
    const double h = (x_hi - x_lo) / (points - 1);
    double total = 0.0;
    for (int i = 0; i < points; ++i) {
        const double x = x_lo + i * h;
        const double p = density(eta, x);
        if (p <= 0.0) continue;
        const double dp = (density(eta + step, x) - density(eta - step, x)) / (2.0 * step);
        const double f = dp * dp / p;
        const double w = (i == 0 || i == points - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        total += w * f;
    }
    return total * h / 3.0;
}

}  // namespace qmle
