#include <cmath>

#include "doctest.h"
#include "qmle/optimize.hpp"

using namespace qmle;

TEST_SUITE_BEGIN("optimize");

TEST_CASE("quadratic bowl in four dimensions") {
    auto f = [](const std::vector<double>& x) {
        double s = 0.0;
        for (double v : x) s -= (v - 1.0) * (v - 1.0);
        return s;
    };
    OptConfig cfg;
    cfg.max_evals = 4000;
    cfg.x_tol = 1e-7;
    cfg.f_tol = 1e-12;
    const OptResult r = nelder_mead_maximize(f, std::vector<double>(4, 0.0), cfg);
    CHECK(r.converged);
    CHECK(r.evals <= 4000);
    for (double v : r.argmax) CHECK(v == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("negative Rosenbrock from the classic start") {
    auto f = [](const std::vector<double>& x) {
        const double a = 1.0 - x[0];
        const double b = x[1] - x[0] * x[0];
        return -(a * a + 100.0 * b * b);
    };
    OptConfig cfg;
    cfg.max_evals = 10000;
    cfg.x_tol = 1e-9;
    cfg.f_tol = 1e-14;
    cfg.restarts = 2;
    const OptResult r = nelder_mead_maximize(f, {-1.2, 1.0}, cfg);
    CHECK(r.argmax[0] == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(r.argmax[1] == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(r.evals <= 30000);
}

TEST_CASE("flat plateau stalls without claiming convergence") {
    auto f = [](const std::vector<double>&) { return 3.5; };
    OptConfig cfg;
    cfg.max_evals = 500;
    cfg.x_tol = 1e-6;
    cfg.f_tol = 1e-9;
    const OptResult r = nelder_mead_maximize(f, {0.0, 0.0, 0.0}, cfg);
    CHECK_FALSE(r.converged);
    CHECK(r.evals == 500);
}

TEST_CASE("worst vertex value is monotone on a convex bowl") {
    auto f = [](const std::vector<double>& x) {
        return -(x[0] * x[0] + 2.0 * x[1] * x[1] + 0.5 * x[0] * x[1]);
    };
    OptConfig cfg;
    cfg.max_evals = 2000;
    cfg.x_tol = 1e-8;
    cfg.f_tol = 1e-12;
    double last_worst = -1e300;
    bool monotone = true;
    bool first = true;
    cfg.observer = [&](int, double, double worst) {
        if (!first && worst < last_worst - 1e-12) monotone = false;
        last_worst = worst;
        first = false;
    };
    nelder_mead_maximize(f, {2.0, -1.5}, cfg);
    CHECK(monotone);
}

TEST_CASE("positive rescaling keeps the argmax") {
    auto base = [](const std::vector<double>& x) {
        return -((x[0] - 0.7) * (x[0] - 0.7) + (x[1] + 0.2) * (x[1] + 0.2));
    };
    auto scaled = [&](const std::vector<double>& x) { return 1000.0 * base(x); };
    OptConfig cfg;
    cfg.max_evals = 4000;
    cfg.x_tol = 1e-8;
    cfg.f_tol = 1e-13;
    const OptResult r1 = nelder_mead_maximize(base, {0.0, 0.0}, cfg);
    const OptResult r2 = nelder_mead_maximize(scaled, {0.0, 0.0}, cfg);
    for (int i = 0; i < 2; ++i)
        CHECK(std::abs(r1.argmax[static_cast<std::size_t>(i)] -
                       r2.argmax[static_cast<std::size_t>(i)]) < 1e-6);
}

TEST_CASE("identical inputs give identical outputs") {
    auto f = [](const std::vector<double>& x) {
        return -std::abs(x[0] - 0.3) - 0.5 * std::cos(x[1]) * std::cos(x[1]);
    };
    OptConfig cfg;
    cfg.max_evals = 1500;
    cfg.restarts = 1;
    const OptResult a = nelder_mead_maximize(f, {1.0, 1.0}, cfg);
    const OptResult b = nelder_mead_maximize(f, {1.0, 1.0}, cfg);
    CHECK(a.value == b.value);
    CHECK(a.evals == b.evals);
    CHECK(a.argmax == b.argmax);
}

TEST_CASE("non-finite start is rejected") {
    auto f = [](const std::vector<double>&) {
        return std::numeric_limits<double>::quiet_NaN();
    };
    OptConfig cfg;
    cfg.max_evals = 100;
    CHECK_THROWS_AS(nelder_mead_maximize(f, {0.0}, cfg), NonFiniteObjective);
}

TEST_CASE("golden-section scalar search") {
    auto f = [](double x) { return -(x - 0.3) * (x - 0.3); };
    CHECK(maximize_scalar(f, 0.0, 1.0, 1e-9) == doctest::Approx(0.3).epsilon(1e-7));

    auto rising = [](double x) { return x; };
    CHECK(maximize_scalar(rising, 0.0, 1.0, 1e-6) == doctest::Approx(1.0).epsilon(1e-5));

    // two-outcome click log-likelihood against its closed-form maximizer
    const double alpha_sq = 1.0;
    const double n_total = 10000.0, n_clicks = 5507.0;
    auto loglik = [&](double eta) {
        const double p0 = std::exp(-eta * alpha_sq);
        return (n_total - n_clicks) * std::log(p0) + n_clicks * std::log1p(-p0);
    };
    const double closed = -std::log1p(-n_clicks / n_total) / alpha_sq;
    // a value-only search cannot localize a quadratic maximum beyond
    // ~sqrt(2 eps / F) ~ 2e-8; assert the achievable resolution
    CHECK(maximize_scalar(loglik, 1e-6, 1.0, 1e-12) ==
          doctest::Approx(closed).epsilon(5e-8));
}

TEST_SUITE_END();
