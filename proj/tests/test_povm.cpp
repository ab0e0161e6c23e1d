#include "doctest.h"
#include "oracles.hpp"
#include "qmle/povm.hpp"

using namespace qmle;

TEST_SUITE_BEGIN("povm");

TEST_CASE("oscillator wavefunctions: normalization, variance, parity") {
    auto density0 = [](double x) {
        const double v = fock_position_amplitude(0, x);
        return v * v;
    };
    CHECK(oracle::simpson(density0, -8.0, 8.0, 4001) == doctest::Approx(1.0).epsilon(1e-10));
    auto x2density0 = [&](double x) { return x * x * density0(x); };
    CHECK(oracle::simpson(x2density0, -8.0, 8.0, 4001) == doctest::Approx(0.25).epsilon(1e-10));

    for (int n : {0, 1, 2, 5, 11}) {
        for (double x : {0.17, 1.3, 2.9}) {
            const double plus = fock_position_amplitude(n, x);
            const double minus = fock_position_amplitude(n, -x);
            CHECK(minus == (n % 2 == 0 ? plus : -plus));  // exact sign symmetry
        }
    }
}

TEST_CASE("oscillator wavefunctions: orthonormality up to n = 20") {
    const int dim = 21;
    std::vector<double> buf(dim);
    const int points = 8001;
    const double lo = -9.0, hi = 9.0, h = (hi - lo) / (points - 1);
    std::vector<double> gram(static_cast<std::size_t>(dim) * dim, 0.0);
    for (int i = 0; i < points; ++i) {
        const double w = (i == 0 || i == points - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        fock_position_amplitudes(dim, lo + i * h, buf.data());
        for (int a = 0; a < dim; ++a)
            for (int b = a; b < dim; ++b)
                gram[static_cast<std::size_t>(a) * dim + b] += w * buf[a] * buf[b];
    }
    for (int a = 0; a < dim; ++a)
        for (int b = a; b < dim; ++b) {
            const double val = gram[static_cast<std::size_t>(a) * dim + b] * h / 3.0;
            CHECK(std::abs(val - (a == b ? 1.0 : 0.0)) < 1e-8);
        }
}

TEST_CASE("binomial loss coefficients") {
    CHECK(binomial_loss_coefficient(3, 0, 1.0) == doctest::Approx(1.0));
    CHECK(binomial_loss_coefficient(3, 2, 1.0) == doctest::Approx(0.0));
    CHECK(binomial_loss_coefficient(4, 0, 0.7) == doctest::Approx(std::pow(0.7, 2.0)));
    CHECK(binomial_loss_coefficient(1, 1, 0.8) ==
          doctest::Approx(std::sqrt(2.0 * 0.8 * 0.2)).epsilon(1e-12));

    // trace preservation: sum_n B_{m,n}^2 = 1 at fixed m (binomial theorem)
    for (int m : {0, 3, 7}) {
        double s = 0.0;
        for (int n = 0; n <= m; ++n) {
            const double b = binomial_loss_coefficient(n, m - n, 0.65);
            s += b * b;
        }
        CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("homodyne expectation: vacuum factor is the bare density at any eta") {
    CMat t = CMat::Zero(4, 4);
    t(0, 0) = 1.0;
    const TFactor vac(std::move(t));
    for (double eta : {1.0, 0.8, 0.4}) {
        for (double x : {0.0, 0.4, -1.1}) {
            const double expect = std::norm(fock_position_amplitude(0, x));
            CHECK(homodyne_expectation(vac, HomodyneRecord{0.3, x}, eta) ==
                  doctest::Approx(expect).epsilon(1e-12));
        }
    }
}

TEST_CASE("homodyne expectation: completeness integral equals Tr(T^dag T)") {
    RandomStream rs(3);
    for (double eta : {1.0, 0.8}) {
        const TFactor t = oracle::random_t_factor(5, rs);
        for (double phase : {0.0, 1.1}) {
            auto integrand = [&](double x) {
                return homodyne_expectation(t, HomodyneRecord{phase, x}, eta);
            };
            const double total = oracle::simpson(integrand, -9.0, 9.0, 4001);
            CHECK(total == doctest::Approx(t.gram_trace()).epsilon(1e-6));
        }
    }
}

TEST_CASE("homodyne expectation agrees with the quadrature-matrix oracle") {
    RandomStream rs(5);
    for (double eta : {1.0, 0.85, 0.5}) {
        const TFactor t = oracle::random_t_factor(5, rs);
        const DensityMatrix rho = t_factor_to_density(t);
        const double scale = t.gram_trace();
        for (double x : {-1.7, 0.2, 1.4}) {
            const HomodyneRecord rec{0.77, x};
            const CMat h = oracle::homodyne_povm_matrix(5, x, rec.phase, eta);
            const double direct = (rho.matrix() * h).trace().real() * scale;
            CHECK(homodyne_expectation(t, rec, eta) == doctest::Approx(direct).epsilon(1e-7));
            CHECK(homodyne_expectation_density(rho, rec, eta) * scale ==
                  doctest::Approx(direct).epsilon(1e-7));
        }
    }
}

TEST_CASE("homodyne expectation matches the Gaussian closed form for a coherent state") {
    const cxd alpha(0.3, 0.4);
    const TFactor t = t_factor_from_state(coherent_state(alpha, 24));
    const GaussianParams p{1.0, 1.0, alpha.real(), alpha.imag()};
    for (double eta : {1.0, 0.8}) {
        for (double phase : {0.0, 0.9, 4.4}) {
            for (double x = -5.0; x <= 5.0; x += 0.5) {
                const double fock = homodyne_expectation(t, HomodyneRecord{phase, x}, eta);
                const double gauss = gaussian_homodyne_density(p, phase, eta, x);
                CHECK(std::abs(fock - gauss) < 1e-6);
            }
        }
    }
}

TEST_CASE("homodyne expectation is non-negative on random inputs") {
    RandomStream rs(17);
    for (int trial = 0; trial < 200; ++trial) {
        const TFactor t = oracle::random_t_factor(4, rs, 0.8);
        const HomodyneRecord rec{rs.uniform(0.0, 2.0 * kPi), rs.uniform(-6.0, 6.0)};
        const double eta = rs.uniform(0.05, 1.0);
        CHECK(homodyne_expectation(t, rec, eta) >= 0.0);
    }
}

TEST_CASE("phase periodicity") {
    RandomStream rs(23);
    const TFactor t = oracle::random_t_factor(5, rs);
    // 2*pi as a double wraps to exactly zero phase
    const HomodyneRecord wrapped = HomodyneRecord::wrapped(2.0 * kPi, 0.7);
    CHECK(wrapped.phase == 0.0);
    CHECK(homodyne_expectation(t, wrapped, 0.9) ==
          homodyne_expectation(t, HomodyneRecord{0.0, 0.7}, 0.9));
    for (double phase : {0.3, 2.0, 5.9}) {
        const auto a = HomodyneRecord::wrapped(phase, -0.4);
        const auto b = HomodyneRecord::wrapped(phase + 2.0 * kPi, -0.4);
        CHECK(homodyne_expectation(t, a, 0.8) ==
              doctest::Approx(homodyne_expectation(t, b, 0.8)).epsilon(1e-13));
    }
}

TEST_CASE("Gaussian homodyne density") {
    // vacuum: sqrt(2/pi) e^{-2 x^2}
    const GaussianParams vac{1.0, 1.0, 0.0, 0.0};
    for (double x : {0.0, 0.3, -1.2}) {
        CHECK(gaussian_homodyne_density(vac, 0.4, 1.0, x) ==
              doctest::Approx(std::sqrt(2.0 / kPi) * std::exp(-2.0 * x * x)).epsilon(1e-12));
    }

    const GaussianParams p{0.9, 1.7, 0.8, -0.5};
    for (double phase : {0.0, 1.2, 3.9}) {
        double mean, var;
        gaussian_homodyne_moments(p, phase, 1.0, mean, var);
        CHECK(mean == doctest::Approx(p.a * std::cos(phase) + p.b * std::sin(phase))
                          .epsilon(1e-12));
        auto f = [&](double x) { return gaussian_homodyne_density(p, phase, 1.0, x); };
        CHECK(oracle::simpson(f, mean - 14.0, mean + 14.0, 4001) ==
              doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("squeezed reference density") {
    double mean, var;
    squeezed_homodyne_moments(1.3, 0.0, 1.0, mean, var);
    CHECK(mean == doctest::Approx(1.3));
    CHECK(var == doctest::Approx(0.25));

    for (double eta : {0.2, 0.5, 0.9}) {
        squeezed_homodyne_moments(0.7, 0.5, eta, mean, var);
        CHECK(mean == doctest::Approx(eta * 0.7).epsilon(1e-15));
    }

    squeezed_homodyne_moments(0.1, 1.0, 0.8, mean, var);
    CHECK(var == doctest::Approx((std::exp(-2.0) + 0.2) / 4.0).epsilon(1e-12));
}

TEST_CASE("spin projector expectation") {
    const TFactor singlet_t = t_factor_from_density(singlet_density());
    const std::array<double, 3> dirs[] = {
        {0.0, 0.0, 1.0}, {1.0, 0.0, 0.0}, {0.6, 0.0, 0.8}, {-0.36, 0.48, 0.8}};
    for (const auto& w : dirs) {
        CHECK(spin_projector_expectation(singlet_t, SpinOutcome{w, w}) < 1e-12);
        const std::array<double, 3> neg{-w[0], -w[1], -w[2]};
        CHECK(spin_projector_expectation(singlet_t, SpinOutcome{w, neg}) ==
              doctest::Approx(0.5).epsilon(1e-12));
    }

    const TFactor mixed_t(CMat::Identity(4, 4) * 0.5);
    RandomStream rs(29);
    for (int trial = 0; trial < 10; ++trial) {
        const double z = rs.uniform(-1.0, 1.0), az = rs.uniform(0.0, 2.0 * kPi);
        const double s = std::sqrt(1.0 - z * z);
        const std::array<double, 3> wa{s * std::cos(az), s * std::sin(az), z};
        const double z2 = rs.uniform(-1.0, 1.0), az2 = rs.uniform(0.0, 2.0 * kPi);
        const double s2 = std::sqrt(1.0 - z2 * z2);
        const std::array<double, 3> wb{s2 * std::cos(az2), s2 * std::sin(az2), z2};
        CHECK(spin_projector_expectation(mixed_t, SpinOutcome{wa, wb}) ==
              doctest::Approx(0.25).epsilon(1e-12));
    }
}

TEST_CASE("spin outcome POVM completeness: the four signed outcomes sum to one") {
    RandomStream rs(31);
    const DensityMatrix rho = t_factor_to_density(oracle::random_t_factor(4, rs));
    for (int trial = 0; trial < 10; ++trial) {
        const double z = rs.uniform(-1.0, 1.0), az = rs.uniform(0.0, 2.0 * kPi);
        const double sz = std::sqrt(1.0 - z * z);
        const std::array<double, 3> wa{sz * std::cos(az), sz * std::sin(az), z};
        const double z2 = rs.uniform(-1.0, 1.0), az2 = rs.uniform(0.0, 2.0 * kPi);
        const double sz2 = std::sqrt(1.0 - z2 * z2);
        const std::array<double, 3> wb{sz2 * std::cos(az2), sz2 * std::sin(az2), z2};
        const std::array<double, 3> na{-wa[0], -wa[1], -wa[2]};
        const std::array<double, 3> nb{-wb[0], -wb[1], -wb[2]};
        const TFactor t = t_factor_from_density(rho);
        const double total = spin_projector_expectation(t, {wa, wb}) +
                             spin_projector_expectation(t, {wa, nb}) +
                             spin_projector_expectation(t, {na, wb}) +
                             spin_projector_expectation(t, {na, nb});
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("no-click probability") {
    const DensityMatrix one = DensityMatrix::from_pure(
        StateVector([] { CVec v = CVec::Zero(4); v(1) = 1.0; return v; }()));
    CHECK(no_click_probability(one, 0.0) == doctest::Approx(1.0));
    CHECK(no_click_probability(one, 0.35) == doctest::Approx(0.65).epsilon(1e-12));

    const DensityMatrix coh = DensityMatrix::from_pure(coherent_state(1.0, 24));
    for (double eta : {0.2, 0.8, 1.0}) {
        CHECK(no_click_probability(coh, eta) ==
              doctest::Approx(std::exp(-eta)).epsilon(1e-9));
    }
}

TEST_SUITE_END();
