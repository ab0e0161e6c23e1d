#include "doctest.h"
#include "oracles.hpp"
#include "qmle/states.hpp"

using namespace qmle;

TEST_SUITE_BEGIN("states");

TEST_CASE("coherent state amplitudes and moments") {
    const StateVector vac = coherent_state(0.0, 4);
    CHECK(vac[0] == cxd(1.0, 0.0));
    for (int n = 1; n < 4; ++n) CHECK(std::abs(vac[n]) == 0.0);

    const StateVector c1 = coherent_state(1.0, 16);
    CHECK(c1[0].real() == doctest::Approx(std::exp(-0.5)).epsilon(1e-10));
    CHECK(c1.mean_photon_number() == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(std::abs(c1.amplitudes().squaredNorm() - 1.0) < 1e-12);

    CHECK_THROWS_AS(coherent_state(3.0, 6), CutoffTooSmall);
}

TEST_CASE("squeezed vacuum structure") {
    const StateVector v = squeezed_vacuum(0.0, 8);
    CHECK(std::abs(v[0]) == doctest::Approx(1.0));

    const double r = std::asinh(std::sqrt(0.5));
    const StateVector sq = squeezed_vacuum(r, 32);
    for (int n = 1; n < 32; n += 2) CHECK(std::abs(sq[n]) == 0.0);
    CHECK(sq.mean_photon_number() == doctest::Approx(0.5).epsilon(1e-4));

    // dim 16 leaks ~3.5e-5 > 1e-6 for this r, so the cutoff gate fires
    CHECK_THROWS_AS(squeezed_vacuum(r, 16), CutoffTooSmall);
}

TEST_CASE("squeezed thermal density special cases") {
    const DensityMatrix vac = squeezed_thermal_density(0.0, 0.0, 0.0, 8);
    CHECK(vac(0, 0).real() == doctest::Approx(1.0).epsilon(1e-12));

    const DensityMatrix disp = squeezed_thermal_density(0.0, 0.0, cxd(1.0, 0.0), 24);
    const DensityMatrix coh = DensityMatrix::from_pure(coherent_state(1.0, 24));
    CHECK(overlap(disp, coh) == doctest::Approx(1.0).epsilon(1e-9));

    const DensityMatrix th = squeezed_thermal_density(0.5, 0.0, 0.0, 24);
    for (int n = 0; n < 6; ++n) {
        const double expect = std::pow(0.5, n) / std::pow(1.5, n + 1);
        CHECK(th(n, n).real() == doctest::Approx(expect).epsilon(1e-6));
    }
}

TEST_CASE("singlet density") {
    const DensityMatrix s = singlet_density();
    CHECK(s(0, 0).real() == doctest::Approx(0.0));
    CHECK(s(1, 1).real() == doctest::Approx(0.5));
    CHECK(s(2, 2).real() == doctest::Approx(0.5));
    CHECK(s(3, 3).real() == doctest::Approx(0.0));
    CHECK(s(1, 2).real() == doctest::Approx(-0.5));
    CHECK(s.purity() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("t factor to density") {
    const DensityMatrix mixed = t_factor_to_density(
        TFactor(CMat::Identity(5, 5) / std::sqrt(5.0)));
    for (int i = 0; i < 5; ++i) CHECK(mixed(i, i).real() == doctest::Approx(0.2));

    // rows (1,0) and (1,1): T^dag T / Tr = [[2,1],[1,1]]/3
    CMat t(2, 2);
    t << 1.0, 0.0, 1.0, 1.0;
    const DensityMatrix rho = t_factor_to_density(TFactor(std::move(t)));
    CHECK(rho(0, 0).real() == doctest::Approx(2.0 / 3.0));
    CHECK(rho(0, 1).real() == doctest::Approx(1.0 / 3.0));
    CHECK(rho(1, 1).real() == doctest::Approx(1.0 / 3.0));

    RandomStream rs(7);
    for (int trial = 0; trial < 20; ++trial) {
        const TFactor rt = oracle::random_t_factor(6, rs);
        const DensityMatrix r = t_factor_to_density(rt);
        CHECK_NOTHROW(r.validate());
    }

    CHECK_THROWS_AS(t_factor_to_density(TFactor(CMat::Zero(3, 3))), ZeroFactor);
}

TEST_CASE("t factor gauge freedom: left unitary leaves the state fixed") {
    RandomStream rs(11);
    for (int trial = 0; trial < 8; ++trial) {
        const TFactor t = oracle::random_t_factor(5, rs);
        const DensityMatrix rho1 = t_factor_to_density(t);
        const CMat u = oracle::random_unitary(5, rs);
        const CMat ut = u * t.matrix();
        // U T is no longer triangular; compare through the Gram matrix
        const DensityMatrix rho2(ut.adjoint() * ut);
        CHECK(overlap(rho1, rho2) > 1.0 - 1e-10);
    }
}

TEST_CASE("t factor from density and from state invert the map") {
    RandomStream rs(13);
    for (int trial = 0; trial < 10; ++trial) {
        const DensityMatrix rho = t_factor_to_density(oracle::random_t_factor(6, rs));
        const TFactor back = t_factor_from_density(rho);
        const DensityMatrix again = t_factor_to_density(back);
        CHECK((rho.matrix() - again.matrix()).cwiseAbs().maxCoeff() < 1e-12);
    }

    const StateVector psi = coherent_state(cxd(0.7, -0.3), 16);
    const DensityMatrix pure = t_factor_to_density(t_factor_from_state(psi));
    CHECK(overlap(pure, DensityMatrix::from_pure(psi)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("overlap metric") {
    const DensityMatrix s = singlet_density();
    CHECK(overlap(s, s) == doctest::Approx(1.0));

    CVec e0 = CVec::Zero(2), e1 = CVec::Zero(2);
    e0(0) = 1.0;
    e1(1) = 1.0;
    const DensityMatrix p0 = DensityMatrix::from_pure(StateVector(e0));
    const DensityMatrix p1 = DensityMatrix::from_pure(StateVector(e1));
    CHECK(overlap(p0, p1) == doctest::Approx(0.0));
    CHECK(overlap(p0, maximally_mixed(2)) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));

    CHECK(overlap(p0, p1) == overlap(p1, p0));
    // strictly below 1 away from equality
    CMat near = p0.matrix();
    near(0, 1) += 0.01;
    near(1, 0) += 0.01;
    near(1, 1) += 0.02;
    CHECK(overlap(p0, DensityMatrix(near)) < 1.0);
    CHECK_THROWS_AS(overlap(p0, s), DimensionMismatch);
}

TEST_CASE("squeezed thermal photon distribution") {
    const auto pure = squeezed_thermal_photon_distribution(0.0, 1.0, 8);
    CHECK(pure[0] == doctest::Approx(1.0).epsilon(1e-12));
    for (int n = 1; n <= 8; ++n) CHECK(std::abs(pure[static_cast<std::size_t>(n)]) < 1e-12);

    const auto th = squeezed_thermal_photon_distribution(0.5, 1.0, 10);
    for (int n = 0; n <= 10; ++n) {
        const double expect = std::pow(0.5, n) / std::pow(1.5, n + 1);
        CHECK(th[static_cast<std::size_t>(n)] == doctest::Approx(expect).epsilon(1e-10));
    }

    double partial = 0.0;
    for (double p : th) {
        CHECK(p >= 0.0);
        partial += p;
    }
    CHECK(partial <= 1.0 + 1e-9);
}

TEST_CASE("photon distribution agrees with the operator construction") {
    struct Case {
        double n_th, kappa;
        int dim;
    };
    // cutoffs sized so the truncation renormalization stays below the 1e-8 target
    const Case cases[] = {{0.0, 2.0, 48}, {0.5, 1.0, 48}, {0.3, 3.5, 80}, {1.0, 0.4, 96}};
    for (const Case& c : cases) {
        const double r = -0.5 * std::log(c.kappa);
        const DensityMatrix rho = squeezed_thermal_density(c.n_th, r, 0.0, c.dim);
        const auto dist = squeezed_thermal_photon_distribution(c.n_th, c.kappa, 12);
        for (int n = 0; n <= 12; ++n)
            CHECK(std::abs(rho(n, n).real() - dist[static_cast<std::size_t>(n)]) < 1e-8);
    }
}

TEST_CASE("photon numbers from Gaussian parameters") {
    CHECK(params_to_photon_numbers({1.0, 2.0, 0.0, 0.0}).n_th == doctest::Approx(0.0));
    CHECK(params_to_photon_numbers({0.8, 1.0, 0.0, 0.0}).n_sq == doctest::Approx(0.0));

    const double r = std::asinh(std::sqrt(0.5));
    const double kappa = std::exp(2.0 * r);
    CHECK(params_to_photon_numbers({1.0, kappa, 0.0, 0.0}).n_sq ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK(params_to_photon_numbers({0.5, 1.0, 1.0, 2.0}).n_coh == doctest::Approx(5.0));

    CHECK_THROWS_AS(params_to_photon_numbers({1.2, 1.0, 0.0, 0.0}), UnphysicalParams);
}

TEST_CASE("Gaussian overlap closed form matches the Fock realization") {
    const GaussianParams p1 = params_from_state_args(0.3, 0.4, cxd(0.5, 0.2));
    const GaussianParams p2 = params_from_state_args(0.5, 0.2, cxd(0.3, 0.0));
    const DensityMatrix r1 = gaussian_params_to_density(p1, 48);
    const DensityMatrix r2 = gaussian_params_to_density(p2, 48);
    CHECK(gaussian_state_overlap(p1, p2) ==
          doctest::Approx(overlap(r1, r2)).epsilon(1e-6));
    CHECK(gaussian_state_overlap(p1, p1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("constructors produce normalized objects") {
    CHECK(std::abs(coherent_state(cxd(0.4, 0.9), 24).amplitudes().squaredNorm() - 1.0) < 1e-12);
    CHECK(std::abs(squeezed_vacuum(0.4, 24).amplitudes().squaredNorm() - 1.0) < 1e-12);
    CHECK(std::abs(squeezed_thermal_density(0.7, 0.3, cxd(0.5, 0.1), 64).matrix().trace().real() -
                   1.0) < 1e-12);
    CHECK(std::abs(singlet_density().matrix().trace().real() - 1.0) < 1e-12);
}

TEST_SUITE_END();
