#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lfm/hydro.hpp"

using namespace lfm;

// frozen from tests/oracles/gibbs_oracle.py and tests/oracles/tension_oracle.py
constexpr double kGamma005 = 0.4006675659862458349;
constexpr double kDvTau_01 = -1.2231497172805323838;
constexpr double kDevTau_b1_g01 = -0.422225605064;    // numerical inversion, ~1e-8 accurate
constexpr double kDevTau_b15_g005 = -0.253737936718;

TEST_CASE("gamma function")
{
    CHECK(gamma_function(1, 0, 0) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(gamma_function(1, 0, 0.05) == doctest::Approx(kGamma005).epsilon(1e-10));
    CHECK(std::fabs(gamma_function(1, 0, 0.05) - gamma_function(1, 0, 0)) < 0.1);
    const double h = 1e-4;
    const double dtau = (gamma_function(1, h, 0.05) - gamma_function(1, -h, 0.05)) / (2 * h);
    CHECK(std::fabs(dtau) < 1e-6);
}

TEST_CASE("tension derivatives")
{
    auto [dv, de] = tension_derivatives(1, 0);
    CHECK(dv == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(de == 0.0);
    CHECK(2 * dv == doctest::Approx(-2.0).epsilon(1e-10));
    std::tie(dv, de) = tension_derivatives(1, 0.1);
    CHECK(dv == doctest::Approx(kDvTau_01).epsilon(1e-10));
}

TEST_CASE("coupling constants at gamma = 0")
{
    const auto cc = coupling_constants(1, 0);
    const double tol = 1e-8;
    CHECK(std::fabs(cc.c + 2) < tol);
    CHECK(std::fabs(cc.Z1 + 1) < tol);
    CHECK(std::fabs(cc.Z2 - std::sqrt(2.0)) < tol);
    CHECK(std::fabs(cc.R[0][0] + 1) < tol);
    CHECK(std::fabs(cc.R[1][1] - std::sqrt(2.0)) < tol);
    CHECK(std::fabs(cc.R[0][1]) < tol);
    CHECK(std::fabs(cc.R[1][0]) < tol);
    CHECK(std::fabs(cc.He[0][0] + 2) < tol);
    CHECK(std::fabs(cc.He[0][1]) < tol);
    CHECK(std::fabs(cc.He[1][1]) < tol);
    for (auto& row : cc.Hv)
        for (double v : row) CHECK(std::fabs(v) < tol);
    CHECK(std::fabs(cc.G2[0][0] + std::sqrt(2.0)) < tol);
    CHECK(std::fabs(cc.G1[1][1]) < tol);
    CHECK(classify_universality(cc) == Universality::DiffusiveLevy32);
}

TEST_CASE("coupling constants scale with beta as in the closed forms")
{
    const double b = 2.0;
    const auto cc = coupling_constants(b, 0);
    CHECK(cc.Z1 == doctest::Approx(-std::sqrt(b)).epsilon(1e-9));
    CHECK(cc.Z2 == doctest::Approx(std::sqrt(2.0) * b).epsilon(1e-9));
    CHECK(cc.Z2t == doctest::Approx(1 / (std::sqrt(2.0) * b)).epsilon(1e-9));
    CHECK(cc.R[0][0] == doctest::Approx(-std::sqrt(b)).epsilon(1e-9));
    CHECK(cc.R[1][1] == doctest::Approx(std::sqrt(2.0) * b).epsilon(1e-9));
    CHECK(cc.psi1[0] == doctest::Approx(-1 / std::sqrt(b)).epsilon(1e-9));
    CHECK(cc.psi2[1] == doctest::Approx(1 / (std::sqrt(2.0) * b)).epsilon(1e-9));
    // the definition makes the tilde normaliser positive
    CHECK(cc.Z1t == doctest::Approx(1 / std::sqrt(b)).epsilon(1e-9));
}

TEST_CASE("second tension derivatives against direct inversion")
{
    auto cc = coupling_constants(1, 0.1);
    CHECK(std::fabs(cc.d2tau.vv) < 1e-8);
    CHECK(std::fabs(cc.d2tau.ee) < 1e-8);
    CHECK(cc.d2tau.ve == doctest::Approx(kDevTau_b1_g01).epsilon(1e-6));
    CHECK(cc.d2tau.ev == doctest::Approx(cc.d2tau.ve).epsilon(1e-9));
    cc = coupling_constants(1.5, 0.05);
    CHECK(cc.d2tau.ve == doctest::Approx(kDevTau_b15_g005).epsilon(1e-6));
}

TEST_CASE("evenness consequences over a gamma grid")
{
    double prev = coupling_constants(1, 0).G2[0][0];
    double prev_step = 0;
    for (int i = 0; i <= 10; ++i) {
        const double g = 0.02 * i;
        const auto cc = coupling_constants(1, g);
        CHECK(std::fabs(cc.G1[1][1]) < 1e-6);
        CHECK(std::fabs(cc.Hv[0][0]) < 1e-6);
        CHECK(std::fabs(cc.Hv[1][1]) < 1e-6);
        CHECK(std::fabs(cc.He[0][1]) < 1e-8);
        CHECK(std::fabs(cc.He[1][1]) < 1e-8);
        CHECK(std::fabs(cc.psi1[1]) < 1e-12);
        CHECK(std::fabs(cc.psi2[0]) < 1e-12);
        CHECK(classify_universality(cc) == Universality::DiffusiveLevy32);
        if (i > 0) prev_step = std::fabs(cc.G2[0][0] - prev);
        prev = cc.G2[0][0];
    }
    // refining the grid shrinks successive differences
    const double fine = std::fabs(coupling_constants(1, 0.01).G2[0][0] - coupling_constants(1, 0).G2[0][0]);
    const double finer = std::fabs(coupling_constants(1, 0.005).G2[0][0] - coupling_constants(1, 0).G2[0][0]);
    CHECK(finer < fine);
    CHECK(prev_step < 0.5);
}

TEST_CASE("classification branches")
{
    CouplingConstants cc{};
    CHECK(classify_universality(cc) == Universality::DiffusiveDiffusive);
    cc.G1[1][1] = 1;
    CHECK(classify_universality(cc) == Universality::Levy32Diffusive);
    cc.G2[0][0] = 1;
    CHECK(classify_universality(cc) == Universality::GoldLevy);
    CHECK(to_string(Universality::DiffusiveLevy32) == "diffusive+levy32");
}

TEST_CASE("user supplied even potential")
{
    Potential sextic{[](double u) { return u * u * u * u * u * u / 6; }, true};
    const auto cc = coupling_constants(1, 0.05, sextic);
    CHECK(std::fabs(cc.G1[1][1]) < 1e-6);
    CHECK(classify_universality(cc) == Universality::DiffusiveLevy32);
    Potential odd{[](double u) { return u * u * u; }, true};
    CHECK_THROWS_AS(coupling_constants(1, 0.05, odd), ConfigError);
}
