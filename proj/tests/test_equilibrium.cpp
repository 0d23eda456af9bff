#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "lfm/equilibrium.hpp"

using namespace lfm;

namespace {

// Brute-force oracle: self-normalised importance sampling from a standard
// normal with weight exp(-gamma u^4 / 4). Shares no code with the library.
struct MCMoment {
    double mean, se;
};

MCMoment mc_moment(int k, double gamma, long samples, uint64_t seed)
{
    std::mt19937_64 eng(seed);
    std::normal_distribution<double> nd;
    double sw = 0, swf = 0, swf2 = 0, sw2 = 0;
    for (long i = 0; i < samples; ++i) {
        const double u = nd(eng);
        const double w = std::exp(-0.25 * gamma * u * u * u * u);
        const double f = std::pow(u, k);
        sw += w;
        sw2 += w * w;
        swf += w * f;
        swf2 += w * f * f;
    }
    const double m = swf / sw;
    // delta-method variance of the ratio estimator
    const double var = (swf2 - 2 * m * swf + m * m * sw) / sw; // weighted variance of f
    const double ess = sw * sw / sw2;
    return {m, std::sqrt(var / ess)};
}

ModelParams params(double beta, double gamma)
{
    ModelParams p;
    p.beta = beta;
    p.gamma = gamma;
    return p;
}

// frozen from tests/oracles/gibbs_oracle.py (mpmath, 40 digits)
constexpr double kM2_005 = 0.8887054237073164625;
constexpr double kKappa_01 = 2.2314971728053238376;
constexpr double kKappa_02 = 1.9055144128126180285;
constexpr double kEmean_1em3 = 0.49925592694952623493;

} // namespace

TEST_CASE("gaussian moments")
{
    CHECK(moment(4, params(1, 0)) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(moment(6, params(1, 0)) == doctest::Approx(15.0).epsilon(1e-12));
    CHECK(moment(2, params(2, 0)) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(moment(16, params(1, 0)) == doctest::Approx(2027025.0).epsilon(1e-10));
}

TEST_CASE("odd moments vanish at zero tension")
{
    for (double g : {0.0, 0.05, 0.2})
        for (int k : {1, 3, 5, 7, 9})
            CHECK(std::fabs(moment(k, params(1, g))) < 1e-12);
}

TEST_CASE("moments against the mpmath oracle")
{
    CHECK(moment(2, params(1, 0.05)) == doctest::Approx(kM2_005).epsilon(1e-11));
    CHECK(kappa(0.1) == doctest::Approx(kKappa_01).epsilon(1e-11));
    CHECK(kappa(0.2) == doctest::Approx(kKappa_02).epsilon(1e-11));
    CHECK(std::fabs(kappa(0.0) - 3.0) < 1e-9);
}

TEST_CASE("moments against the Monte Carlo oracle")
{
    const auto mc = mc_moment(2, 0.05, 10000000, 11);
    CHECK(std::fabs(moment(2, params(1, 0.05)) - mc.mean) < 3 * mc.se);

    const auto m4 = mc_moment(4, 0.1, 10000000, 12);
    const auto m2 = mc_moment(2, 0.1, 10000000, 12);
    const double k_mc = m4.mean / m2.mean;
    const double k_se = k_mc * std::hypot(m4.se / m4.mean, m2.se / m2.mean);
    CHECK(std::fabs(kappa(0.1) - k_mc) < 3 * k_se);
}

TEST_CASE("kappa approaches 3 monotonically")
{
    const double k1 = kappa(0.1), k2 = kappa(0.01), k3 = kappa(0.001);
    CHECK(k1 < k2);
    CHECK(k2 < k3);
    CHECK(k3 < 3.0);
    CHECK(3.0 - k3 < 0.02);
}

TEST_CASE("equilibrium summary")
{
    auto s = equilibrium_summary(params(1, 0));
    CHECK(s.e_mean == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(s.z_log == doctest::Approx(0.5 * std::log(2 * M_PI)).epsilon(1e-12));

    s = equilibrium_summary(params(1, 1e-3));
    CHECK(s.e_mean == doctest::Approx(kEmean_1em3).epsilon(1e-11));
    CHECK((s.e_mean - 0.5) / 1e-3 == doctest::Approx(-0.75).epsilon(0.02));

    s = equilibrium_summary(params(1, 0.1));
    CHECK(s.v_mean == 0.0);
    CHECK(s.chi > 0);
    CHECK(s.kappa > 0);

    ModelParams p = params(1, 0);
    p.tau = 0.3;
    s = equilibrium_summary(p);
    CHECK(s.v_mean == doctest::Approx(-0.3).epsilon(1e-11));
}

TEST_CASE("gaussian cumulant table")
{
    const ScalarFn G = [](double u) { return u; };
    const ScalarFn G2 = [](double u) { return u * u; };
    const auto p = params(1, 0);
    CHECK(joint_cumulant({G, G}, p) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(joint_cumulant({G2, G2}, p) == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(joint_cumulant({G, G, G2}, p) == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(joint_cumulant({G2, G2, G2}, p) == doctest::Approx(8.0).epsilon(1e-10));
    CHECK(std::fabs(joint_cumulant({G, G2}, params(1, 0.2))) < 1e-13);
}

TEST_CASE("sampler moments")
{
    for (double g : {0.0, 0.05, 0.2}) {
        const auto p = params(1, g);
        Stream rng(2024, uint64_t(g * 1000));
        const int N = 1000000;
        std::vector<double> s(N);
        for (auto& v : s) v = sample_site(p, rng);
        for (int k = 1; k <= 6; ++k) {
            double m = 0, m2 = 0;
            for (double v : s) {
                const double x = std::pow(v, k);
                m += x;
                m2 += x * x;
            }
            m /= N;
            const double se = std::sqrt((m2 / N - m * m) / N);
            CHECK_MESSAGE(std::fabs(m - moment(k, p)) < 4 * se, "gamma=" << g << " k=" << k);
        }
    }
}

TEST_CASE("sampler variance at beta=2")
{
    const auto p = params(2, 0);
    Stream rng(7, 0);
    const int N = 1000000;
    double m2 = 0, m4 = 0;
    for (int i = 0; i < N; ++i) {
        const double u = sample_site(p, rng);
        m2 += u * u;
        m4 += u * u * u * u;
    }
    m2 /= N;
    m4 /= N;
    CHECK(std::fabs(m2 - 0.5) < 3 * std::sqrt((m4 - m2 * m2) / N));
}

TEST_CASE("derivation rules")
{
    const ScalarFn sq = [](double u) { return u * u; };
    const ScalarFn q4 = [](double u) { return u * u * u * u; };
    const ScalarFn one = [](double) { return 1.0; };

    CHECK(verify_derivation_rules(params(1, 0), sq, 1e-4).tau_rule <= 1e-6);
    CHECK(verify_derivation_rules(params(1, 0.05), q4, 1e-4).beta_rule <= 1e-5);
    CHECK(verify_derivation_rules(params(1, 0.05), q4, 1e-4).max_residual() <= 1e-5);
    CHECK(verify_derivation_rules(params(1, 0.05), one, 1e-4).max_residual() == 0.0);

    ModelParams p = params(1.3, 0.1);
    p.tau = 0.2;
    const double r1 = verify_derivation_rules(p, sq, 4e-3).max_residual();
    const double r2 = verify_derivation_rules(p, sq, 2e-3).max_residual();
    CHECK(r2 < 0.35 * r1); // second-order stencil: ~1/4 per halving
}
