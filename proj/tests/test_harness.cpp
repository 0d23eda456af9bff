#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "json.hpp"
#include "lfm/harness.hpp"

using namespace lfm;

namespace {

ExperimentConfig tiny(int threads)
{
    auto c = parse_config("n = 32\nreplicas = 120\nseed = 99\n[theorem1]\ntimes = 0.05, 0.1\nthreads = " +
                              std::to_string(threads) + "\n",
                          "theorem1");
    return c;
}

} // namespace

TEST_CASE("config sections and defaults")
{
    const auto c = parse_config("seed = 7\nreplicas = 300\n[theorem2]\nn = 64\nreplicas = 150\n[theorem3]\nn = 16\n",
                                "theorem2");
    CHECK(c.seed == 7);
    CHECK(c.replicas == 150);
    CHECK(c.params.n == 64);
    CHECK(c.moving_frame);
    REQUIRE(c.params.schedule);
    CHECK(c.params.gamma == doctest::Approx(1.0 / 64));

    const auto d = default_config("theorem3");
    CHECK(d.field == FieldKind::Energy);
    CHECK(d.reference == SemigroupKind::Levy32);
    CHECK(d.params.gamma == doctest::Approx(1.0 / std::sqrt(128.0)));

    const auto e = parse_config("[theorem1]\ngamma = 0.05\na = 0.5\n", "theorem1");
    CHECK(!e.params.schedule);
    CHECK(e.params.gamma == 0.05);
    CHECK(e.params.a == 0.5);
}

TEST_CASE("config errors")
{
    CHECK_THROWS_AS(parse_config("colour = red\n", "theorem1"), ConfigError);
    CHECK_THROWS_AS(parse_config("replicas = ten\n", "theorem1"), ConfigError);
    CHECK_THROWS_AS(parse_config("replicas = 50\n", "theorem1"), ConfigError);
    CHECK_THROWS_AS(parse_config("times = 0.2, 0.1\n", "theorem1"), ConfigError);
    CHECK_THROWS_AS(parse_config("format = xml\n", "theorem1"), ConfigError);
    CHECK_THROWS_AS(parse_config("f_centers = 0.45\n", "theorem1"), WindowError);
    CHECK_THROWS_AS(parse_config("g_width = 0.3\n", "theorem1"), WindowError);
    CHECK_THROWS_AS(load_config("/nonexistent/path.ini", "theorem1"), ConfigError);
}

TEST_CASE("profile helpers")
{
    const std::vector<double> x{-0.2, -0.1, 0.0, 0.1, 0.2};
    std::vector<double> y;
    for (double u : x) y.push_back(1.0 - (u - 0.03) * (u - 0.03));
    CHECK(peak_location(x, y) == doctest::Approx(0.03));

    const auto s = profile_shape(x, {0, 1, 2, 1, 0});
    CHECK(s.center == doctest::Approx(0.0).epsilon(1e-15).scale(1.0));
    CHECK(s.width == doctest::Approx(std::sqrt(0.005)));
    CHECK(profile_distance({1, 2}, {1, 0}) == 2.0);
    CHECK_THROWS_AS(profile_distance({1}, {1, 2}), ConfigError);
}

TEST_CASE("empty report gives a header-only CSV")
{
    RunReport r;
    CHECK(to_csv(r) == "experiment,n,a,b,gamma_n,beta,t,f_center,estimate,stderr,reference,zscore,replicas,seed\n");
}

TEST_CASE("theorem run output is deterministic across thread counts")
{
    const RunReport a = run_theorem(tiny(1));
    const RunReport b = run_theorem(tiny(3));
    const std::string ca = to_csv(a), cb = to_csv(b);
    CHECK(ca == cb);
    CHECK(ca.back() == '\n');
    CHECK(a.rows.size() == 27); // t = 0 plus two times, nine centers each

    // z-scores are (estimate - reference) / stderr
    for (const auto& row : a.rows)
        if (row.stderr_ > 0)
            CHECK(row.zscore == doctest::Approx((row.estimate - row.reference) / row.stderr_).epsilon(1e-9));

    // the measured t=0 constant agrees with the static variance
    CHECK(std::abs(a.metrics.at("calibration_z")) < 4.0);

    const auto j = nlohmann::json::parse(to_json(a));
    REQUIRE(j["rows"].size() == a.rows.size());
    for (size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(j["rows"][i]["estimate"].get<double>() == a.rows[i].estimate);
        CHECK(j["rows"][i]["stderr"].get<double>() == a.rows[i].stderr_);
    }
    CHECK(j["config"]["seed"].get<uint64_t>() == 99);
}

TEST_CASE("CSV numbers carry 17 significant digits")
{
    RunReport r;
    ResultRow row;
    row.experiment = "x";
    row.estimate = 0.1;
    r.rows.push_back(row);
    const std::string s = to_csv(r);
    CHECK(s.find("0.10000000000000001") != std::string::npos);
}

TEST_CASE("suites pass")
{
    for (const char* k : {"equilibrium", "hydro", "identity-suite", "chaos-suite", "spectral-suite"}) {
        const auto r = run_suite(k);
        CHECK_MESSAGE(r.passed(), k);
        CHECK(!r.checks.empty());
    }
    CHECK_THROWS_AS(run_suite("nope"), ConfigError);
}
