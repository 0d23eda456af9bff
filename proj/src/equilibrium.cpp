#include "lfm/equilibrium.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace lfm {

void ModelParams::validate() const
{
    if (!(beta > 0)) throw ConfigError("beta must be positive");
    if (!(gamma >= 0)) throw ConfigError("gamma must be non-negative");
    if (n < 4) throw ConfigError("lattice size n must be at least 4");
    if (!(a > 0)) throw ConfigError("time exponent a must be positive");
}

Potential Potential::quartic()
{
    return {[](double u) { return 0.25 * u * u * u * u; }, true};
}

namespace {

constexpr int kPanels = 24;
constexpr double kRelTol = 1e-13;

// mode of the weight exp(-beta e(u) - lambda u), located by bisection on
// beta e'(u) + lambda (monotone for the convex energies used here)
double locate_mode(double beta, double lambda, double gamma, const Potential& pot)
{
    if (lambda == 0.0 && pot.even) return 0.0;
    auto dlogw = [&](double u) {
        const double h = 1e-6 * std::max(1.0, std::fabs(u));
        const double de = (0.5 * (u + h) * (u + h) + gamma * pot.V(u + h)
                           - 0.5 * (u - h) * (u - h) - gamma * pot.V(u - h)) / (2 * h);
        return beta * de + lambda;
    };
    double lo = -std::fabs(lambda) / beta - 1.0, hi = std::fabs(lambda) / beta + 1.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (dlogw(mid) > 0) hi = mid; else lo = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

Gibbs::Gibbs(double beta, double tau, double gamma, Potential pot)
    : beta_(beta), tau_(tau), gamma_(gamma), pot_(std::move(pot))
{
    if (!(beta > 0)) throw ConfigError("beta must be positive");
    if (!(gamma >= 0)) throw ConfigError("gamma must be non-negative");
    const double mode = locate_mode(beta_, beta_ * tau_, gamma_, pot_);
    // exp(-beta U^2/2) is far below 1e-16 and the margin covers u^16 tails
    const double half = 18.0 / std::sqrt(beta_);
    lo_ = mode - half;
    hi_ = mode + half;
    shift_ = 0.0;
    shift_ = log_weight(mode);
    const double z = integrate([](double) { return 1.0; });
    log_z_ = std::log(z) + shift_;
}

double Gibbs::log_weight(double u) const
{
    return -beta_ * energy(u) - beta_ * tau_ * u - shift_;
}

double Gibbs::integrate(const ScalarFn& f) const
{
    using boost::math::quadrature::gauss_kronrod;
    const double width = (hi_ - lo_) / kPanels;
    double total = 0.0;
    for (int i = 0; i < kPanels; ++i) {
        const double a = lo_ + i * width;
        const double b = (i + 1 == kPanels) ? hi_ : a + width;
        double err = 0.0;
        const double v = gauss_kronrod<double, 31>::integrate(
            [&](double u) { return f(u) * std::exp(log_weight(u)); }, a, b, 12, kRelTol, &err);
        if (!std::isfinite(v)) throw NumericalError("quadrature produced a non-finite value");
        total += v;
    }
    return total;
}

double Gibbs::expect(const ScalarFn& f) const
{
    return integrate(f) / std::exp(log_z_ - shift_);
}

double Gibbs::moment(int k) const
{
    if (k < 0 || k > 16) throw ConfigError("moment order must lie in [0,16]");
    return expect([k](double u) { return std::pow(u, k); });
}

double sample_site(const ModelParams& p, Stream& rng)
{
    const double mean = -p.lambda() / p.beta;
    const double sd = 1.0 / std::sqrt(p.beta);
    for (int it = 0; it < 1000000; ++it) {
        const double u = mean + sd * rng.normal();
        if (p.gamma == 0.0) return u;
        const double acc = std::exp(-p.beta * p.gamma * 0.25 * u * u * u * u);
        if (rng.uniform() < acc) return u;
    }
    throw NumericalError("rejection sampler exceeded 1e6 proposals");
}

double moment(int k, const ModelParams& p)
{
    return Gibbs(p).moment(k);
}

double kappa(double gamma, double beta)
{
    const Gibbs g(beta, 0.0, gamma);
    return g.moment(4) / g.moment(2);
}

EquilibriumSummary equilibrium_summary(const ModelParams& p)
{
    const Gibbs g(p);
    EquilibriumSummary s{};
    s.e_mean = g.expect([&](double u) { return g.energy(u); });
    s.v_mean = (p.tau == 0.0) ? 0.0 : g.moment(1);
    s.chi = g.moment(2);
    s.kappa = kappa(p.gamma, 1.0);
    s.z_log = g.log_z();
    return s;
}

double joint_cumulant(const std::vector<ScalarFn>& obs, const Gibbs& g)
{
    if (obs.empty() || obs.size() > 3) throw ConfigError("joint_cumulant takes 1 to 3 observables");
    std::vector<double> m;
    for (const auto& f : obs) m.push_back(g.expect(f));
    if (obs.size() == 1) return m[0];
    if (obs.size() == 2)
        return g.expect([&](double u) { return (obs[0](u) - m[0]) * (obs[1](u) - m[1]); });
    return g.expect([&](double u) {
        return (obs[0](u) - m[0]) * (obs[1](u) - m[1]) * (obs[2](u) - m[2]);
    });
}

double joint_cumulant(const std::vector<ScalarFn>& obs, const ModelParams& p)
{
    return joint_cumulant(obs, Gibbs(p));
}

double DerivationReport::max_residual() const
{
    return std::max({tau_rule, gamma_rule, beta_rule, tau_rule2, gamma_rule2, beta_rule2});
}

DerivationReport verify_derivation_rules(const ModelParams& p, const ScalarFn& A, double delta)
{
    if (delta < 1e-6 || delta > 1e-2) throw ConfigError("delta must lie in [1e-6, 1e-2]");
    const Gibbs g0(p.beta, p.tau, p.gamma);
    const ScalarFn w = [](double u) { return u; };
    const ScalarFn V = g0.potential().V;
    const ScalarFn e_tau = [&](double u) { return g0.energy(u) + p.tau * u; };

    auto mean = [&](const Gibbs& g) { return g.expect(A); };
    auto var = [&](const Gibbs& g) { return joint_cumulant({A, A}, g); };
    auto rel = [](double lhs, double rhs) { return std::fabs(lhs - rhs) / std::max(1.0, std::fabs(rhs)); };

    const Gibbs tp(p.beta, p.tau + delta, p.gamma), tm(p.beta, p.tau - delta, p.gamma);
    const Gibbs bp(p.beta + delta, p.tau, p.gamma), bm(p.beta - delta, p.tau, p.gamma);
    const double gl = std::max(0.0, p.gamma - delta);
    const Gibbs gp(p.beta, p.tau, gl + 2 * delta), gm(p.beta, p.tau, gl);
    // gamma >= 0 forces a forward-shifted stencil at gamma = 0; the right side is
    // then evaluated at the stencil midpoint
    const Gibbs gc(p.beta, p.tau, gl + delta);

    DerivationReport r{};
    r.tau_rule = rel((mean(tp) - mean(tm)) / (2 * delta), -p.beta * joint_cumulant({A, w}, g0));
    r.gamma_rule = rel((mean(gp) - mean(gm)) / (2 * delta), -p.beta * joint_cumulant({A, V}, gc));
    r.beta_rule = rel((mean(bp) - mean(bm)) / (2 * delta), -joint_cumulant({A, e_tau}, g0));
    r.tau_rule2 = rel((var(tp) - var(tm)) / (2 * delta), -p.beta * joint_cumulant({A, A, w}, g0));
    r.gamma_rule2 = rel((var(gp) - var(gm)) / (2 * delta), -p.beta * joint_cumulant({A, A, V}, gc));
    r.beta_rule2 = rel((var(bp) - var(bm)) / (2 * delta), -joint_cumulant({A, A, e_tau}, g0));
    return r;
}

} // namespace lfm
