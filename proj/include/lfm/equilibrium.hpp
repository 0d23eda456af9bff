#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lfm/rng.hpp"

namespace lfm {

struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using ScalarFn = std::function<double(double)>;

// gamma_n = c * n^{-b}
struct GammaSchedule {
    double c = 0.0;
    double b = 1.0;
};

struct ModelParams {
    double beta = 1.0;
    double tau = 0.0;
    double gamma = 0.0;
    int n = 128;
    double a = 1.0;
    std::optional<GammaSchedule> schedule;

    double lambda() const { return tau * beta; }
    void refresh()
    {
        if (schedule) gamma = schedule->c * std::pow(double(n), -schedule->b);
    }
    void validate() const;
};

// Single-site energy e(u) = u^2/2 + gamma * V(u); V defaults to u^4/4.
struct Potential {
    ScalarFn V;
    bool even = true;
    static Potential quartic();
};

// Single-site marginal proportional to exp(-beta*e(u) - lambda*u).
class Gibbs {
public:
    Gibbs(double beta, double tau, double gamma, Potential pot = Potential::quartic());
    explicit Gibbs(const ModelParams& p) : Gibbs(p.beta, p.tau, p.gamma) {}

    double expect(const ScalarFn& f) const;
    double moment(int k) const;
    double log_z() const { return log_z_; }
    double energy(double u) const { return 0.5 * u * u + gamma_ * pot_.V(u); }

    double beta() const { return beta_; }
    double tau() const { return tau_; }
    double gamma() const { return gamma_; }
    const Potential& potential() const { return pot_; }

private:
    double log_weight(double u) const;
    double integrate(const ScalarFn& f) const;

    double beta_, tau_, gamma_;
    Potential pot_;
    double lo_, hi_, shift_;
    double log_z_;
};

struct EquilibriumSummary {
    double e_mean;
    double v_mean;
    double chi;
    double kappa;
    double z_log;
};

double sample_site(const ModelParams& p, Stream& rng);
double moment(int k, const ModelParams& p);
double kappa(double gamma, double beta = 1.0);
EquilibriumSummary equilibrium_summary(const ModelParams& p);

// Joint cumulant of up to three observables.
double joint_cumulant(const std::vector<ScalarFn>& obs, const Gibbs& g);
double joint_cumulant(const std::vector<ScalarFn>& obs, const ModelParams& p);

struct DerivationReport {
    double tau_rule;    // d/dtau <A> vs -beta <A; w>
    double gamma_rule;  // d/dgamma <A> vs -beta <A; V>
    double beta_rule;   // d/dbeta <A> vs -<A; e + tau w>
    double tau_rule2;   // same three rules for <A; A>
    double gamma_rule2;
    double beta_rule2;
    double max_residual() const;
};

// Central finite differences against the cumulant right-hand sides.
// Residuals are relative to max(1, |rhs|).
DerivationReport verify_derivation_rules(const ModelParams& p, const ScalarFn& A, double delta);

} // namespace lfm
