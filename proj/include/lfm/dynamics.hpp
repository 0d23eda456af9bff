#pragma once

#include <cstdint>
#include <vector>

#include "lfm/equilibrium.hpp"
#include "lfm/stencil.hpp"

namespace lfm {

struct Conserved {
    double volume = 0.0;
    double energy = 0.0;
};

struct LatticeState {
    std::vector<double> omega;
    double t = 0.0;
    double gamma = 0.0;
    Conserved conserved;

    LatticeState() = default;
    LatticeState(std::vector<double> w, double gamma_);
    int n() const { return int(omega.size()); }
    double total_volume() const;
    double total_energy() const;
};

// Product-measure draw from nu_{beta,0,gamma}.
LatticeState sample_equilibrium(const ModelParams& p, Stream& rng);

std::vector<double> drift(const std::vector<double>& omega, double gamma);

// One classical RK4 step of the Liouville flow; dt in (0, 0.05].
void step_ode(LatticeState& s, double dt);

void swap(LatticeState& s, int x);

struct EvolveOptions {
    double dt_max = 5e-3;
    double energy_budget = 1e-7; // relative drift per unit time
};

struct EvolveStats {
    uint64_t swaps = 0;
    uint64_t rk_steps = 0;
    double energy_drift = 0.0; // relative, after the run
};

// Exponential clocks of total rate n, ODE between events, uniform bond swap.
EvolveStats evolve(LatticeState& s, double duration, Stream& rng, const EvolveOptions& opt = {});

// Sums of monomials c * prod omega_{site}^{exp}; sites are taken mod n.
struct Monomial {
    double coef = 1.0;
    std::vector<std::pair<long, int>> factors;
};

struct LocalObservable {
    std::vector<Monomial> terms;

    LocalObservable& add(double c, std::vector<std::pair<long, int>> f);
    LocalObservable& operator+=(const LocalObservable& o);
    LocalObservable operator*(double c) const;
    double eval(const std::vector<double>& omega) const;
    int max_degree() const;
};

// (L_gamma phi)(omega) = (A_gamma phi)(omega) + (S phi)(omega), exact.
double apply_generator(const LocalObservable& phi, const std::vector<double>& omega, double gamma);
double apply_liouville(const LocalObservable& phi, const std::vector<double>& omega, double gamma);
double apply_noise(const LocalObservable& phi, const std::vector<double>& omega);

// Lattice observables of the generator algebra, on the ring of size N = h.N or f.N.
LocalObservable obs_volume(const Grid1& f);
LocalObservable obs_volume3(const Grid1& f, double kappa); // sum f (w^3 - kappa w)
LocalObservable obs_energy(const Grid1& f, double gamma);  // sum f e_gamma(w)
LocalObservable obs_quartic(const Grid1& f);               // sum f w^4
LocalObservable obs_q2(const Grid2& h);
LocalObservable obs_q4(const Grid2& h, double kappa);
LocalObservable obs_q6(const Grid2& h, double kappa);

struct IdentityCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double scale = 0.0; // sum of |term| on the right side
    double rel_error() const;
};

IdentityCheck check_volume_identity(const std::vector<double>& omega, const Grid1& f, double gamma, double kappa);
IdentityCheck check_energy_identity(const std::vector<double>& omega, const Grid1& f, double gamma, double kappa);
// h must be symmetric
IdentityCheck check_q2_identity(const std::vector<double>& omega, const Grid2& h, double gamma, double kappa);

struct Omega3Split {
    double cube;     // omega_x^3
    double minus_L;  // (-L_gamma)(omega_x^2 omega_{x+1})
    double lines;    // sum of the three chi-dependent correction lines
    double residual; // cube - minus_L - lines, equal to gamma * psi
};

Omega3Split omega3_split(const std::vector<double>& omega, long x, double gamma, double chi);
// closed form of psi for the split above
double omega3_psi(const std::vector<double>& omega, long x);

} // namespace lfm
