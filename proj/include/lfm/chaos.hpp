#pragma once

#include <map>
#include <utility>
#include <vector>

#include "lfm/equilibrium.hpp"

namespace lfm {

struct OrthoBasis {
    double gamma = 0.0;
    // coeffs[k][j] is the coefficient of u^j in H_k (monic, so coeffs[k][k] = 1)
    std::vector<std::vector<double>> coeffs;
    std::vector<double> norms;

    int kmax() const { return int(norms.size()) - 1; }
    double eval(int k, double u) const;
};

OrthoBasis build_basis(double gamma, int kmax);

// sparse occupation: site -> multiplicity (> 0)
using Occupation = std::map<long, int>;

int degree(const Occupation& s);
// exchange of the occupation numbers at x and x+1 (x+1 taken mod period when period > 0)
Occupation swapped(const Occupation& s, long x, long period = 0);

struct ChaosCoefficients {
    int degree = 0;
    long period = 0; // 0 means the infinite lattice
    std::map<Occupation, double> psi;

    double at(const Occupation& s) const;
    // bonds x (pairs x, x+1) whose exchange can change some coefficient
    std::vector<long> active_bonds() const;
};

double poly_norm(const Occupation& s, const OrthoBasis& basis);

// (S_x Psi)(sigma) = Psi(sigma^{x,x+1}) - Psi(sigma)
ChaosCoefficients noise_on_chaos(const ChaosCoefficients& psi, long x);
// sum over all bonds of the above
ChaosCoefficients carre(const ChaosCoefficients& psi);

double dirichlet_form(const ChaosCoefficients& psi, const OrthoBasis& basis);
double dirichlet_form_unweighted(const ChaosCoefficients& psi);

using PairMap = std::map<std::pair<long, long>, double>;

// Psi(p delta_x + q delta_y) = F(x, y)
ChaosCoefficients chaos_from_pairs(const PairMap& F, int p, int q);

struct ExtendedG {
    PairMap G;
    double D0;
    long lo, hi; // window used for the sums, both axes
};

ExtendedG extend_and_d0(const PairMap& F);

double h_minus_one_bound(const PairMap& F, double z);

} // namespace lfm
