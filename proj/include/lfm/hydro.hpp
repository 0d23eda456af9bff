#pragma once

#include <array>
#include <string>

#include "lfm/equilibrium.hpp"

namespace lfm {

using Vec2 = std::array<double, 2>;
using Mat2 = std::array<std::array<double, 2>, 2>;

struct TensionHessian {
    double vv;
    double ve; // d_e (d_v tau)
    double ev; // d_v (d_e tau), equal to ve up to quadrature error
    double ee;
};

struct CouplingConstants {
    double Gamma;
    double c;
    double Z1, Z2, Z1t, Z2t;
    Vec2 psi1, psi2;
    Mat2 R, Hv, He, G1, G2;
    double dtau_dv, dtau_de;
    TensionHessian d2tau;
};

enum class Universality {
    DiffusiveLevy32,   // sound diffusive, heat Levy 3/2
    DiffusiveDiffusive,
    GoldLevy,
    Levy32Diffusive,
};

std::string to_string(Universality u);

// Throws ConfigError if V is not even at 16 spot-check points.
void check_even(const Potential& pot);

double gamma_function(double beta, double tau, double gamma, const Potential& pot = Potential::quartic());

// (d tau / d v, d tau / d e) at tau = 0
std::pair<double, double> tension_derivatives(double beta, double gamma, const Potential& pot = Potential::quartic());

CouplingConstants coupling_constants(double beta, double gamma, const Potential& pot = Potential::quartic());

Universality classify_universality(const CouplingConstants& cc, double threshold = 1e-6);

} // namespace lfm
