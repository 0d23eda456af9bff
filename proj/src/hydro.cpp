#include "lfm/hydro.hpp"

namespace lfm {

std::string to_string(Universality u)
{
    switch (u) {
    case Universality::DiffusiveLevy32: return "diffusive+levy32";
    case Universality::DiffusiveDiffusive: return "diffusive+diffusive";
    case Universality::GoldLevy: return "gold-levy";
    case Universality::Levy32Diffusive: return "levy32+diffusive";
    }
    return "unknown";
}

void check_even(const Potential& pot)
{
    if (!pot.even) throw ConfigError("potential is not declared even");
    for (int i = 1; i <= 16; ++i) {
        const double u = 0.37 * i;
        const double a = pot.V(u), b = pot.V(-u);
        if (std::fabs(a - b) > 1e-12 * std::max(1.0, std::fabs(a)))
            throw ConfigError("potential fails the even-symmetry spot check");
    }
}

namespace {

struct Cumulants {
    double YY, EE, YE;        // E denotes e2 = Y^2 + 2 gamma V(Y)
    double YYY, YYE, YEE, EEE;
};

Cumulants cumulants(const Gibbs& g)
{
    const double gam = g.gamma();
    const ScalarFn V = g.potential().V;
    const ScalarFn Y = [](double u) { return u; };
    const ScalarFn E = [gam, V](double u) { return u * u + 2 * gam * V(u); };
    Cumulants k{};
    k.YY = joint_cumulant({Y, Y}, g);
    k.EE = joint_cumulant({E, E}, g);
    k.YE = joint_cumulant({Y, E}, g);
    k.YYY = joint_cumulant({Y, Y, Y}, g);
    k.YYE = joint_cumulant({Y, Y, E}, g);
    k.YEE = joint_cumulant({Y, E, E}, g);
    k.EEE = joint_cumulant({E, E, E}, g);
    return k;
}

Mat2 inverse(const Mat2& m)
{
    const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if (det == 0.0) throw NumericalError("singular Jacobian in tension inversion");
    return {{{m[1][1] / det, -m[0][1] / det}, {-m[1][0] / det, m[0][0] / det}}};
}

Vec2 apply(const Mat2& m, const Vec2& v)
{
    return {m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]};
}

double quad_form(const Vec2& a, const Mat2& m, const Vec2& b)
{
    const Vec2 mb = apply(m, b);
    return a[0] * mb[0] + a[1] * mb[1];
}

} // namespace

double gamma_function(double beta, double tau, double gamma, const Potential& pot)
{
    check_even(pot);
    const Gibbs g(beta, tau, gamma, pot);
    const ScalarFn Y = [](double u) { return u; };
    const ScalarFn e = [&g](double u) { return g.energy(u); };
    const double yy = joint_cumulant({Y, Y}, g);
    const double ee = joint_cumulant({e, e}, g);
    const double ye = joint_cumulant({Y, e}, g);
    return beta * (yy * ee - ye * ye);
}

std::pair<double, double> tension_derivatives(double beta, double gamma, const Potential& pot)
{
    check_even(pot);
    const Gibbs g(beta, 0.0, gamma, pot);
    const Cumulants k = cumulants(g);
    const double Gam = 0.25 * beta * (k.YY * k.EE - k.YE * k.YE);
    return {-k.EE / (4 * Gam), 0.0};
}

CouplingConstants coupling_constants(double beta, double gamma, const Potential& pot)
{
    check_even(pot);
    const Gibbs g(beta, 0.0, gamma, pot);
    const Cumulants k = cumulants(g);

    CouplingConstants cc{};
    const double Gam = 0.25 * beta * (k.YY * k.EE - k.YE * k.YE);
    cc.Gamma = Gam;
    cc.dtau_dv = -k.EE / (4 * Gam);
    cc.dtau_de = 0.0;

    // derivatives of Gamma and 1/Gamma at tau = 0
    const double dtau_Gam = 0.25 * beta * beta * (-k.YYY * k.EE - k.YY * k.YEE + 2 * k.YYE * k.YE);
    const double dbeta_Gam = Gam / beta + beta / 8 * (-k.YYE * k.EE - k.YY * k.EEE + 2 * k.YEE * k.YE);
    const double dtau_inv = -dtau_Gam / (Gam * Gam);
    const double dbeta_inv = -dbeta_Gam / (Gam * Gam);

    const double dtau_dvtau = -0.25 * dtau_inv * k.EE + beta / (4 * Gam) * k.YEE;
    const double dtau_detau = 0.5 * dtau_inv * k.YE + k.YY / Gam - beta / (2 * Gam) * k.YYE;
    const double dbeta_dvtau = -0.25 * dbeta_inv * k.EE + k.EEE / (8 * Gam);
    const double dbeta_detau = 0.5 * dbeta_inv * k.YE - k.YEE / (4 * Gam);

    // rows: d/dtau, d/dbeta ; columns: v, e  (e = <e2>/2)
    const Mat2 J = {{{-beta * k.YY, -0.5 * beta * k.YE}, {-0.5 * k.YE, -0.25 * k.EE}}};
    const Mat2 Ji = inverse(J);
    const Vec2 dv = apply(Ji, {dtau_dvtau, dbeta_dvtau}); // (d2_vv, d2_ev)
    const Vec2 de = apply(Ji, {dtau_detau, dbeta_detau}); // (d2_ve, d2_ee)
    cc.d2tau = {dv[0], dv[1], de[0], de[1]};

    const double tau = 0.0;
    cc.c = 2 * (cc.dtau_dv - tau * cc.dtau_de);
    if (!(cc.c < 0)) throw NumericalError("sound velocity is non-negative: outside the validity region");
    cc.Z1 = -std::sqrt(-beta * cc.c / 2);
    cc.Z2 = std::sqrt(-cc.c / (2 * Gam));
    cc.Z1t = std::sqrt(-cc.c / (2 * beta));
    cc.Z2t = std::sqrt(-Gam * cc.c / 2);
    cc.psi1 = {1 / cc.Z1, -tau / cc.Z1};
    cc.psi2 = {cc.dtau_de / cc.Z2, -cc.dtau_dv / cc.Z2};
    cc.R = {{{cc.dtau_dv / cc.Z1t, cc.dtau_de / cc.Z1t}, {tau / cc.Z2t, 1 / cc.Z2t}}};
    cc.Hv = {{{2 * cc.d2tau.vv, 2 * cc.d2tau.ve}, {2 * cc.d2tau.ve, 2 * cc.d2tau.ee}}};
    const double tv = cc.dtau_dv, te = cc.dtau_de;
    cc.He = {{{-tau * cc.Hv[0][0] - 2 * tv * tv, -tau * cc.Hv[0][1] - 2 * tv * te},
              {-tau * cc.Hv[1][0] - 2 * tv * te, -tau * cc.Hv[1][1] - 2 * te * te}}};

    const Vec2* psi[2] = {&cc.psi1, &cc.psi2};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            const double hv = quad_form(*psi[a], cc.Hv, *psi[b]);
            const double he = quad_form(*psi[a], cc.He, *psi[b]);
            cc.G1[a][b] = 0.5 * (cc.R[0][0] * hv + cc.R[0][1] * he);
            cc.G2[a][b] = 0.5 * (cc.R[1][0] * hv + cc.R[1][1] * he);
        }
    return cc;
}

Universality classify_universality(const CouplingConstants& cc, double threshold)
{
    const bool g122 = std::fabs(cc.G1[1][1]) > threshold;
    const bool g211 = std::fabs(cc.G2[0][0]) > threshold;
    if (!g122) return g211 ? Universality::DiffusiveLevy32 : Universality::DiffusiveDiffusive;
    return g211 ? Universality::GoldLevy : Universality::Levy32Diffusive;
}

} // namespace lfm
