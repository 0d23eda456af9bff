#pragma once

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include "lfm/fields.hpp"
#include "lfm/stencil.hpp"

namespace lfm {

using cplx = std::complex<double>;

struct MeshError : ConfigError {
    using ConfigError::ConfigError;
};

// Grids live on the torus Z_n (resp. Z_n^2); site x sits at site_coord(x, n).
Grid1 sample(const TestFunction& f, long n);
Grid1 sample(const Profile& f, long n);

void require_same_mesh(const Grid1& a, const Grid1& b);
void require_same_mesh(const Grid2& a, const Grid2& b);

// Mesh-scaled operators; n is the grid size.
namespace ops {
Grid1 grad(const Grid1& f);           // n [f(x+1) - f(x)]
Grid1 lap(const Grid1& f);            // n^2 [f(x+1) + f(x-1) - 2 f(x)]
Grid2 grad_delta(const Grid1& f);     // n^2/2 on the first off-diagonals
Grid2 lap(const Grid2& h);            // n^2 five-point Laplacian
Grid2 diag_grad(const Grid2& h);      // n/2 on the first off-diagonals
Grid2 advect(const Grid2& h);         // A_n
Grid1 diag_d(const Grid2& h);         // D_n
Grid2 diag_d_tilde(const Grid2& h);   // D~_n
Grid2 b_op(const Grid2& h);           // B_n
// n^{a-1} gk A_n + n^{a-2} Delta_n
Grid2 poisson_operator(const Grid2& h, double gk, double a = 1.5);
} // namespace ops

double l2_norm(const Grid2& h);
double relative_l2_gap(const Grid2& a, const Grid2& b);
bool is_symmetric(const Grid2& h, double tol);

// Discrete transforms with the e^{+2i pi} sign.
std::vector<cplx> dft_plus(const std::vector<cplx>& a);
std::vector<cplx> dft_minus(const std::vector<cplx>& a);
std::vector<cplx> dft2_plus(const std::vector<cplx>& a, long n);
std::vector<cplx> dft2_minus(const std::vector<cplx>& a, long n);

// (1/n) sum_x g(x/n) e^{2i pi x xi / n}
cplx fourier_n(const TestFunction& g, double xi, long n);
cplx fourier_n(const Grid1& g, double xi);
// integral of f(u) e^{2i pi u xi}
cplx fourier(const TestFunction& f, double xi);
// F(xi) for the integers |xi| < N/2, from N trapezoid samples on [-1/2, 1/2)
std::vector<cplx> fourier_integers(const TestFunction& f, long N);

// Theta = i Omega / (p Lambda - q i Omega). The printed form has (p, q) = (gk, 1);
// the Poisson solve for gk A_n + Delta_n needs (p, q) = (1, gk).
struct ThetaForm {
    double p = 1.0;
    double q = 1.0;
    static ThetaForm paper(double gk) { return {gk, 1.0}; }
    static ThetaForm poisson(double gk) { return {1.0, gk}; }
};

struct LambdaOmegaTheta {
    double lambda;
    double omega;
    cplx theta;
};
// theta(0, 0) is set to 0
LambdaOmegaTheta lambda_omega_theta(double k, double l, ThetaForm form);

// F_n(h_n)(u, v) for integer (u, v)
cplx poisson_h_hat(long u, long v, long n, const TestFunction& f, double gk);
Grid2 solve_h(const TestFunction& f, long n, double gk);
Grid1 w_of(const Grid2& h);                      // h(x, x+1) - h(x, x)
Grid2 solve_v(const Grid2& h, double gk);
Grid2 poisson_rhs_h(const TestFunction& f, long n, double gk);
Grid2 poisson_rhs_v(const Grid2& h);
// F_n(w_n)(xi) = -gk^2 (sqrt n / 2) L_n(xi/n) F_n(f)(xi) with the lattice L
cplx w_hat_formula(long xi, long n, const TestFunction& f, double gk);
// relative l2 defect of the Poisson solve for h_n
double poisson_defect(const TestFunction& f, long n, double gk);

struct Residues {
    cplx I, J, K, L, M, N, O;
    bool has_mo = true; // M and O are undefined at y = 0 (set to NaN)
};
Residues residues_closed(double y, ThetaForm form);
Residues residues_quadrature(double y, ThetaForm form, double tol = 1e-10);
// the same integrals as means over the n frequencies of the torus, y = s/n
Residues residues_lattice(long s, long n, ThetaForm form);

// integral of dx / (Lambda^2 + Omega^2)(y - x, x); refuses |y| < 1e-6
double W(double y);

cplx G0(double v);
cplx Gn(double y, double gk, ThetaForm form);
// |n^{3/2} G_n(xi/n) - G_0(xi)| / (gamma |xi|^{3/2} + xi^2 / sqrt n)
double lemma_est_ratio(double xi, long n, double gamma, double gk);
// max of the ratio over 0 < |xi| <= sqrt n
double lemma_est_constant(long n, double gamma, double gk);

// (1/n) sum_x |D_n h_n(x/n) + L f(x/n) / 4|^2 with L acting on the unit torus
double dn_hn_vs_Lf(long n, const TestFunction& f, double gk);
// -L f / 4 at the sites of the n-torus
std::vector<double> quarter_minus_Lf(long n, const TestFunction& f);

// D_n h_n and the diagonal bands of h_n without forming the n x n grid
struct BandData {
    std::vector<double> diag;  // h(x, x)
    std::vector<double> upper; // h(x, x+1)
    double sum_sq = 0.0;       // sum over the whole torus
};
BandData h_bands(const TestFunction& f, long n, double gk);
BandData v_bands(const BandData& h, double gk);

struct ScalingSuite {
    std::vector<long> ns;
    std::array<std::vector<double>, 9> sums;
    std::array<double, 9> slope{};     // least-squares slope of log sum against log n
    std::array<double, 9> corrected{}; // same with an extra n^{-1/2} term in the fit
    static constexpr std::array<double, 9> expected{1.5, 1.0, 1.0, -1.0, 0.5, 0.0, 0.0, -2.0, 2.0};
    static constexpr std::array<double, 9> tolerance{0.1, 0.1, 0.1, 0.1, 0.15, 0.15, 0.15, 0.15, 0.15};
    static const std::array<const char*, 9> names;
};
std::array<double, 9> scaling_sums(const TestFunction& f, long n, double gk);
ScalingSuite scaling_suite(const std::vector<long>& ns, const TestFunction& f,
                           const std::function<double(long)>& gamma_of_n);

double one_plus_kappa_gamma(double gamma);

struct PhiPsiReport {
    double phi_error = 0.0;       // against R_n with the Theta(k, l) term
    double psi_error = 0.0;
    double phi_error_short = 0.0; // against R_n without it
    double psi_error_short = 0.0;
    double phi_scale = 0.0;       // max |Phi^|
    double psi_scale = 0.0;
};
PhiPsiReport phi_psi_hat_suite(long n, const TestFunction& f, double gk);

// int |Omega(k, xi-k)|^2 / (z + sin^2 pi k + sin^2 pi (xi-k)) dk at z = n^{-3/2}
double un_integral(double xi, long n);

// |sum h^2 - (1/n^2) sum |h^|^2| / sum h^2
double parseval_gap(const Grid2& h);
double parseval_gap(const Grid1& g);

} // namespace lfm
