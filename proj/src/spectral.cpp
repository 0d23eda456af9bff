#include "lfm/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fftw3.h>

#include "lfm/equilibrium.hpp"

namespace lfm {

namespace {

constexpr double pi = std::numbers::pi;
const cplx I1(0.0, 1.0);

std::mutex& fftw_mutex()
{
    static std::mutex m;
    return m;
}

std::vector<cplx> run_fft(const std::vector<cplx>& a, int rank, long n, int sign)
{
    std::vector<cplx> in(a), out(a.size());
    auto* pin = reinterpret_cast<fftw_complex*>(in.data());
    auto* pout = reinterpret_cast<fftw_complex*>(out.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        plan = rank == 1 ? fftw_plan_dft_1d(int(n), pin, pout, sign, FFTW_ESTIMATE)
                         : fftw_plan_dft_2d(int(n), int(n), pin, pout, sign, FFTW_ESTIMATE);
    }
    if (!plan) throw NumericalError("FFTW could not plan a transform of size " + std::to_string(n));
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

Grid1 scaled(Grid1 g, double s)
{
    for (auto& x : g.v) x *= s;
    return g;
}

Grid2 scaled(Grid2 g, double s)
{
    for (auto& x : g.v) x *= s;
    return g;
}

void require_power_of_two(long n)
{
    if (n < 4 || (n & (n - 1)) != 0) throw MeshError("grid size must be a power of two >= 4, got " + std::to_string(n));
}

// Fourier-side tables for frequencies k/n, k = 0..n-1
struct Tables {
    std::vector<double> s2;  // sin^2(pi k/n)
    std::vector<double> s2k; // sin(2 pi k/n)
    std::vector<cplx> e;     // e^{2 i pi k/n}

    explicit Tables(long n) : s2(size_t(n)), s2k(size_t(n)), e(size_t(n))
    {
        for (long k = 0; k < n; ++k) {
            const double t = double(k) / double(n);
            const double s = std::sin(pi * t);
            s2[size_t(k)] = s * s;
            s2k[size_t(k)] = std::sin(2 * pi * t);
            e[size_t(k)] = std::polar(1.0, 2 * pi * t);
        }
    }
};

// i Omega / (p Lambda - i q Omega) without complex division
inline cplx theta_of(double lam, double om, double p, double q)
{
    const double den = p * p * lam * lam + q * q * om * om;
    if (den == 0.0) return 0.0;
    return cplx(-q * om * om, p * lam * om) / den;
}

template <class F>
double integrate_real(F&& f, std::vector<double> cuts, double tol)
{
    using boost::math::quadrature::gauss_kronrod;
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    double s = 0.0;
    for (size_t i = 0; i + 1 < cuts.size(); ++i)
        s += gauss_kronrod<double, 61>::integrate(f, cuts[i], cuts[i + 1], 15, tol);
    return s;
}

template <class F>
cplx integrate_complex(F&& f, std::vector<double> cuts, double tol)
{
    using boost::math::quadrature::gauss_kronrod;
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    double re = 0.0, im = 0.0;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i], b = cuts[i + 1];
        if (b - a <= 0.0) continue;
        re += gauss_kronrod<double, 61>::integrate([&](double x) { return f(x).real(); }, a, b, 15, tol);
        im += gauss_kronrod<double, 61>::integrate([&](double x) { return f(x).imag(); }, a, b, 15, tol);
    }
    return {re, im};
}

// break points where the integrands in x over [-1/2, 1/2] vary fastest: the peaks
// near x = 0 and x = y have width of order sqrt|y|
std::vector<double> near_singular_cuts(double y)
{
    std::vector<double> c{-0.5, 0.5, 0.0};
    const double r = std::sqrt(std::abs(y));
    for (double u : {y, 0.5 * y})
        if (u > -0.5 && u < 0.5) c.push_back(u);
    for (double scale = 0.125 * r; scale < 1.0; scale *= 2)
        for (double base : {0.0, 0.5 * y, y})
            for (double u : {base - scale, base + scale})
                if (u > -0.5 && u < 0.5) c.push_back(u);
    return c;
}

// Sums over anti-diagonals: c_m(s) = sum_l H(s-l, l) e^{-2 i pi l m/n} for m = 0, 1,
// turned into the bands h(x, x) and h(x, x+1).
template <class H>
BandData bands_from_spectrum(long n, H&& hat)
{
    const Tables t(n);
    std::vector<cplx> c0(size_t(n), 0.0), c1(size_t(n), 0.0);
    double sq = 0.0;
    for (long k = 0; k < n; ++k) {
        for (long l = 0; l < n; ++l) {
            const long s = (k + l) % n;
            const cplx v = hat(k, l, s, t);
            c0[size_t(s)] += v;
            c1[size_t(s)] += v * std::conj(t.e[size_t(l)]);
            sq += std::norm(v);
        }
    }
    const auto d0 = dft_minus(c0), d1 = dft_minus(c1);
    BandData b;
    b.diag.resize(size_t(n));
    b.upper.resize(size_t(n));
    const double nn = double(n) * double(n);
    for (long x = 0; x < n; ++x) {
        b.diag[size_t(x)] = d0[size_t(x)].real() / nn;
        b.upper[size_t(x)] = d1[size_t(x)].real() / nn;
    }
    b.sum_sq = sq / nn;
    return b;
}

std::vector<cplx> f_hat_lattice(const TestFunction& f, long n)
{
    const Grid1 g = sample(f, n);
    std::vector<cplx> a(g.v.begin(), g.v.end());
    return dft_plus(a); // sum_x f(x/n) e^{2 i pi s x/n} = n F_n(f)(s)
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    const double n = double(x.size());
    double mx = 0, my = 0;
    for (size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (size_t i = 0; i < x.size(); ++i) sxy += (x[i] - mx) * (y[i] - my), sxx += (x[i] - mx) * (x[i] - mx);
    return sxy / sxx;
}

// least squares for y = alpha x + c + B exp(-x/2), returns alpha
double corrected_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    double A[3][3] = {}, r[3] = {};
    for (size_t i = 0; i < x.size(); ++i) {
        const double row[3] = {x[i], 1.0, std::exp(-0.5 * x[i])};
        for (int a = 0; a < 3; ++a) {
            r[a] += row[a] * y[i];
            for (int b = 0; b < 3; ++b) A[a][b] += row[a] * row[b];
        }
    }
    // Gaussian elimination with partial pivoting
    int idx[3] = {0, 1, 2};
    for (int c = 0; c < 3; ++c) {
        int piv = c;
        for (int rr = c + 1; rr < 3; ++rr)
            if (std::abs(A[idx[rr]][c]) > std::abs(A[idx[piv]][c])) piv = rr;
        std::swap(idx[c], idx[piv]);
        for (int rr = c + 1; rr < 3; ++rr) {
            const double m = A[idx[rr]][c] / A[idx[c]][c];
            for (int k = c; k < 3; ++k) A[idx[rr]][k] -= m * A[idx[c]][k];
            r[idx[rr]] -= m * r[idx[c]];
        }
    }
    double sol[3];
    for (int c = 2; c >= 0; --c) {
        double s = r[idx[c]];
        for (int k = c + 1; k < 3; ++k) s -= A[idx[c]][k] * sol[k];
        sol[c] = s / A[idx[c]][c];
    }
    return sol[0];
}

} // namespace

// ---------------------------------------------------------------- grids

Grid1 sample(const TestFunction& f, long n)
{
    return sample(on_ring(f), n);
}

Grid1 sample(const Profile& f, long n)
{
    Grid1 g(n);
    for (long x = 0; x < n; ++x) g(x) = f(site_coord(x, n));
    return g;
}

void require_same_mesh(const Grid1& a, const Grid1& b)
{
    if (a.N != b.N || a.v.size() != b.v.size())
        throw MeshError("mesh mismatch: " + std::to_string(a.N) + " vs " + std::to_string(b.N));
}

void require_same_mesh(const Grid2& a, const Grid2& b)
{
    if (a.N != b.N || a.v.size() != b.v.size())
        throw MeshError("mesh mismatch: " + std::to_string(a.N) + " vs " + std::to_string(b.N));
}

namespace ops {

namespace {
template <class G>
double mesh(const G& g)
{
    const size_t want = std::is_same_v<G, Grid2> ? size_t(g.N * g.N) : size_t(g.N);
    if (g.N <= 2 || g.v.size() != want) throw MeshError("grid storage does not match its mesh");
    return double(g.N);
}
} // namespace

Grid1 grad(const Grid1& f) { return scaled(stencil::grad(f), mesh(f)); }
Grid1 lap(const Grid1& f) { const double n = mesh(f); return scaled(stencil::lap(f), n * n); }
Grid2 grad_delta(const Grid1& f) { const double n = mesh(f); return scaled(stencil::grad_delta(f), n * n); }
Grid2 lap(const Grid2& h) { const double n = mesh(h); return scaled(stencil::lap(h), n * n); }
Grid2 diag_grad(const Grid2& h) { return scaled(stencil::diag_grad(h), mesh(h)); }
Grid2 advect(const Grid2& h) { return scaled(stencil::advect(h), mesh(h)); }
Grid1 diag_d(const Grid2& h) { return scaled(stencil::diag_d(h), mesh(h)); }
Grid2 diag_d_tilde(const Grid2& h) { const double n = mesh(h); return scaled(stencil::diag_d_tilde(h), n * n); }
Grid2 b_op(const Grid2& h) { return scaled(stencil::b_op(h), std::sqrt(mesh(h))); }

Grid2 poisson_operator(const Grid2& h, double gk, double a)
{
    const double n = mesh(h);
    Grid2 A = advect(h), L = lap(h);
    const double ca = std::pow(n, a - 1) * gk, cl = std::pow(n, a - 2);
    for (size_t i = 0; i < A.v.size(); ++i) A.v[i] = ca * A.v[i] + cl * L.v[i];
    return A;
}

} // namespace ops

double l2_norm(const Grid2& h)
{
    double s = 0.0;
    for (double x : h.v) s += x * x;
    return std::sqrt(s);
}

double relative_l2_gap(const Grid2& a, const Grid2& b)
{
    require_same_mesh(a, b);
    double d = 0.0, s = 0.0;
    for (size_t i = 0; i < a.v.size(); ++i) {
        d += (a.v[i] - b.v[i]) * (a.v[i] - b.v[i]);
        s += b.v[i] * b.v[i];
    }
    return s > 0 ? std::sqrt(d / s) : std::sqrt(d);
}

bool is_symmetric(const Grid2& h, double tol)
{
    for (long x = 0; x < h.N; ++x)
        for (long y = x + 1; y < h.N; ++y)
            if (std::abs(h(x, y) - h(y, x)) > tol) return false;
    return true;
}

// ---------------------------------------------------------------- transforms

std::vector<cplx> dft_plus(const std::vector<cplx>& a) { return run_fft(a, 1, long(a.size()), FFTW_BACKWARD); }
std::vector<cplx> dft_minus(const std::vector<cplx>& a) { return run_fft(a, 1, long(a.size()), FFTW_FORWARD); }

std::vector<cplx> dft2_plus(const std::vector<cplx>& a, long n)
{
    if (a.size() != size_t(n * n)) throw MeshError("2-D transform: storage does not match n^2");
    return run_fft(a, 2, n, FFTW_BACKWARD);
}

std::vector<cplx> dft2_minus(const std::vector<cplx>& a, long n)
{
    if (a.size() != size_t(n * n)) throw MeshError("2-D transform: storage does not match n^2");
    return run_fft(a, 2, n, FFTW_FORWARD);
}

cplx fourier_n(const TestFunction& g, double xi, long n)
{
    const long lo = long(std::ceil(g.lo() * double(n))), hi = long(std::floor(g.hi() * double(n)));
    cplx s = 0.0;
    for (long x = lo; x <= hi; ++x) s += g(double(x) / double(n)) * std::polar(1.0, 2 * pi * double(x) * xi / double(n));
    return s / double(n);
}

cplx fourier_n(const Grid1& g, double xi)
{
    cplx s = 0.0;
    for (long x = 0; x < g.N; ++x) {
        const double xs = site_coord(x, g.N) * double(g.N);
        s += g(x) * std::polar(1.0, 2 * pi * xs * xi / double(g.N));
    }
    return s / double(g.N);
}

cplx fourier(const TestFunction& f, double xi)
{
    using boost::math::quadrature::gauss_kronrod;
    const long panels = std::max<long>(8, long(std::ceil(4.0 * std::abs(xi) * (f.hi() - f.lo()))));
    const double h = (f.hi() - f.lo()) / double(panels);
    double re = 0.0, im = 0.0;
    for (long i = 0; i < panels; ++i) {
        const double a = f.lo() + double(i) * h, b = a + h;
        re += gauss_kronrod<double, 61>::integrate([&](double u) { return f(u) * std::cos(2 * pi * u * xi); }, a, b, 8, 1e-14);
        im += gauss_kronrod<double, 61>::integrate([&](double u) { return f(u) * std::sin(2 * pi * u * xi); }, a, b, 8, 1e-14);
    }
    return {re, im};
}

std::vector<cplx> fourier_integers(const TestFunction& f, long N)
{
    auto F = f_hat_lattice(f, N);
    for (auto& z : F) z /= double(N);
    return F;
}

// ---------------------------------------------------------------- Theta and h_n

LambdaOmegaTheta lambda_omega_theta(double k, double l, ThetaForm form)
{
    const double sk = std::sin(pi * k), sl = std::sin(pi * l);
    const double lam = 4 * (sk * sk + sl * sl);
    const double om = 2 * (std::sin(2 * pi * k) + std::sin(2 * pi * l));
    return {lam, om, theta_of(lam, om, form.p, form.q)};
}

cplx poisson_h_hat(long u, long v, long n, const TestFunction& f, double gk)
{
    const auto lot = lambda_omega_theta(double(u) / double(n), double(v) / double(n), ThetaForm::poisson(gk));
    return gk * gk / (2 * std::sqrt(double(n))) * lot.theta * fourier_n(f, double(u + v), n);
}

Grid2 solve_h(const TestFunction& f, long n, double gk)
{
    require_power_of_two(n);
    const auto F = f_hat_lattice(f, n);
    const Tables t(n);
    const double pref = gk * gk * std::sqrt(double(n)) / 2;
    std::vector<cplx> hat(size_t(n * n));
    for (long k = 0; k < n; ++k)
        for (long l = 0; l < n; ++l) {
            const double lam = 4 * (t.s2[size_t(k)] + t.s2[size_t(l)]);
            const double om = 2 * (t.s2k[size_t(k)] + t.s2k[size_t(l)]);
            hat[size_t(k * n + l)] = pref * theta_of(lam, om, 1.0, gk) * F[size_t((k + l) % n)];
        }
    const auto re = dft2_minus(hat, n);
    Grid2 h(n);
    const double nn = double(n) * double(n);
    for (size_t i = 0; i < h.v.size(); ++i) h.v[i] = re[i].real() / nn;
    return h;
}

Grid1 w_of(const Grid2& h)
{
    Grid1 w(h.N);
    for (long x = 0; x < h.N; ++x) w(x) = h(x, x + 1) - h(x, x);
    return w;
}

Grid2 solve_v(const Grid2& h, double gk)
{
    const long n = h.N;
    require_power_of_two(n);
    const Grid1 w = w_of(h);
    const auto W = dft_plus(std::vector<cplx>(w.v.begin(), w.v.end()));
    const Tables t(n);
    std::vector<cplx> hat(size_t(n * n));
    for (long k = 0; k < n; ++k)
        for (long l = 0; l < n; ++l) {
            if (k == 0 && l == 0) continue;
            const double lam = 4 * (t.s2[size_t(k)] + t.s2[size_t(l)]);
            const double om = 2 * (t.s2k[size_t(k)] + t.s2k[size_t(l)]);
            hat[size_t(k * n + l)] = -2.0 * W[size_t((k + l) % n)] * (t.e[size_t(k)] + t.e[size_t(l)]) / cplx(lam, -gk * om);
        }
    const auto re = dft2_minus(hat, n);
    Grid2 v(n);
    const double nn = double(n) * double(n);
    for (size_t i = 0; i < v.v.size(); ++i) v.v[i] = re[i].real() / nn;
    return v;
}

Grid2 poisson_rhs_h(const TestFunction& f, long n, double gk)
{
    return scaled(ops::grad_delta(sample(f, n)), gk * gk);
}

Grid2 poisson_rhs_v(const Grid2& h)
{
    return scaled(ops::diag_d_tilde(h), 2.0 / std::sqrt(double(h.N)));
}

cplx w_hat_formula(long xi, long n, const TestFunction& f, double gk)
{
    const Residues r = residues_lattice(wrap_index(xi, n), n, ThetaForm::poisson(gk));
    return -gk * gk * std::sqrt(double(n)) / 2 * r.L * fourier_n(f, double(xi), n);
}

double poisson_defect(const TestFunction& f, long n, double gk)
{
    const Grid2 h = solve_h(f, n, gk);
    return relative_l2_gap(ops::poisson_operator(h, gk), poisson_rhs_h(f, n, gk));
}

// ---------------------------------------------------------------- residues

Residues residues_closed(double y, ThetaForm form)
{
    Residues r{};
    if (y == 0.0) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        r.M = r.O = cplx(nan, nan);
        r.has_mo = false;
        return r;
    }
    const double p = form.p, q = form.q;
    const cplx w = std::polar(1.0, 2 * pi * y), wb = std::conj(w);
    const cplx c = p * (1.0 + wb) + q * (1.0 - wb);
    const cplx delta = 4 * p * p - w * c * c;
    cplx s = std::sqrt(delta);
    cplx zm = (2 * p - s) / c;
    if (std::abs(zm) >= 1.0) { // pick the root inside the unit disc
        s = -s;
        zm = (2 * p - s) / c;
    }
    r.I = (1.0 - w) / (w * c) * (1.0 - 2 * p / s);
    const cplx mean_zbar_theta = -(1.0 - wb) / c * (4 * p / (c * w) - 2 * p / (zm * s));
    r.J = (1.0 - w) * mean_zbar_theta;
    r.K = 2.0 * r.J;
    r.L = r.I - r.J / (1.0 - w);
    r.M = r.J / std::norm(w - 1.0);
    r.N = w / (1.0 - w) * r.L;
    r.O = w / (w - 1.0) * r.I;
    return r;
}

Residues residues_quadrature(double y, ThetaForm form, double tol)
{
    Residues r{};
    const cplx w = std::polar(1.0, 2 * pi * y);
    auto th = [&](double x) { return lambda_omega_theta(y - x, x, form); };
    const auto cuts = near_singular_cuts(y);
    const cplx i0 = integrate_complex([&](double x) { return th(x).theta; }, cuts, tol);
    const cplx iz = integrate_complex([&](double x) { return th(x).theta * std::polar(1.0, -2 * pi * x); }, cuts, tol);
    r.I = i0;
    r.J = iz * (1.0 - w);
    r.K = integrate_complex(
        [&](double x) {
            const auto t = th(x);
            return -I1 * t.omega * t.theta;
        },
        cuts, tol);
    r.L = i0 - iz;
    if (y == 0.0) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        r.M = r.O = cplx(nan, nan);
        r.has_mo = false;
        r.N = 0.0;
        return r;
    }
    const cplx inv = 1.0 / (1.0 - std::conj(w));
    r.M = inv * iz;
    r.N = inv * (iz - i0);
    r.O = inv * i0;
    return r;
}

Residues residues_lattice(long s, long n, ThetaForm form)
{
    s = wrap_index(s, n);
    cplx i0 = 0.0, iz = 0.0, ik = 0.0;
    const Tables t(n);
    for (long x = 0; x < n; ++x) {
        const long k = wrap_index(s - x, n);
        const double lam = 4 * (t.s2[size_t(k)] + t.s2[size_t(x)]);
        const double om = 2 * (t.s2k[size_t(k)] + t.s2k[size_t(x)]);
        const cplx th = theta_of(lam, om, form.p, form.q);
        i0 += th;
        iz += th * std::conj(t.e[size_t(x)]);
        ik += -I1 * om * th;
    }
    const double nd = double(n);
    i0 /= nd;
    iz /= nd;
    ik /= nd;
    const cplx w = t.e[size_t(s)];
    Residues r{};
    r.I = i0;
    r.J = iz * (1.0 - w);
    r.K = ik;
    r.L = i0 - iz;
    if (s == 0) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        r.M = r.O = cplx(nan, nan);
        r.N = 0.0;
        r.has_mo = false;
        return r;
    }
    const cplx inv = 1.0 / (1.0 - std::conj(w));
    r.M = inv * iz;
    r.N = inv * (iz - i0);
    r.O = inv * i0;
    return r;
}

double W(double y)
{
    if (std::abs(y) < 1e-6) throw std::domain_error("W(y) is not evaluated for |y| < 1e-6");
    auto f = [&](double x) {
        const auto t = lambda_omega_theta(y - x, x, {});
        return 1.0 / (t.lambda * t.lambda + t.omega * t.omega);
    };
    return integrate_real(f, near_singular_cuts(y), 1e-9);
}

// ---------------------------------------------------------------- G_n against G_0

cplx G0(double v)
{
    const double s = v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0);
    return 0.5 * std::pow(std::abs(pi * v), 1.5) * cplx(1.0, s);
}

cplx Gn(double y, double gk, ThetaForm form)
{
    return gk * gk / 4 * residues_closed(y, form).K;
}

double lemma_est_ratio(double xi, long n, double gamma, double gk)
{
    const double nd = double(n);
    const cplx lhs = std::pow(nd, 1.5) * Gn(xi / nd, gk, ThetaForm::paper(gk));
    const double scale = gamma * std::pow(std::abs(xi), 1.5) + xi * xi / std::sqrt(nd);
    return std::abs(lhs - G0(xi)) / scale;
}

double lemma_est_constant(long n, double gamma, double gk)
{
    const long m = long(std::floor(std::sqrt(double(n))));
    double c = 0.0;
    for (long x = 1; x <= m; ++x) {
        c = std::max(c, lemma_est_ratio(double(x), n, gamma, gk));
        c = std::max(c, lemma_est_ratio(-double(x), n, gamma, gk));
        c = std::max(c, lemma_est_ratio(double(x) - 0.5, n, gamma, gk));
    }
    return c;
}

// ---------------------------------------------------------------- D_n h_n against L f

std::vector<double> quarter_minus_Lf(long n, const TestFunction& f)
{
    const long N = std::max<long>(1L << 16, 16 * n);
    const auto F = fourier_integers(f, N);
    std::vector<cplx> c(size_t(n), 0.0);
    for (long j = 0; j < N; ++j) {
        const long xi = 2 * j < N ? j : j - N;
        c[size_t(wrap_index(xi, n))] += G0(double(xi)) * F[size_t(j)];
    }
    const auto q = dft_minus(c);
    std::vector<double> out(static_cast<size_t>(n));
    for (long x = 0; x < n; ++x) out[size_t(x)] = q[size_t(x)].real();
    return out;
}

BandData h_bands(const TestFunction& f, long n, double gk)
{
    require_power_of_two(n);
    const auto F = f_hat_lattice(f, n);
    const double pref = gk * gk * std::sqrt(double(n)) / 2;
    return bands_from_spectrum(n, [&](long k, long l, long s, const Tables& t) {
        const double lam = 4 * (t.s2[size_t(k)] + t.s2[size_t(l)]);
        const double om = 2 * (t.s2k[size_t(k)] + t.s2k[size_t(l)]);
        return pref * theta_of(lam, om, 1.0, gk) * F[size_t(s)];
    });
}

BandData v_bands(const BandData& h, double gk)
{
    const long n = long(h.diag.size());
    std::vector<cplx> w(static_cast<size_t>(n));
    for (long x = 0; x < n; ++x) w[size_t(x)] = h.upper[size_t(x)] - h.diag[size_t(x)];
    const auto W = dft_plus(w);
    return bands_from_spectrum(n, [&](long k, long l, long s, const Tables& t) -> cplx {
        if (k == 0 && l == 0) return 0.0;
        const double lam = 4 * (t.s2[size_t(k)] + t.s2[size_t(l)]);
        const double om = 2 * (t.s2k[size_t(k)] + t.s2k[size_t(l)]);
        // -2 W(s) (e_k + e_l) / (lam - i gk om)
        const cplx num = -2.0 * W[size_t(s)] * (t.e[size_t(k)] + t.e[size_t(l)]);
        const double den = lam * lam + gk * gk * om * om;
        return num * cplx(lam, gk * om) / den;
    });
}

double dn_hn_vs_Lf(long n, const TestFunction& f, double gk)
{
    const BandData b = h_bands(f, n, gk);
    const auto q = quarter_minus_Lf(n, f);
    double s = 0.0;
    for (long x = 0; x < n; ++x) {
        const double dn = double(n) * (b.upper[size_t(x)] - b.upper[size_t(wrap_index(x - 1, n))]);
        s += (dn - q[size_t(x)]) * (dn - q[size_t(x)]);
    }
    return s / double(n);
}

// ---------------------------------------------------------------- scaling suite

const std::array<const char*, 9> ScalingSuite::names{
    "sum h^2", "sum h(x,x)^2", "sum (D_n h)^2", "sum (h(x+1,x+1) - h(x,x))^2",
    "sum v^2", "sum v(x,x)^2", "sum (D_n v)^2", "sum (v(x+1,x+1) - v(x,x))^2", "sum (D~_n v(x,x+1))^2"};

std::array<double, 9> scaling_sums(const TestFunction& f, long n, double gk)
{
    const BandData h = h_bands(f, n, gk);
    const BandData v = v_bands(h, gk);
    const double nd = double(n);
    std::array<double, 9> s{};
    s[0] = h.sum_sq;
    s[4] = v.sum_sq;
    for (long x = 0; x < n; ++x) {
        const size_t i = size_t(x), ip = size_t(wrap_index(x + 1, n)), im = size_t(wrap_index(x - 1, n));
        s[1] += h.diag[i] * h.diag[i];
        const double dh = nd * (h.upper[i] - h.upper[im]);
        s[2] += dh * dh;
        s[3] += (h.diag[ip] - h.diag[i]) * (h.diag[ip] - h.diag[i]);
        s[5] += v.diag[i] * v.diag[i];
        const double dv = nd * (v.upper[i] - v.upper[im]);
        s[6] += dv * dv;
        s[7] += (v.diag[ip] - v.diag[i]) * (v.diag[ip] - v.diag[i]);
        const double tv = nd * nd * (v.upper[i] - v.diag[i]);
        s[8] += tv * tv;
    }
    return s;
}

double one_plus_kappa_gamma(double gamma)
{
    return gamma == 0.0 ? 1.0 : 1.0 + kappa(gamma) * gamma;
}

ScalingSuite scaling_suite(const std::vector<long>& ns, const TestFunction& f,
                           const std::function<double(long)>& gamma_of_n)
{
    if (ns.size() < 4) throw ConfigError("scaling suite needs at least four mesh sizes");
    ScalingSuite r;
    r.ns = ns;
    std::vector<double> lx;
    for (long n : ns) {
        require_power_of_two(n);
        const auto s = scaling_sums(f, n, one_plus_kappa_gamma(gamma_of_n(n)));
        for (int i = 0; i < 9; ++i) r.sums[size_t(i)].push_back(s[size_t(i)]);
        lx.push_back(std::log(double(n)));
    }
    for (int i = 0; i < 9; ++i) {
        std::vector<double> ly;
        for (double v : r.sums[size_t(i)]) ly.push_back(std::log(v));
        r.slope[size_t(i)] = ls_slope(lx, ly);
        r.corrected[size_t(i)] = corrected_slope(lx, ly);
    }
    return r;
}

// ---------------------------------------------------------------- Phi and Psi

PhiPsiReport phi_psi_hat_suite(long n, const TestFunction& f, double gk)
{
    const Grid2 h = solve_h(f, n, gk);
    const Grid2 v = solve_v(h, gk);
    const Grid1 fs = sample(f, n);
    const double sn = std::sqrt(double(n));

    std::vector<cplx> phi(size_t(n * n)), psi(size_t(n * n));
    for (long x = 0; x < n; ++x)
        for (long y = 0; y < n; ++y) {
            const long d = wrap_index(y - x, n);
            double a = 0.0, b = 0.0;
            if (d == 0) {
            } else if (d == 1) {
                a = 2 * sn * h(x - 1, x + 1) - double(n) * gk * (fs(x + 1) - fs(x));
                b = sn * v(x - 1, x + 1);
            } else if (d == n - 1) {
                a = -2 * sn * h(x + 1, x - 1) - double(n) * gk * (fs(x) - fs(x - 1));
                b = -sn * v(x + 1, x - 1);
            } else {
                a = 2 * sn * (h(x - 1, y) - h(x + 1, y));
                b = sn * (v(x - 1, y) - v(x + 1, y));
            }
            phi[size_t(x * n + y)] = a;
            psi[size_t(x * n + y)] = b;
        }
    const auto phat = dft2_plus(phi, n), shat = dft2_plus(psi, n);

    const auto F = f_hat_lattice(f, n); // n F_n(f)(n s/n)
    const ThetaForm form = ThetaForm::poisson(gk);
    std::vector<Residues> res(static_cast<size_t>(n));
    for (long s = 0; s < n; ++s) res[size_t(s)] = residues_lattice(s, n, form);
    const Tables t(n);

    PhiPsiReport rep;
    double e1 = 0, e2 = 0, e3 = 0, e4 = 0;
    for (long k = 0; k < n; ++k)
        for (long l = 0; l < n; ++l) {
            const long s = (k + l) % n;
            const auto lot = lambda_omega_theta(double(k) / double(n), double(l) / double(n), form);
            const Residues& r = res[size_t(s)];
            const cplx ek = t.e[size_t(k)], w = t.e[size_t(s)];
            const cplx fn = F[size_t(s)] / double(n);
            const cplx extra = 2.0 * I1 * t.s2k[size_t(k)] * lot.theta;

            const cplx rshort = I1 * lot.omega + gk * (r.I * (std::conj(ek) - ek) + r.J);
            const cplx rfull = rshort + gk * extra;
            const double nn = double(n) * double(n);
            const cplx p = phat[size_t(k * n + l)];
            e1 = std::max(e1, std::abs(p - nn * gk * fn * rfull));
            e3 = std::max(e3, std::abs(p - nn * gk * fn * rshort));
            rep.phi_scale = std::max(rep.phi_scale, std::abs(p));

            const cplx q = shat[size_t(k * n + l)];
            cplx full = 0.0, brief = 0.0;
            if (s != 0) {
                const cplx base = r.O * (std::conj(ek) - ek) + (1.0 - w) * r.M;
                brief = nn * gk * gk * r.L * fn * base;
                full = nn * gk * gk * r.L * fn * (base + extra / (1.0 - std::conj(w)));
            }
            e2 = std::max(e2, std::abs(q - full));
            e4 = std::max(e4, std::abs(q - brief));
            rep.psi_scale = std::max(rep.psi_scale, std::abs(q));
        }
    auto rel = [](double e, double s) { return s > 0 ? e / s : e; };
    rep.phi_error = rel(e1, rep.phi_scale);
    rep.psi_error = rel(e2, rep.psi_scale);
    rep.phi_error_short = rel(e3, rep.phi_scale);
    rep.psi_error_short = rel(e4, rep.psi_scale);
    return rep;
}

double un_integral(double xi, long n)
{
    const double z = std::pow(double(n), -1.5);
    auto f = [&](double k) {
        const double a = std::sin(pi * k), b = std::sin(pi * (xi - k));
        const double om = 2 * (std::sin(2 * pi * k) + std::sin(2 * pi * (xi - k)));
        return om * om / (z + a * a + b * b);
    };
    std::vector<double> cuts{-0.5, 0.5, 0.0};
    for (double u : {xi, 0.5 * xi})
        if (u > -0.5 && u < 0.5) cuts.push_back(u);
    return integrate_real(f, cuts, 1e-9);
}

double parseval_gap(const Grid2& h)
{
    std::vector<cplx> a(h.v.begin(), h.v.end());
    const auto A = dft2_plus(a, h.N);
    double s = 0, t = 0;
    for (double x : h.v) s += x * x;
    for (const auto& z : A) t += std::norm(z);
    t /= double(h.N) * double(h.N);
    return s > 0 ? std::abs(s - t) / s : std::abs(t);
}

double parseval_gap(const Grid1& g)
{
    std::vector<cplx> a(g.v.begin(), g.v.end());
    const auto A = dft_plus(a);
    double s = 0, t = 0;
    for (double x : g.v) s += x * x;
    for (const auto& z : A) t += std::norm(z);
    t /= double(g.N);
    return s > 0 ? std::abs(s - t) / s : std::abs(t);
}

} // namespace lfm
