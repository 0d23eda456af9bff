#include "lfm/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace lfm {

namespace {

constexpr double kBlowUp = 1e6;

double site_energy(double u, double gamma) { return 0.5 * u * u + 0.25 * gamma * u * u * u * u; }

// RK4 scratch space. The flux p = w + gamma w^3 is kept in two buffers padded
// with one ghost cell on each side, so every stage is a single fused pass.
struct Rk4Work {
    std::vector<double> p0, p1, acc;
    explicit Rk4Work(int n) : p0(static_cast<size_t>(n) + 2), p1(static_cast<size_t>(n) + 2), acc(static_cast<size_t>(n)) {}
};

inline double flux(double u, double gamma) { return u + gamma * (u * u * u); }

inline void ghosts(double* p, int n)
{
    p[0] = p[n];
    p[n + 1] = p[1];
}

inline void flux_drift(const double* __restrict w, double* __restrict p, double* __restrict d, int n, double gamma)
{
    for (int i = 0; i < n; ++i) p[i + 1] = flux(w[i], gamma);
    ghosts(p, n);
    for (int i = 0; i < n; ++i) d[i] = p[i + 2] - p[i];
}

// one stage: k = D p_in, acc += c k, p_out = flux(w + h k)
inline void stage(const double* __restrict w, const double* __restrict pin, double* __restrict pout,
                  double* __restrict acc, int n, double gamma, double c, double h, bool first)
{
    for (int i = 0; i < n; ++i) {
        const double k = pin[i + 2] - pin[i];
        acc[i] = first ? k : acc[i] + c * k;
        pout[i + 1] = flux(w[i] + h * k, gamma);
    }
    ghosts(pout, n);
}

void rk4(double* __restrict w, int n, double gamma, double dt, Rk4Work& ws)
{
    double* __restrict pa = ws.p0.data();
    double* __restrict pb = ws.p1.data();
    double* __restrict acc = ws.acc.data();
    for (int i = 0; i < n; ++i) pa[i + 1] = flux(w[i], gamma);
    ghosts(pa, n);
    stage(w, pa, pb, acc, n, gamma, 1.0, 0.5 * dt, true);
    stage(w, pb, pa, acc, n, gamma, 2.0, 0.5 * dt, false);
    stage(w, pa, pb, acc, n, gamma, 2.0, dt, false);
    const double h6 = dt / 6.0;
    double big = 0.0;
    for (int i = 0; i < n; ++i) {
        w[i] += h6 * (acc[i] + (pb[i + 2] - pb[i]));
        big = std::max(big, std::fabs(w[i]));
    }
    if (!(big < kBlowUp)) throw NumericalError("integrator blow-up: |omega| exceeded 1e6");
}

} // namespace

LatticeState::LatticeState(std::vector<double> w, double gamma_) : omega(std::move(w)), gamma(gamma_)
{
    conserved = {total_volume(), total_energy()};
}

double LatticeState::total_volume() const
{
    double s = 0.0;
    for (double u : omega) s += u;
    return s;
}

double LatticeState::total_energy() const
{
    double s = 0.0;
    for (double u : omega) s += site_energy(u, gamma);
    return s;
}

LatticeState sample_equilibrium(const ModelParams& p, Stream& rng)
{
    if (p.tau != 0.0) throw ConfigError("dynamics runs at tension 0 only");
    std::vector<double> w(size_t(p.n));
    for (auto& u : w) u = sample_site(p, rng);
    return LatticeState(std::move(w), p.gamma);
}

std::vector<double> drift(const std::vector<double>& omega, double gamma)
{
    const int n = int(omega.size());
    for (double u : omega)
        if (!(std::fabs(u) < kBlowUp)) throw NumericalError("drift: |omega| exceeded 1e6");
    std::vector<double> p(size_t(n) + 2), d(static_cast<size_t>(n));
    flux_drift(omega.data(), p.data(), d.data(), n, gamma);
    return d;
}

void step_ode(LatticeState& s, double dt)
{
    if (!(dt > 0 && dt <= 0.05)) throw ConfigError("step_ode: dt must lie in (0, 0.05]");
    Rk4Work ws(s.n());
    rk4(s.omega.data(), s.n(), s.gamma, dt, ws);
    s.t += dt;
}

void swap(LatticeState& s, int x)
{
    const int n = s.n();
    std::swap(s.omega[size_t(x)], s.omega[size_t((x + 1) % n)]);
}

EvolveStats evolve(LatticeState& s, double duration, Stream& rng, const EvolveOptions& opt)
{
    if (!(duration >= 0)) throw ConfigError("evolve: duration must be non-negative");
    EvolveStats st;
    if (duration == 0.0) return st;
    const int n = s.n();
    Rk4Work ws(n);
    double* w = s.omega.data();

    auto integrate = [&](double T) {
        if (T <= 0.0) return;
        const double m = std::ceil(T / opt.dt_max);
        const double h = T / m;
        for (long i = 0; i < long(m); ++i) rk4(w, n, s.gamma, h, ws);
        st.rk_steps += uint64_t(m);
    };

    double left = duration;
    for (;;) {
        const double wait = rng.exponential() / double(n);
        if (wait >= left) {
            integrate(left);
            break;
        }
        integrate(wait);
        left -= wait;
        const auto x = size_t(rng.below(uint64_t(n)));
        std::swap(w[x], w[(x + 1) % size_t(n)]);
        ++st.swaps;
    }
    s.t += duration;

    const double e = s.total_energy();
    st.energy_drift = std::fabs(e - s.conserved.energy) / std::max(std::fabs(s.conserved.energy), 1e-300);
    if (st.energy_drift > opt.energy_budget * std::max(s.t, 1.0))
        throw NumericalError("energy drift above budget");
    const double v = s.total_volume();
    if (std::fabs(v - s.conserved.volume) > 1e-8 * n) throw NumericalError("volume drift above 1e-8 n");
    return st;
}

// ---- symbolic observables --------------------------------------------------

LocalObservable& LocalObservable::add(double c, std::vector<std::pair<long, int>> f)
{
    if (c != 0.0) terms.push_back({c, std::move(f)});
    return *this;
}

LocalObservable& LocalObservable::operator+=(const LocalObservable& o)
{
    terms.insert(terms.end(), o.terms.begin(), o.terms.end());
    return *this;
}

LocalObservable LocalObservable::operator*(double c) const
{
    LocalObservable r = *this;
    for (auto& m : r.terms) m.coef *= c;
    return r;
}

namespace {

double ipow(double u, int k)
{
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= u;
    return r;
}

template <class Site>
double mono_value(const Monomial& m, const std::vector<double>& w, Site site)
{
    double v = m.coef;
    for (const auto& [x, e] : m.factors) v *= ipow(w[size_t(site(x))], e);
    return v;
}

} // namespace

double LocalObservable::eval(const std::vector<double>& omega) const
{
    const long n = long(omega.size());
    double s = 0.0;
    for (const auto& m : terms) s += mono_value(m, omega, [n](long x) { return wrap_index(x, n); });
    return s;
}

int LocalObservable::max_degree() const
{
    int d = 0;
    for (const auto& m : terms) {
        int k = 0;
        for (const auto& f : m.factors) k += f.second;
        d = std::max(d, k);
    }
    return d;
}

double apply_liouville(const LocalObservable& phi, const std::vector<double>& omega, double gamma)
{
    const long n = long(omega.size());
    auto at = [&](long x) { return omega[size_t(wrap_index(x, n))]; };
    auto dr = [&](long x) {
        const double a = at(x + 1), b = at(x - 1);
        return (a - b) + gamma * (a * a * a - b * b * b);
    };
    double s = 0.0;
    for (const auto& m : phi.terms) {
        for (size_t j = 0; j < m.factors.size(); ++j) {
            const auto [xj, ej] = m.factors[j];
            double v = m.coef * ej * ipow(at(xj), ej - 1) * dr(xj);
            for (size_t i = 0; i < m.factors.size(); ++i)
                if (i != j) v *= ipow(at(m.factors[i].first), m.factors[i].second);
            s += v;
        }
    }
    return s;
}

double apply_noise(const LocalObservable& phi, const std::vector<double>& omega)
{
    const long n = long(omega.size());
    double s = 0.0;
    for (const auto& m : phi.terms) {
        std::set<long> bonds;
        for (const auto& f : m.factors) {
            bonds.insert(wrap_index(f.first - 1, n));
            bonds.insert(wrap_index(f.first, n));
        }
        const double base = mono_value(m, omega, [n](long x) { return wrap_index(x, n); });
        for (long b : bonds) {
            const long b1 = wrap_index(b + 1, n);
            const double v = mono_value(m, omega, [&](long x) {
                const long y = wrap_index(x, n);
                return y == b ? b1 : (y == b1 ? b : y);
            });
            s += v - base;
        }
    }
    return s;
}

double apply_generator(const LocalObservable& phi, const std::vector<double>& omega, double gamma)
{
    return apply_liouville(phi, omega, gamma) + apply_noise(phi, omega);
}

LocalObservable obs_volume(const Grid1& f)
{
    LocalObservable o;
    for (long x = 0; x < f.N; ++x) o.add(f(x), {{x, 1}});
    return o;
}

LocalObservable obs_volume3(const Grid1& f, double kappa)
{
    LocalObservable o;
    for (long x = 0; x < f.N; ++x) {
        o.add(f(x), {{x, 3}});
        o.add(-kappa * f(x), {{x, 1}});
    }
    return o;
}

LocalObservable obs_energy(const Grid1& f, double gamma)
{
    LocalObservable o;
    for (long x = 0; x < f.N; ++x) {
        o.add(0.5 * f(x), {{x, 2}});
        o.add(0.25 * gamma * f(x), {{x, 4}});
    }
    return o;
}

LocalObservable obs_quartic(const Grid1& f)
{
    LocalObservable o;
    for (long x = 0; x < f.N; ++x) o.add(f(x), {{x, 4}});
    return o;
}

LocalObservable obs_q2(const Grid2& h)
{
    LocalObservable o;
    for (long x = 0; x < h.N; ++x)
        for (long y = 0; y < h.N; ++y)
            if (x != y) o.add(h(x, y), {{x, 1}, {y, 1}});
    return o;
}

LocalObservable obs_q4(const Grid2& h, double kappa)
{
    LocalObservable o;
    for (long x = 0; x < h.N; ++x)
        for (long y = 0; y < h.N; ++y)
            if (x != y) {
                o.add(h(x, y), {{x, 3}, {y, 1}});
                o.add(-kappa * h(x, y), {{x, 1}, {y, 1}});
            }
    return o;
}

LocalObservable obs_q6(const Grid2& h, double kappa)
{
    LocalObservable o;
    for (long x = 0; x < h.N; ++x)
        for (long y = 0; y < h.N; ++y)
            if (x != y) {
                const double c = h(x, y);
                o.add(c, {{x, 3}, {y, 3}});
                o.add(-kappa * c, {{x, 1}, {y, 3}});
                o.add(-kappa * c, {{x, 3}, {y, 1}});
                o.add(kappa * kappa * c, {{x, 1}, {y, 1}});
            }
    return o;
}

// ---- identities -------------------------------------------------------------

double IdentityCheck::rel_error() const
{
    return std::fabs(lhs - rhs) / std::max(scale, 1e-300);
}

namespace {

struct Sums {
    const std::vector<double>& w;
    double gamma, kappa;

    double at(long x) const { return w[size_t(wrap_index(x, long(w.size())))]; }
    double h3(long x) const { return at(x) * at(x) * at(x) - kappa * at(x); }

    double V(const Grid1& f) const
    {
        double s = 0;
        for (long x = 0; x < f.N; ++x) s += f(x) * at(x);
        return s;
    }
    double V3(const Grid1& f) const
    {
        double s = 0;
        for (long x = 0; x < f.N; ++x) s += f(x) * h3(x);
        return s;
    }
    double E(const Grid1& f) const
    {
        double s = 0;
        for (long x = 0; x < f.N; ++x) s += f(x) * site_energy(at(x), gamma);
        return s;
    }
    double E4(const Grid1& f) const
    {
        double s = 0;
        for (long x = 0; x < f.N; ++x) s += f(x) * ipow(at(x), 4);
        return s;
    }
    template <class P, class Q>
    double Q_(const Grid2& h, P p, Q q) const
    {
        double s = 0;
        for (long x = 0; x < h.N; ++x)
            for (long y = 0; y < h.N; ++y)
                if (x != y) s += h(x, y) * p(x) * q(y);
        return s;
    }
    double Q2(const Grid2& h) const
    {
        auto id = [this](long x) { return at(x); };
        return Q_(h, id, id);
    }
    double Q4(const Grid2& h) const
    {
        return Q_(h, [this](long x) { return h3(x); }, [this](long x) { return at(x); });
    }
    double Q6(const Grid2& h) const
    {
        auto c = [this](long x) { return h3(x); };
        return Q_(h, c, c);
    }
};

IdentityCheck assemble(double lhs, std::initializer_list<double> terms)
{
    IdentityCheck r;
    r.lhs = lhs;
    for (double t : terms) {
        r.rhs += t;
        r.scale += std::fabs(t);
    }
    r.scale = std::max(r.scale, std::fabs(lhs));
    return r;
}

Grid1 combine(double a, const Grid1& f, double b, const Grid1& g)
{
    Grid1 r(f.N);
    for (long x = 0; x < f.N; ++x) r(x) = a * f(x) + b * g(x);
    return r;
}

Grid2 combine(double a, const Grid2& f, double b, const Grid2& g)
{
    Grid2 r(f.N);
    for (size_t i = 0; i < r.v.size(); ++i) r.v[i] = a * f.v[i] + b * g.v[i];
    return r;
}

} // namespace

IdentityCheck check_volume_identity(const std::vector<double>& omega, const Grid1& f, double gamma, double kappa)
{
    const Sums S{omega, gamma, kappa};
    const double gk = gamma * kappa;
    const auto lf = stencil::lap(f), gf = stencil::grad(f);
    const double lhs = apply_generator(obs_volume(f), omega, gamma);
    return assemble(lhs, {S.V(combine(2 + gk, lf, -2 * (1 + gk), gf)), gamma * S.V3(combine(1, lf, -2, gf))});
}

IdentityCheck check_energy_identity(const std::vector<double>& omega, const Grid1& f, double gamma, double kappa)
{
    const Sums S{omega, gamma, kappa};
    const double g1 = 1 + gamma * kappa;
    const auto gd = stencil::grad_delta(f);
    const double lhs = apply_generator(obs_energy(f, gamma), omega, gamma);
    return assemble(lhs, {S.E(stencil::lap(f)), -g1 * g1 * S.Q2(gd), -2 * gamma * g1 * S.Q4(gd), -gamma * gamma * S.Q6(gd)});
}

IdentityCheck check_q2_identity(const std::vector<double>& omega, const Grid2& h, double gamma, double kappa)
{
    for (long x = 0; x < h.N; ++x)
        for (long y = 0; y < x; ++y)
            if (h(x, y) != h(y, x)) throw ConfigError("check_q2_identity: h must be symmetric");
    const Sums S{omega, gamma, kappa};
    const double g1 = 1 + gamma * kappa;
    const auto dh = stencil::diag_d(h);
    const double lhs = apply_generator(obs_q2(h), omega, gamma);
    return assemble(lhs, {S.Q2(combine(1, stencil::lap(h), g1, stencil::advect(h))),
                          -4 * S.E(dh),
                          2 * S.Q2(stencil::diag_d_tilde(h)),
                          2 * gamma * S.Q4(stencil::b_op(h)),
                          -gamma * S.E4(dh),
                          2 * gamma * kappa * S.Q2(stencil::diag_grad(h))});
}

Omega3Split omega3_split(const std::vector<double>& omega, long x, double gamma, double chi)
{
    const long n = long(omega.size());
    auto w = [&](long y) { return omega[size_t(wrap_index(y, n))]; };
    LocalObservable phi;
    phi.add(1.0, {{x, 2}, {x + 1, 1}});
    Omega3Split r;
    r.cube = w(x) * w(x) * w(x);
    r.minus_L = -apply_generator(phi, omega, gamma);
    const double w0 = w(x), w1 = w(x + 1), w2 = w(x + 2), wm = w(x - 1);
    r.lines = 3 * w0 * (w1 * w1 - chi) + (w0 * w0 - chi) * (2 * w2 - 3 * w1) + (wm * wm - chi) * w1
              - 2 * wm * w0 * w1
              + chi * (3 * w0 + 2 * w2 - 2 * w1);
    r.residual = r.cube - r.minus_L - r.lines;
    return r;
}

double omega3_psi(const std::vector<double>& omega, long x)
{
    const long n = long(omega.size());
    auto w = [&](long y) { return omega[size_t(wrap_index(y, n))]; };
    const double w0 = w(x), w1 = w(x + 1), w2 = w(x + 2), wm = w(x - 1);
    return 2 * w0 * w1 * (w1 * w1 * w1 - wm * wm * wm) + w0 * w0 * (w2 * w2 * w2 - w0 * w0 * w0);
}

} // namespace lfm
