#include "lfm/fields.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace lfm {

// ---------------------------------------------------------------- test functions

TestFunction TestFunction::unit_mass(double center, double width)
{
    if (!(width > 0)) throw ConfigError("bump width must be positive");
    return {center, width, 1.0 / (width * bump_mass())};
}

double TestFunction::bump_mass()
{
    static const double m = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [](double s) { return std::exp(-1.0 / (1.0 - s * s)); }, -1.0, 1.0, 15, 1e-15);
    return m;
}

double TestFunction::operator()(double u) const
{
    const double s = (u - center) / width;
    if (!(std::fabs(s) < 1.0)) return 0.0;
    return amplitude * std::exp(-1.0 / (1.0 - s * s));
}

double TestFunction::d1(double u) const
{
    const double s = (u - center) / width;
    if (!(std::fabs(s) < 1.0)) return 0.0;
    const double q = 1.0 - s * s;
    return amplitude * std::exp(-1.0 / q) * (-2.0 * s / (q * q)) / width;
}

double TestFunction::d2(double u) const
{
    const double s = (u - center) / width;
    if (!(std::fabs(s) < 1.0)) return 0.0;
    const double q = 1.0 - s * s;
    const double q2 = q * q;
    const double k = 4 * s * s / (q2 * q2) - 2 / q2 - 8 * s * s / (q2 * q);
    return amplitude * std::exp(-1.0 / q) * k / (width * width);
}

double wrap_unit(double u)
{
    const double r = u - std::floor(u + 0.5);
    return r >= 0.5 ? r - 1.0 : r;
}

double TestFunction::periodic(double u) const
{
    return (*this)(center + wrap_unit(u - center));
}

double site_coord(long i, long n)
{
    const long x = wrap_index(i, n);
    return double(2 * x < n ? x : x - n) / double(n);
}

Profile on_ring(const TestFunction& f)
{
    if (f.lo() < -0.5 || f.hi() > 0.5)
        throw WindowError("test function support [" + std::to_string(f.lo()) + ", " + std::to_string(f.hi()) +
                          "] wraps around the ring");
    return [f](double u) { return f(u); };
}

// ---------------------------------------------------------------- fields

Centering centering(const ModelParams& p)
{
    const auto s = equilibrium_summary(p);
    Centering c;
    c.v_mean = s.v_mean;
    c.e_mean = s.e_mean;
    c.chi = s.chi;
    c.kappa = s.kappa;
    c.m4 = moment(4, p);
    return c;
}

namespace {

template <class Density>
double pair_sum(const Profile& f, size_t n, Density&& xi)
{
    double s = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double fx = f(site_coord(long(i), long(n)));
        if (fx != 0.0) s += fx * xi(i);
    }
    return s / std::sqrt(double(n));
}

} // namespace

double volume_field(const Profile& f, const std::vector<double>& omega, const Centering& c)
{
    return pair_sum(f, omega.size(), [&](size_t i) { return omega[i] - c.v_mean; });
}

double energy_field(const Profile& f, const std::vector<double>& omega, double gamma, const Centering& c)
{
    return pair_sum(f, omega.size(), [&](size_t i) {
        const double u = omega[i];
        return 0.5 * u * u + 0.25 * gamma * u * u * u * u - c.e_mean;
    });
}

double volume3_field(const Profile& f, const std::vector<double>& omega, const Centering& c, bool hermite)
{
    const double k = hermite ? c.kappa : 0.0;
    return pair_sum(f, omega.size(), [&](size_t i) {
        const double u = omega[i];
        return u * u * u - k * u;
    });
}

double quartic_field(const Profile& f, const std::vector<double>& omega, const Centering& c)
{
    return pair_sum(f, omega.size(), [&](size_t i) {
        const double u = omega[i];
        return u * u * u * u - c.m4;
    });
}

double q_field(int order, const Profile2& h, const std::vector<double>& omega, const Centering& c)
{
    if (order != 2 && order != 4 && order != 6) throw ConfigError("q_field order must be 2, 4 or 6");
    const long n = long(omega.size());
    std::vector<double> lin(omega), cub(omega.size());
    for (size_t i = 0; i < omega.size(); ++i) {
        const double u = omega[i];
        cub[i] = u * u * u - c.kappa * u;
    }
    const auto& left = order == 2 ? lin : cub;
    const auto& right = order == 6 ? cub : lin;
    double s = 0.0;
    for (long x = 0; x < n; ++x) {
        const double ux = site_coord(x, n);
        for (long y = 0; y < n; ++y) {
            if (x == y) continue;
            const double hv = h(ux, site_coord(y, n));
            if (hv != 0.0) s += hv * left[size_t(x)] * right[size_t(y)];
        }
    }
    return s / double(n);
}

double sound_velocity_n(double chi, double gamma)
{
    return -2.0 - 6.0 * chi * gamma;
}

Profile moving_frame(const TestFunction& f, double t, const ModelParams& p, double chi)
{
    if (f.hi() - f.lo() >= 1.0) throw WindowError("moving-frame test function wider than the torus");
    const double shift = sound_velocity_n(chi, p.gamma) * t * std::pow(double(p.n), p.a - 1.0);
    if (shift == 0.0) return [f](double u) { return f.periodic(u); };
    return [f, shift](double u) { return f.periodic(u - shift); };
}

double norm_2n(const Profile& f, double lo, double hi, long n)
{
    double s = 0.0;
    for (long x = long(std::ceil(lo * n)); x <= long(std::floor(hi * n)); ++x) {
        const double v = f(double(x) / double(n));
        s += v * v;
    }
    return std::sqrt(s / double(n));
}

double norm_2n(const TestFunction& f, long n)
{
    return norm_2n([&f](double u) { return f(u); }, f.lo(), f.hi(), n);
}

double norm_neq(const Profile2& h, double lo, double hi, long n)
{
    const long a = long(std::ceil(lo * n)), b = long(std::floor(hi * n));
    double s = 0.0;
    for (long x = a; x <= b; ++x)
        for (long y = a; y <= b; ++y) {
            if (x == y) continue;
            const double v = h(double(x) / double(n), double(y) / double(n));
            s += v * v;
        }
    return std::sqrt(s) / double(n);
}

void check_window(const TestFunction& g, const std::vector<TestFunction>& probes)
{
    if (g.lo() < -0.25 || g.hi() > 0.25)
        throw WindowError("support of g must lie in [-1/4, 1/4]");
    for (const auto& f : probes)
        if (f.hi() - f.lo() > 0.5) throw WindowError("probe support longer than 1/2");
}

std::string to_string(FieldKind k)
{
    switch (k) {
    case FieldKind::Volume: return "volume";
    case FieldKind::Energy: return "energy";
    case FieldKind::Volume3: return "volume3";
    case FieldKind::Volume3Hermite: return "volume3_hermite";
    case FieldKind::Quartic: return "quartic";
    }
    return "?";
}

FieldKind field_kind_from_string(const std::string& s)
{
    for (auto k : {FieldKind::Volume, FieldKind::Energy, FieldKind::Volume3, FieldKind::Volume3Hermite,
                   FieldKind::Quartic})
        if (to_string(k) == s) return k;
    throw ConfigError("unknown field kind '" + s + "'");
}

std::vector<double> density(FieldKind k, const std::vector<double>& omega, double gamma, const Centering& c)
{
    std::vector<double> xi(omega.size());
    for (size_t i = 0; i < omega.size(); ++i) {
        const double u = omega[i], u2 = u * u;
        switch (k) {
        case FieldKind::Volume: xi[i] = u - c.v_mean; break;
        case FieldKind::Energy: xi[i] = 0.5 * u2 + 0.25 * gamma * u2 * u2 - c.e_mean; break;
        case FieldKind::Volume3: xi[i] = u2 * u; break;
        case FieldKind::Volume3Hermite: xi[i] = u2 * u - c.kappa * u; break;
        case FieldKind::Quartic: xi[i] = u2 * u2 - c.m4; break;
        }
    }
    return xi;
}

// ---------------------------------------------------------------- Monte Carlo

namespace {

void cross_correlation(const std::vector<double>& a, const std::vector<double>& b, double* out)
{
    const size_t n = a.size();
    for (size_t d = 0; d < n; ++d) {
        double s = 0.0;
        for (size_t x = 0; x + d < n; ++x) s += a[x] * b[x + d];
        for (size_t x = n - d; x < n; ++x) s += a[x] * b[x + d - n];
        out[d] = s / double(n);
    }
}

} // namespace

ReplicaRun run_replicas(FieldKind kind0, FieldKind kindT, const ModelParams& p, const std::vector<double>& times,
                        long M, uint64_t seed, const RunOptions& opt)
{
    p.validate();
    if (M < 1) throw ConfigError("replica count must be positive");
    if (times.empty()) throw ConfigError("empty time grid");
    for (size_t j = 0; j < times.size(); ++j)
        if (times[j] < 0 || (j > 0 && times[j] < times[j - 1]))
            throw ConfigError("time grid must be non-negative and non-decreasing");

    ReplicaRun run;
    run.kind0 = kind0;
    run.kindT = kindT;
    run.params = p;
    run.times = times;
    run.replicas = M;
    run.seed = seed;
    const size_t n = size_t(p.n), J = times.size();
    run.corr.assign(size_t(M) * J * n, 0.0);
    if (opt.keep_fields) {
        run.xi0.assign(size_t(M) * n, 0.0);
        run.xit.assign(size_t(M) * J * n, 0.0);
    }
    const Centering c = centering(p);
    const double scale = std::pow(double(p.n), p.a);
    std::vector<uint64_t> swaps(size_t(M), 0);
    std::vector<double> drift(size_t(M), 0.0);
    std::vector<std::exception_ptr> errors(static_cast<size_t>(M));
    std::atomic<long> next{0};
    std::atomic<bool> failed{false};

    auto worker = [&] {
        for (long r; (r = next.fetch_add(1)) < M && !failed.load();) {
            try {
                Stream rng(seed, uint64_t(r));
                auto s = sample_equilibrium(p, rng);
                const auto xi0 = density(kind0, s.omega, p.gamma, c);
                if (opt.keep_fields) std::copy(xi0.begin(), xi0.end(), run.xi0.begin() + long(size_t(r) * n));
                double clock = 0.0;
                for (size_t j = 0; j < J; ++j) {
                    const auto st = evolve(s, (times[j] - clock) * scale, rng, opt.evolve);
                    clock = times[j];
                    swaps[size_t(r)] += st.swaps;
                    drift[size_t(r)] = std::max(drift[size_t(r)], st.energy_drift);
                    const auto xit = density(kindT, s.omega, p.gamma, c);
                    cross_correlation(xi0, xit, run.corr.data() + (size_t(r) * J + j) * n);
                    if (opt.keep_fields)
                        std::copy(xit.begin(), xit.end(), run.xit.begin() + long((size_t(r) * J + j) * n));
                }
            } catch (...) {
                errors[size_t(r)] = std::current_exception();
                failed = true;
            }
        }
    };

    const int T = std::max(1, std::min<int>(opt.threads, int(std::min<long>(M, 1024))));
    if (T == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < T; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    for (long r = 0; r < M; ++r) {
        run.swaps += swaps[size_t(r)];
        run.max_energy_drift = std::max(run.max_energy_drift, drift[size_t(r)]);
    }
    return run;
}

std::vector<double> pair_kernel(const Profile& g, const Profile& f, long n)
{
    std::vector<double> gs(static_cast<size_t>(n)), fs(static_cast<size_t>(n)), k(size_t(n), 0.0);
    for (long z = 0; z < n; ++z) {
        gs[size_t(z)] = g(site_coord(z, n));
        fs[size_t(z)] = f(site_coord(z, n));
    }
    for (long d = 0; d < n; ++d) {
        double s = 0.0;
        for (long z = 0; z < n; ++z)
            if (gs[size_t(z)] != 0.0) s += gs[size_t(z)] * fs[size_t(wrap_index(z + d, n))];
        k[size_t(d)] = s / double(n);
    }
    return k;
}

std::vector<double> replica_values(const ReplicaRun& run, size_t j, const std::vector<double>& kernel)
{
    if (j >= run.times.size()) throw ConfigError("time index out of range");
    if (kernel.size() != run.n()) throw ConfigError("kernel size does not match the lattice");
    std::vector<double> v(size_t(run.replicas));
    for (long r = 0; r < run.replicas; ++r) {
        const double* c = run.corr_at(r, j);
        double s = 0.0;
        for (size_t d = 0; d < kernel.size(); ++d) s += kernel[d] * c[d];
        v[size_t(r)] = s;
    }
    return v;
}

std::vector<double> replica_values_direct(const ReplicaRun& run, size_t j, const Profile& g, const Profile& f)
{
    if (run.xi0.empty()) throw ConfigError("direct estimator needs kept fields");
    if (j >= run.times.size()) throw ConfigError("time index out of range");
    const long n = long(run.n());
    std::vector<double> gs(static_cast<size_t>(n)), fs(static_cast<size_t>(n));
    for (long z = 0; z < n; ++z) {
        gs[size_t(z)] = g(site_coord(z, n));
        fs[size_t(z)] = f(site_coord(z, n));
    }
    std::vector<double> v(size_t(run.replicas));
    for (long r = 0; r < run.replicas; ++r) {
        const double *a = run.xi0_at(r), *b = run.xit_at(r, j);
        double s0 = 0.0, st = 0.0;
        for (long z = 0; z < n; ++z) {
            s0 += gs[size_t(z)] * a[z];
            st += fs[size_t(z)] * b[z];
        }
        v[size_t(r)] = s0 * st / double(n);
    }
    return v;
}

double pairwise_sum(const double* v, size_t n)
{
    if (n <= 16) {
        double s = 0.0;
        for (size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    const size_t h = n / 2;
    return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

MeanErr mean_stderr(const std::vector<double>& v)
{
    if (v.size() < 2) throw ConfigError("need at least two samples");
    const double m = pairwise_sum(v.data(), v.size()) / double(v.size());
    std::vector<double> sq(v.size());
    for (size_t i = 0; i < v.size(); ++i) sq[i] = (v[i] - m) * (v[i] - m);
    const double var = pairwise_sum(sq.data(), sq.size()) / double(v.size() - 1);
    return {m, std::sqrt(var / double(v.size()))};
}

CorrelationEstimate correlate(FieldKind kind, const Profile& g, const Profile& f, double t, const ModelParams& p,
                              long M, uint64_t seed, int threads)
{
    if (M < 100) throw ConfigError("correlate needs at least 100 replicas");
    RunOptions opt;
    opt.threads = threads;
    const auto run = run_replicas(kind, kind, p, {t}, M, seed, opt);
    const auto me = mean_stderr(replica_values(run, 0, pair_kernel(g, f, p.n)));
    CorrelationEstimate e;
    e.mean = me.mean;
    e.stderr_ = me.stderr_;
    e.replicas = M;
    e.t = t;
    e.a = p.a;
    e.n = p.n;
    e.kind = kind;
    return e;
}

} // namespace lfm
