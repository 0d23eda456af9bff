#include "lfm/semigroup.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lfm {

namespace {

constexpr double pi = std::numbers::pi;

template <class M>
std::vector<double> apply_multiplier(const std::vector<double>& f, const SampleGrid& g, M&& mult)
{
    const long N = long(f.size());
    if (N != g.points || N < 2) throw MeshError("sample count does not match the grid");
    auto F = dft_plus(std::vector<cplx>(f.begin(), f.end()));
    for (long k = 0; k < N; ++k) {
        const long kk = 2 * k < N ? k : k - N;
        F[size_t(k)] *= mult(double(kk) / g.span);
    }
    const auto out = dft_minus(F);
    std::vector<double> r(static_cast<size_t>(N));
    for (long j = 0; j < N; ++j) r[size_t(j)] = out[size_t(j)].real() / double(N);
    return r;
}

} // namespace

std::string to_string(SemigroupKind k)
{
    switch (k) {
    case SemigroupKind::Transport: return "transport";
    case SemigroupKind::Heat: return "heat";
    case SemigroupKind::Levy32: return "levy32";
    }
    return "?";
}

SemigroupKind semigroup_kind_from_string(const std::string& s)
{
    if (s == "transport") return SemigroupKind::Transport;
    if (s == "heat") return SemigroupKind::Heat;
    if (s == "levy32") return SemigroupKind::Levy32;
    throw ConfigError("unknown semigroup '" + s + "'");
}

cplx levy32_symbol(double xi)
{
    const double s = xi > 0 ? 1.0 : (xi < 0 ? -1.0 : 0.0);
    return -2.0 * std::pow(std::abs(pi * xi), 1.5) * cplx(1.0, s);
}

cplx semigroup_symbol(SemigroupKind k, double xi)
{
    switch (k) {
    case SemigroupKind::Transport: return {0.0, 4 * pi * xi}; // f(u - 2t)
    case SemigroupKind::Heat: return {-4 * pi * pi * xi * xi, 0.0};
    case SemigroupKind::Levy32: return levy32_symbol(xi);
    }
    return 0.0;
}

double kernel_spread(SemigroupKind k, double t)
{
    switch (k) {
    case SemigroupKind::Transport: return 2 * t;
    case SemigroupKind::Heat: return std::sqrt(2 * t);
    case SemigroupKind::Levy32: return std::pow(t, 2.0 / 3.0);
    }
    return 0.0;
}

std::vector<double> semigroup_apply(SemigroupKind k, double t, const std::vector<double>& f, const SampleGrid& g)
{
    if (t < 0) throw ConfigError("semigroup time must be non-negative");
    if (!g.periodic && g.span < 8 * kernel_spread(k, t))
        throw MeshError("grid span " + std::to_string(g.span) + " is below 8x the kernel spread at t=" + std::to_string(t));
    if (t == 0) return f;
    return apply_multiplier(f, g, [&](double xi) { return std::exp(t * semigroup_symbol(k, xi)); });
}

std::vector<double> semigroup_apply(SemigroupKind k, double t, const Profile& f, const SampleGrid& g)
{
    std::vector<double> s(size_t(g.points));
    for (long j = 0; j < g.points; ++j) s[size_t(j)] = f(g.at(j));
    return semigroup_apply(k, t, s, g);
}

std::vector<double> semigroup_on_torus(SemigroupKind k, double t, const TestFunction& f, long n)
{
    long m = 1;
    while (n * m < (1L << 14)) m *= 2;
    const SampleGrid g{-0.5, 1.0, n * m, true};
    const auto p = semigroup_apply(k, t, on_ring(f), g);
    // site_coord(x, n) = x/n for x < n/2, x/n - 1 otherwise; grid index of u is (u + 1/2) n m
    std::vector<double> out(static_cast<size_t>(n));
    for (long x = 0; x < n; ++x) {
        const long j = (x < n / 2 ? x + n / 2 : x - n / 2) * m;
        out[size_t(x)] = p[size_t(j)];
    }
    return out;
}

std::vector<double> levy32_generator(const std::vector<double>& f, const SampleGrid& g)
{
    return apply_multiplier(f, g, levy32_symbol);
}

} // namespace lfm
