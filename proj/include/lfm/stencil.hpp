#pragma once

// Unscaled lattice stencils on the periodic ring Z_N and torus Z_N^2.
// The mesh-scaled operators of the spectral module are multiples of these.

#include <cstddef>
#include <vector>

namespace lfm {

inline long wrap_index(long x, long N)
{
    x %= N;
    return x < 0 ? x + N : x;
}

struct Grid1 {
    long N = 0;
    std::vector<double> v;

    Grid1() = default;
    explicit Grid1(long n) : N(n), v(size_t(n), 0.0) {}
    double& operator()(long x) { return v[size_t(wrap_index(x, N))]; }
    double operator()(long x) const { return v[size_t(wrap_index(x, N))]; }
};

struct Grid2 {
    long N = 0;
    std::vector<double> v;

    Grid2() = default;
    explicit Grid2(long n) : N(n), v(size_t(n * n), 0.0) {}
    double& operator()(long x, long y) { return v[size_t(wrap_index(x, N) * N + wrap_index(y, N))]; }
    double operator()(long x, long y) const { return v[size_t(wrap_index(x, N) * N + wrap_index(y, N))]; }
};

namespace stencil {

// f(x+1) - f(x)
inline Grid1 grad(const Grid1& f)
{
    Grid1 r(f.N);
    for (long x = 0; x < f.N; ++x) r(x) = f(x + 1) - f(x);
    return r;
}

inline Grid1 lap(const Grid1& f)
{
    Grid1 r(f.N);
    for (long x = 0; x < f.N; ++x) r(x) = f(x + 1) + f(x - 1) - 2 * f(x);
    return r;
}

inline Grid2 grad_delta(const Grid1& f)
{
    Grid2 r(f.N);
    for (long x = 0; x < f.N; ++x) {
        r(x, x + 1) = 0.5 * (f(x + 1) - f(x));
        r(x, x - 1) = 0.5 * (f(x) - f(x - 1));
    }
    return r;
}

inline Grid2 lap(const Grid2& h)
{
    Grid2 r(h.N);
    for (long x = 0; x < h.N; ++x)
        for (long y = 0; y < h.N; ++y)
            r(x, y) = h(x + 1, y) + h(x - 1, y) + h(x, y + 1) + h(x, y - 1) - 4 * h(x, y);
    return r;
}

// gradient along the diagonal, placed on the two first off-diagonals
inline Grid2 diag_grad(const Grid2& h)
{
    Grid2 r(h.N);
    for (long x = 0; x < h.N; ++x) {
        r(x, x + 1) = 0.5 * (h(x + 1, x + 1) - h(x, x));
        r(x, x - 1) = 0.5 * (h(x, x) - h(x - 1, x - 1));
    }
    return r;
}

inline Grid2 advect(const Grid2& h)
{
    Grid2 r(h.N);
    for (long x = 0; x < h.N; ++x)
        for (long y = 0; y < h.N; ++y)
            r(x, y) = h(x - 1, y) + h(x, y - 1) - h(x + 1, y) - h(x, y + 1);
    return r;
}

// h(x, x+1) - h(x-1, x)
inline Grid1 diag_d(const Grid2& h)
{
    Grid1 r(h.N);
    for (long x = 0; x < h.N; ++x) r(x) = h(x, x + 1) - h(x - 1, x);
    return r;
}

inline Grid2 diag_d_tilde(const Grid2& h)
{
    Grid2 r(h.N);
    for (long x = 0; x < h.N; ++x) {
        r(x, x + 1) = h(x, x + 1) - h(x, x);
        r(x, x - 1) = h(x - 1, x) - h(x - 1, x - 1);
    }
    return r;
}

inline Grid2 b_op(const Grid2& h)
{
    Grid2 r(h.N);
    for (long x = 0; x < h.N; ++x)
        for (long y = 0; y < h.N; ++y) {
            double v = h(x - 1, y) - h(x + 1, y);
            if (wrap_index(y - x, h.N) == 1) v += h(y, y);
            if (wrap_index(x - y, h.N) == 1) v -= h(y, y);
            r(x, y) = v;
        }
    return r;
}

} // namespace stencil
} // namespace lfm
