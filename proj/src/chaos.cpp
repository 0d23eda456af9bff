#include "lfm/chaos.hpp"

#include <algorithm>
#include <complex>
#include <set>

#include <boost/math/quadrature/gauss.hpp>

namespace lfm {

double OrthoBasis::eval(int k, double u) const
{
    const auto& c = coeffs.at(k);
    double acc = 0.0;
    for (int j = int(c.size()) - 1; j >= 0; --j) acc = acc * u + c[j];
    return acc;
}

OrthoBasis build_basis(double gamma, int kmax)
{
    if (kmax < 0 || kmax > 8) throw ConfigError("kmax must lie in [0, 8]");
    const Gibbs w(1.0, 0.0, gamma);
    OrthoBasis b;
    b.gamma = gamma;
    b.coeffs.push_back({1.0});
    b.norms.push_back(1.0);
    // Stieltjes form of Gram-Schmidt: orthogonalise u*H_{k-1} against H_0..H_{k-1}
    for (int k = 1; k <= kmax; ++k) {
        std::vector<double> c(k + 1, 0.0);
        for (int j = 0; j < k; ++j) c[j + 1] = b.coeffs[k - 1][j];
        for (int pass = 0; pass < 2; ++pass) {
            auto cur = c;
            auto poly = [&cur](double u) {
                double acc = 0.0;
                for (int j = int(cur.size()) - 1; j >= 0; --j) acc = acc * u + cur[j];
                return acc;
            };
            for (int j = 0; j < k; ++j) {
                const double proj = w.expect([&](double u) { return poly(u) * b.eval(j, u); }) / b.norms[j];
                for (size_t i = 0; i < b.coeffs[j].size(); ++i) c[i] -= proj * b.coeffs[j][i];
            }
        }
        b.coeffs.push_back(c);
        b.norms.push_back(w.expect([&](double u) {
            const double h = b.eval(k, u);
            return h * h;
        }));
    }
    for (int j = 0; j <= kmax; ++j)
        for (int k = 0; k < j; ++k) {
            const double ip = w.expect([&](double u) { return b.eval(j, u) * b.eval(k, u); });
            if (std::fabs(ip) > 1e-8) throw NumericalError("loss of orthogonality in Gram-Schmidt");
        }
    return b;
}

int degree(const Occupation& s)
{
    int d = 0;
    for (const auto& [x, m] : s) d += m;
    return d;
}

namespace {

long wrap(long x, long period)
{
    if (period <= 0) return x;
    x %= period;
    return x < 0 ? x + period : x;
}

int count_at(const Occupation& s, long x)
{
    const auto it = s.find(x);
    return it == s.end() ? 0 : it->second;
}

std::vector<long> bonds_touching(const Occupation& s, long period)
{
    std::set<long> out;
    for (const auto& [x, m] : s) {
        out.insert(wrap(x - 1, period));
        out.insert(wrap(x, period));
    }
    return {out.begin(), out.end()};
}

std::set<Occupation> closure(const ChaosCoefficients& psi)
{
    std::set<Occupation> cand;
    for (const auto& [s, v] : psi.psi) {
        cand.insert(s);
        for (long x : bonds_touching(s, psi.period)) cand.insert(swapped(s, x, psi.period));
    }
    return cand;
}

} // namespace

Occupation swapped(const Occupation& s, long x, long period)
{
    x = wrap(x, period);
    const long y = wrap(x + 1, period);
    const int a = count_at(s, x), b = count_at(s, y);
    if (a == b) return s;
    Occupation out = s;
    out.erase(x);
    out.erase(y);
    if (b > 0) out[x] = b;
    if (a > 0) out[y] = a;
    return out;
}

double ChaosCoefficients::at(const Occupation& s) const
{
    const auto it = psi.find(s);
    return it == psi.end() ? 0.0 : it->second;
}

std::vector<long> ChaosCoefficients::active_bonds() const
{
    std::set<long> out;
    for (const auto& [s, v] : psi)
        for (long x : bonds_touching(s, period)) out.insert(x);
    return {out.begin(), out.end()};
}

double poly_norm(const Occupation& s, const OrthoBasis& basis)
{
    double prod = 1.0;
    for (const auto& [x, m] : s) {
        if (m > basis.kmax()) throw ConfigError("occupation multiplicity exceeds basis kmax");
        prod *= basis.norms[m];
    }
    return prod;
}

ChaosCoefficients noise_on_chaos(const ChaosCoefficients& psi, long x)
{
    ChaosCoefficients out{psi.degree, psi.period, {}};
    for (const auto& s : closure(psi)) {
        const double d = psi.at(swapped(s, x, psi.period)) - psi.at(s);
        if (d != 0.0) out.psi[s] = d;
    }
    return out;
}

ChaosCoefficients carre(const ChaosCoefficients& psi)
{
    ChaosCoefficients out{psi.degree, psi.period, {}};
    for (const auto& s : closure(psi)) {
        double acc = 0.0;
        for (long x : bonds_touching(s, psi.period)) acc += psi.at(swapped(s, x, psi.period)) - psi.at(s);
        if (acc != 0.0) out.psi[s] = acc;
    }
    return out;
}

namespace {

template <class Weight>
double dirichlet_impl(const ChaosCoefficients& psi, Weight weight)
{
    double acc = 0.0;
    for (const auto& s : closure(psi)) {
        const double w = weight(s);
        for (long x : bonds_touching(s, psi.period)) {
            const double d = psi.at(swapped(s, x, psi.period)) - psi.at(s);
            acc += w * d * d;
        }
    }
    return 0.5 * acc;
}

} // namespace

double dirichlet_form(const ChaosCoefficients& psi, const OrthoBasis& basis)
{
    return dirichlet_impl(psi, [&](const Occupation& s) { return poly_norm(s, basis); });
}

double dirichlet_form_unweighted(const ChaosCoefficients& psi)
{
    return dirichlet_impl(psi, [](const Occupation&) { return 1.0; });
}

ChaosCoefficients chaos_from_pairs(const PairMap& F, int p, int q)
{
    ChaosCoefficients out{p + q, 0, {}};
    for (const auto& [xy, v] : F) {
        if (xy.first == xy.second) continue;
        Occupation s;
        s[xy.first] += p;
        s[xy.second] += q;
        out.psi[s] += v;
    }
    return out;
}

ExtendedG extend_and_d0(const PairMap& F)
{
    ExtendedG r{{}, 0.0, 0, 0};
    if (F.empty()) return r;
    long lo = F.begin()->first.first, hi = lo;
    for (const auto& [xy, v] : F) {
        if (xy.first == xy.second && v != 0.0) throw ConfigError("F must vanish on the diagonal");
        lo = std::min({lo, xy.first, xy.second});
        hi = std::max({hi, xy.first, xy.second});
    }
    r.lo = lo - 2;
    r.hi = hi + 2;
    const long w = r.hi - r.lo + 1;
    std::vector<double> g(size_t(w * w), 0.0);
    auto at = [&](long x, long y) -> double& { return g[size_t((x - r.lo) * w + (y - r.lo))]; };
    auto get = [&](long x, long y) {
        if (x < r.lo || x > r.hi || y < r.lo || y > r.hi) return 0.0;
        return at(x, y);
    };
    for (const auto& [xy, v] : F)
        if (xy.first != xy.second) at(xy.first, xy.second) = v;
    // the four neighbours of a diagonal point are all off the diagonal
    for (long x = r.lo; x <= r.hi; ++x)
        at(x, x) = 0.25 * (get(x + 1, x) + get(x - 1, x) + get(x, x + 1) + get(x, x - 1));

    double d0 = 0.0;
    const long dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
    for (long x = r.lo - 1; x <= r.hi + 1; ++x)
        for (long y = r.lo - 1; y <= r.hi + 1; ++y)
            for (int e = 0; e < 4; ++e) {
                const double d = get(x + dx[e], y + dy[e]) - get(x, y);
                d0 += d * d;
            }
    r.D0 = d0;
    for (long x = r.lo; x <= r.hi; ++x)
        for (long y = r.lo; y <= r.hi; ++y)
            if (get(x, y) != 0.0) r.G[{x, y}] = get(x, y);
    return r;
}

namespace {

// panel breakpoints on [-1/2, 1/2], geometrically graded towards 0 down to scale s
std::vector<double> graded_breaks(double s)
{
    std::vector<double> pos;
    for (double b = 0.5; b > s; b *= 0.5) pos.push_back(b);
    pos.push_back(s);
    std::vector<double> br;
    for (auto it = pos.begin(); it != pos.end(); ++it) br.push_back(-*it);
    br.push_back(0.0);
    for (auto it = pos.rbegin(); it != pos.rend(); ++it) br.push_back(*it);
    std::sort(br.begin(), br.end());
    return br;
}

} // namespace

double h_minus_one_bound(const PairMap& F, double z)
{
    if (!(z > 0)) throw ConfigError("z must be positive");
    if (F.empty()) return 0.0;
    for (const auto& [xy, v] : F)
        if (xy.first == xy.second && v != 0.0) throw ConfigError("F must vanish on the diagonal");

    using GL = boost::math::quadrature::gauss<double, 20>;
    const double s = (z < 1e-4) ? std::sqrt(z) / 8 : 1.0 / 64;
    const auto br = graded_breaks(s);
    std::vector<double> nodes, weights;
    for (size_t i = 0; i + 1 < br.size(); ++i) {
        const double a = br[i], b = br[i + 1], c = 0.5 * (a + b), h = 0.5 * (b - a);
        const auto& ab = GL::abscissa();
        const auto& wt = GL::weights();
        for (size_t j = 0; j < ab.size(); ++j) {
            if (ab[j] == 0.0) {
                nodes.push_back(c);
                weights.push_back(h * wt[j]);
            } else {
                nodes.push_back(c - h * ab[j]);
                weights.push_back(h * wt[j]);
                nodes.push_back(c + h * ab[j]);
                weights.push_back(h * wt[j]);
            }
        }
    }

    // F^(k,l) = sum_y e^{2i pi l y} sum_x F(x,y) e^{2i pi k x}
    std::vector<long> xs, ys;
    for (const auto& [xy, v] : F) {
        xs.push_back(xy.first);
        ys.push_back(xy.second);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    auto index = [](const std::vector<long>& v, long x) { return size_t(std::lower_bound(v.begin(), v.end(), x) - v.begin()); };

    const size_t m = nodes.size();
    using cd = std::complex<double>;
    // A[i][y] = sum_x F(x,y) e^{2i pi k_i x}
    std::vector<cd> A(m * ys.size(), cd(0));
    for (size_t i = 0; i < m; ++i)
        for (const auto& [xy, v] : F) {
            if (xy.first == xy.second) continue;
            A[i * ys.size() + index(ys, xy.second)] += v * std::polar(1.0, 2 * M_PI * nodes[i] * double(xy.first));
        }
    std::vector<cd> ey(m * ys.size());
    for (size_t j = 0; j < m; ++j)
        for (size_t t = 0; t < ys.size(); ++t) ey[j * ys.size() + t] = std::polar(1.0, 2 * M_PI * nodes[j] * double(ys[t]));

    double total = 0.0;
    for (size_t i = 0; i < m; ++i) {
        const double sk = std::sin(M_PI * nodes[i]);
        for (size_t j = 0; j < m; ++j) {
            cd acc(0);
            for (size_t t = 0; t < ys.size(); ++t) acc += A[i * ys.size() + t] * ey[j * ys.size() + t];
            const double sl = std::sin(M_PI * nodes[j]);
            total += weights[i] * weights[j] * std::norm(acc) / (z + 4 * sk * sk + 4 * sl * sl);
        }
    }
    return total;
}

} // namespace lfm
