#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lfm/dynamics.hpp"

namespace lfm {

struct WindowError : ConfigError {
    using ConfigError::ConfigError;
};

// f(u) = A exp(-1 / (1 - ((u - c)/w)^2)) on |u - c| < w
struct TestFunction {
    double center = 0.0;
    double width = 0.25;
    double amplitude = 1.0;

    static TestFunction unit_mass(double center = 0.0, double width = 0.25);
    // integral of exp(-1/(1-s^2)) over (-1, 1)
    static double bump_mass();

    double operator()(double u) const;
    double d1(double u) const;
    double d2(double u) const;
    double lo() const { return center - width; }
    double hi() const { return center + width; }
    double mass() const { return amplitude * width * bump_mass(); }
    // 1-periodic extension; needs width < 1/2
    double periodic(double u) const;
};

using Profile = std::function<double(double)>;
using Profile2 = std::function<double(double, double)>;

// coordinate of site i on the ring of n sites, in [-1/2, 1/2)
double site_coord(long i, long n);
// representative of u modulo 1 in [-1/2, 1/2)
double wrap_unit(double u);

// Evaluator of f on the ring; throws WindowError when the support wraps around.
Profile on_ring(const TestFunction& f);

struct Centering {
    double v_mean = 0.0;
    double e_mean = 0.0;
    double chi = 1.0;
    double kappa = 3.0;
    double m4 = 3.0;
};

Centering centering(const ModelParams& p);

double volume_field(const Profile& f, const std::vector<double>& omega, const Centering& c);
double energy_field(const Profile& f, const std::vector<double>& omega, double gamma, const Centering& c);
// raw omega^3, or omega^3 - kappa omega when hermite is set
double volume3_field(const Profile& f, const std::vector<double>& omega, const Centering& c, bool hermite);
double quartic_field(const Profile& f, const std::vector<double>& omega, const Centering& c);
// order 2: w_x w_y, 4: H(w_x) w_y, 6: H(w_x) H(w_y) with H(u) = u^3 - kappa u; x != y
double q_field(int order, const Profile2& h, const std::vector<double>& omega, const Centering& c);

double sound_velocity_n(double chi, double gamma);
// u -> f(u - c_n t n^{a-1}) on the unit torus
Profile moving_frame(const TestFunction& f, double t, const ModelParams& p, double chi);

double norm_2n(const Profile& f, double lo, double hi, long n);
double norm_2n(const TestFunction& f, long n);
double norm_neq(const Profile2& h, double lo, double hi, long n);

// supp(g) in [-1/4, 1/4] and each probe support of length at most 1/2
void check_window(const TestFunction& g, const std::vector<TestFunction>& probes);

enum class FieldKind { Volume, Energy, Volume3, Volume3Hermite, Quartic };
std::string to_string(FieldKind k);
FieldKind field_kind_from_string(const std::string& s);

// centred single-site density of the given kind
std::vector<double> density(FieldKind k, const std::vector<double>& omega, double gamma, const Centering& c);

// Per replica r and time index j: C_rj(d) = (1/n) sum_x xi0_x xit_{x+d},
// with xi0 of kind0 at time 0 and xit of kindT after the duration t_j n^a.
struct ReplicaRun {
    FieldKind kind0 = FieldKind::Volume;
    FieldKind kindT = FieldKind::Volume;
    ModelParams params;
    std::vector<double> times;
    long replicas = 0;
    uint64_t seed = 0;
    std::vector<double> corr;
    std::vector<double> xi0, xit; // filled when fields are kept
    uint64_t swaps = 0;
    double max_energy_drift = 0.0;

    size_t n() const { return size_t(params.n); }
    const double* corr_at(long r, size_t j) const { return corr.data() + (size_t(r) * times.size() + j) * n(); }
    const double* xi0_at(long r) const { return xi0.data() + size_t(r) * n(); }
    const double* xit_at(long r, size_t j) const { return xit.data() + (size_t(r) * times.size() + j) * n(); }
};

struct RunOptions {
    int threads = 1;
    bool keep_fields = false;
    EvolveOptions evolve;
};

// times must be non-decreasing; one trajectory per replica visits all of them
ReplicaRun run_replicas(FieldKind kind0, FieldKind kindT, const ModelParams& p, const std::vector<double>& times,
                        long M, uint64_t seed, const RunOptions& opt = {});

// G(d) = (1/n) sum_z g(u_z) f(u_{z+d}); sum_d G(d) C(d) is the translation
// average of F0(g) Ft(f)
std::vector<double> pair_kernel(const Profile& g, const Profile& f, long n);

std::vector<double> replica_values(const ReplicaRun& run, size_t j, const std::vector<double>& kernel);
// F0(g) Ft(f) without translation averaging; needs kept fields
std::vector<double> replica_values_direct(const ReplicaRun& run, size_t j, const Profile& g, const Profile& f);

double pairwise_sum(const double* v, size_t n);

struct MeanErr {
    double mean = 0.0;
    double stderr_ = 0.0;
};
MeanErr mean_stderr(const std::vector<double>& v);

struct CorrelationEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    long replicas = 0;
    double t = 0.0, a = 0.0;
    int n = 0;
    FieldKind kind = FieldKind::Volume;
};

CorrelationEstimate correlate(FieldKind kind, const Profile& g, const Profile& f, double t, const ModelParams& p,
                              long M, uint64_t seed, int threads = 1);

} // namespace lfm
