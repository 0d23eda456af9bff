#pragma once

#include <string>
#include <vector>

#include "lfm/fields.hpp"
#include "lfm/spectral.hpp"

namespace lfm {

enum class SemigroupKind { Transport, Heat, Levy32 };
std::string to_string(SemigroupKind k);
SemigroupKind semigroup_kind_from_string(const std::string& s);

// log-multiplier under the e^{+2i pi xi u} transform: P_t = e^{t psi(xi)}
cplx semigroup_symbol(SemigroupKind k, double xi);
// -2 |pi xi|^{3/2} (1 + i sgn xi), the symbol of the skew 3/2 generator
cplx levy32_symbol(double xi);

// Sample grid u_j = lo + j span / points. Periodic grids wrap; line grids must be
// wide enough that the kernel does not wrap around.
struct SampleGrid {
    double lo = -0.5;
    double span = 1.0;
    long points = 4096;
    bool periodic = true;
    double at(long j) const { return lo + span * double(j) / double(points); }
};

// rough width of the kernel at time t
double kernel_spread(SemigroupKind k, double t);

std::vector<double> semigroup_apply(SemigroupKind k, double t, const std::vector<double>& f, const SampleGrid& g);
std::vector<double> semigroup_apply(SemigroupKind k, double t, const Profile& f, const SampleGrid& g);

// (P_t f) at the sites site_coord(x, n) of the unit torus
std::vector<double> semigroup_on_torus(SemigroupKind k, double t, const TestFunction& f, long n);

// the generator L of the levy32 semigroup applied through its multiplier
std::vector<double> levy32_generator(const std::vector<double>& f, const SampleGrid& g);

} // namespace lfm
