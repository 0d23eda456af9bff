#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lfm/equilibrium.hpp"
#include "lfm/fields.hpp"
#include "lfm/semigroup.hpp"

namespace lfm {

struct ExperimentConfig {
    std::string experiment = "theorem1"; // theorem1|theorem2|theorem3|simulate|<suite>
    ModelParams params;
    FieldKind field = FieldKind::Volume;
    SemigroupKind reference = SemigroupKind::Transport;
    bool moving_frame = false;
    std::vector<double> times;      // macroscopic times; t = 0 is always measured
    std::vector<double> f_centers;  // empty: experiment default
    double g_center = 0.0;
    double g_width = 0.08;
    double f_width = 0.08;
    long replicas = 1000;
    uint64_t seed = 1;
    int threads = 1;
    bool universality_run = false;  // theorem3: repeat at gamma = 0
    std::string out_dir;
    std::string format = "csv";
};

// Flat key=value text; "[name]" starts the section for experiment `name`.
// Keys outside any section apply to every experiment.
ExperimentConfig parse_config(const std::string& text, const std::string& experiment);
ExperimentConfig load_config(const std::string& path, const std::string& experiment);
// defaults for the named experiment before any file is read
ExperimentConfig default_config(const std::string& experiment);
void validate(const ExperimentConfig& c);

struct ResultRow {
    std::string experiment;
    long n = 0;
    double a = 0, b = 0, gamma_n = 0, beta = 0, t = 0, f_center = 0;
    double estimate = 0, stderr_ = 0, reference = 0, zscore = 0;
    long replicas = 0;
    uint64_t seed = 0;
};

struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct RunReport {
    ExperimentConfig config;
    std::vector<ResultRow> rows;
    std::vector<Check> checks;
    std::map<std::string, double> metrics; // named scalar summaries
    std::map<std::string, std::string> notes;
    double wall_clock = 0.0;
    std::string version;
    bool passed() const;
};

std::string version_string();

RunReport run_theorem(const ExperimentConfig& c);
RunReport run_simulation(const ExperimentConfig& c);
RunReport run_suite(const std::string& kind);

std::string to_csv(const RunReport& r);
std::string to_json(const RunReport& r);
// writes <out_dir>/<experiment>.<format>; returns the path
std::string emit(const RunReport& r, const std::string& out_dir, const std::string& format);

// profile summaries used by the theorem-3 trend check
struct ProfileShape {
    double center = 0.0; // first moment over the centers
    double width = 0.0;  // second central moment, square-rooted
};
ProfileShape profile_shape(const std::vector<double>& centers, const std::vector<double>& values);
double profile_distance(const std::vector<double>& a, const std::vector<double>& b);
// vertex of the parabola through the largest sample and its neighbours
double peak_location(const std::vector<double>& centers, const std::vector<double>& values);

} // namespace lfm
