#include <fstream>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "lfm/harness.hpp"

namespace lfm {

namespace {

namespace pt = boost::property_tree;

std::vector<double> parse_list(const std::string& s)
{
    std::vector<std::string> parts;
    boost::split(parts, s, boost::is_any_of(", "), boost::token_compress_on);
    std::vector<double> out;
    for (auto& p : parts) {
        boost::trim(p);
        if (p.empty()) continue;
        try {
            size_t used = 0;
            out.push_back(std::stod(p, &used));
            if (used != p.size()) throw std::invalid_argument(p);
        } catch (const std::exception&) {
            throw ConfigError("not a number: '" + p + "'");
        }
    }
    return out;
}

template <class T>
T number(const std::string& key, const std::string& v)
{
    std::istringstream is(v);
    T x{};
    is >> x;
    if (!is || !is.eof()) throw ConfigError("bad value for " + key + ": '" + v + "'");
    return x;
}

bool boolean(const std::string& key, const std::string& v)
{
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("bad boolean for " + key + ": '" + v + "'");
}

void apply(ExperimentConfig& c, const std::string& key, std::string v)
{
    boost::trim(v);
    auto& p = c.params;
    if (key == "n") p.n = number<int>(key, v);
    else if (key == "a") p.a = number<double>(key, v);
    else if (key == "beta") p.beta = number<double>(key, v);
    else if (key == "tau") p.tau = number<double>(key, v);
    else if (key == "gamma") {
        p.gamma = number<double>(key, v);
        p.schedule.reset();
    } else if (key == "b") {
        GammaSchedule s = p.schedule.value_or(GammaSchedule{1.0, 1.0});
        s.b = number<double>(key, v);
        p.schedule = s;
    } else if (key == "gamma_c") {
        GammaSchedule s = p.schedule.value_or(GammaSchedule{1.0, 1.0});
        s.c = number<double>(key, v);
        p.schedule = s;
    } else if (key == "field") c.field = field_kind_from_string(v);
    else if (key == "reference") c.reference = semigroup_kind_from_string(v);
    else if (key == "moving_frame") c.moving_frame = boolean(key, v);
    else if (key == "times") c.times = parse_list(v);
    else if (key == "f_centers") c.f_centers = parse_list(v);
    else if (key == "g_center") c.g_center = number<double>(key, v);
    else if (key == "g_width") c.g_width = number<double>(key, v);
    else if (key == "f_width") c.f_width = number<double>(key, v);
    else if (key == "replicas") c.replicas = number<long>(key, v);
    else if (key == "seed") c.seed = number<uint64_t>(key, v);
    else if (key == "threads") c.threads = number<int>(key, v);
    else if (key == "universality_run") c.universality_run = boolean(key, v);
    else if (key == "out") c.out_dir = v;
    else if (key == "format") c.format = v;
    else throw ConfigError("unknown config key '" + key + "'");
}

} // namespace

ExperimentConfig default_config(const std::string& experiment)
{
    ExperimentConfig c;
    c.experiment = experiment;
    auto& p = c.params;
    if (experiment == "theorem1") {
        p.n = 256;
        p.a = 1.0;
        p.gamma = 1e-2;
        c.times = {0.05, 0.1, 0.15};
        c.replicas = 10000;
        c.reference = SemigroupKind::Transport;
    } else if (experiment == "theorem2") {
        p.n = 128;
        p.a = 2.0;
        p.schedule = GammaSchedule{1.0, 1.0};
        c.times = {0.25};
        c.replicas = 5000;
        c.reference = SemigroupKind::Heat;
        c.moving_frame = true;
        c.g_width = c.f_width = 0.1;
        c.f_centers = {-0.35, -0.25, -0.15, -0.05, 0.05, 0.15, 0.25, 0.35};
    } else if (experiment == "theorem3") {
        p.n = 128;
        p.a = 1.5;
        p.schedule = GammaSchedule{1.0, 0.5};
        c.field = FieldKind::Energy;
        c.times = {0.2};
        c.replicas = 5000;
        c.reference = SemigroupKind::Levy32;
        c.universality_run = true;
        c.g_width = c.f_width = 0.1;
        c.f_centers = {-0.4, -0.3, -0.2, -0.1, 0.0, 0.1, 0.2, 0.3, 0.4};
    } else if (experiment == "simulate") {
        p.n = 64;
        c.times = {0.1};
        c.replicas = 200;
    }
    p.refresh();
    return c;
}

ExperimentConfig parse_config(const std::string& text, const std::string& experiment)
{
    pt::ptree tree;
    std::istringstream is(text);
    try {
        pt::read_ini(is, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    ExperimentConfig c = default_config(experiment);
    for (const auto& [key, node] : tree)
        if (node.empty()) apply(c, key, node.data());
    if (auto sec = tree.get_child_optional(experiment))
        for (const auto& [key, node] : *sec) apply(c, key, node.data());
    c.params.refresh();
    validate(c);
    return c;
}

ExperimentConfig load_config(const std::string& path, const std::string& experiment)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), experiment);
}

void validate(const ExperimentConfig& c)
{
    c.params.validate();
    const bool theorem = c.experiment.rfind("theorem", 0) == 0;
    if (theorem && c.replicas < 100) throw ConfigError("theorem experiments need at least 100 replicas");
    if (c.replicas < 1) throw ConfigError("replica count must be positive");
    if (c.threads < 1) throw ConfigError("thread count must be positive");
    if (c.format != "csv" && c.format != "json") throw ConfigError("format must be csv or json");
    for (size_t i = 0; i < c.times.size(); ++i)
        if (c.times[i] < 0 || (i > 0 && c.times[i] < c.times[i - 1]))
            throw ConfigError("times must be non-negative and non-decreasing");
    std::vector<TestFunction> probes;
    for (double x : c.f_centers) probes.push_back(TestFunction::unit_mass(x, c.f_width));
    check_window(TestFunction::unit_mass(c.g_center, c.g_width), probes);
    for (const auto& f : probes) on_ring(f); // throws when the support leaves the torus window
}

} // namespace lfm
