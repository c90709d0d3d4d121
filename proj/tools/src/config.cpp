#include "sedcat/app/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "sedcat/errors.hpp"
#include "sedcat/qm/grid.hpp"

namespace sedcat::app {

namespace {

std::string located(const std::string& field, const std::string& message, int line, int column)
{
    std::string s;
    if (line > 0) {
        s = "line " + std::to_string(line) + ", column " + std::to_string(column) + ": ";
    }
    if (!field.empty()) {
        s += field + ": ";
    }
    return s + message;
}

[[noreturn]] void fail_at(const YAML::Node& node, const std::string& field, const std::string& message)
{
    const YAML::Mark m = node.Mark();
    throw ConfigError(field, message, m.is_null() ? 0 : m.line + 1, m.is_null() ? 0 : m.column + 1);
}

[[noreturn]] void fail(const std::string& field, const std::string& message)
{
    throw ConfigError(field, message);
}

std::string scalar(const YAML::Node& node, const std::string& field)
{
    if (!node.IsScalar()) {
        fail_at(node, field, "expected a scalar value");
    }
    return node.Scalar();
}

void read(const YAML::Node& node, const std::string& field, double& out)
{
    const std::string s = scalar(node, field);
    double v = 0.0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || end != s.data() + s.size()) {
        fail_at(node, field, "expected a number, got '" + s + "'");
    }
    out = v;
}

// std::size_t and std::uint64_t coincide on the supported platforms.
void read(const YAML::Node& node, const std::string& field, std::uint64_t& out)
{
    const std::string s = scalar(node, field);
    std::uint64_t v = 0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || end != s.data() + s.size()) {
        fail_at(node, field, "expected a non-negative integer, got '" + s + "'");
    }
    out = v;
}

void read(const YAML::Node& node, const std::string& field, unsigned& out)
{
    std::uint64_t v = 0;
    read(node, field, v);
    if (v > 4096) {
        fail_at(node, field, "thread count above 4096");
    }
    out = static_cast<unsigned>(v);
}

void read(const YAML::Node& node, const std::string& field, bool& out)
{
    const std::string s = scalar(node, field);
    if (s == "true") {
        out = true;
    } else if (s == "false") {
        out = false;
    } else {
        fail_at(node, field, "expected true or false, got '" + s + "'");
    }
}

void read(const YAML::Node& node, const std::string& field, std::string& out)
{
    out = scalar(node, field);
}

// Field table of one section: key -> reader bound to the target member.
using Readers = std::map<std::string, std::function<void(const YAML::Node&, const std::string&)>>;

void bind_field(Readers& r, const std::string& key, double& target)
{
    r[key] = [&target](const YAML::Node& n, const std::string& f) { read(n, f, target); };
}

void bind_field(Readers& r, const std::string& key, std::uint64_t& target)
{
    r[key] = [&target](const YAML::Node& n, const std::string& f) { read(n, f, target); };
}

void bind_field(Readers& r, const std::string& key, unsigned& target)
{
    r[key] = [&target](const YAML::Node& n, const std::string& f) { read(n, f, target); };
}

void bind_field(Readers& r, const std::string& key, bool& target)
{
    r[key] = [&target](const YAML::Node& n, const std::string& f) { read(n, f, target); };
}

void bind_field(Readers& r, const std::string& key, std::string& target)
{
    r[key] = [&target](const YAML::Node& n, const std::string& f) { read(n, f, target); };
}

void read_section(const YAML::Node& node, const std::string& section, const Readers& readers)
{
    if (node.IsNull()) {
        return;
    }
    if (!node.IsMap()) {
        fail_at(node, section, "expected a mapping");
    }
    for (const auto& kv : node) {
        const std::string key = kv.first.as<std::string>();
        const auto it = readers.find(key);
        if (it == readers.end()) {
            fail_at(kv.first, section + "." + key, "unknown key");
        }
        it->second(kv.second, section + "." + key);
    }
}

std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Double-quoted YAML scalar, so any path reads back as the same string.
std::string quoted(const std::string& v)
{
    std::string s = "\"";
    for (char ch : v) {
        if (ch == '"' || ch == '\\') {
            s += '\\';
        }
        s += ch;
    }
    return s + "\"";
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

void require(bool ok, const std::string& field, const std::string& message)
{
    if (!ok) {
        fail(field, message);
    }
}

}  // namespace

ConfigError::ConfigError(std::string field, std::string message, int line, int column)
    : std::runtime_error(located(field, message, line, column)),
      field_(std::move(field)),
      line_(line),
      column_(column)
{
}

const std::vector<std::string>& scenario_names()
{
    static const std::vector<std::string> names = {"qm-run",      "sed-run", "validate-appendix",
                                                   "calibrate-zpf", "analyze", "compare",
                                                   "paper-repro"};
    return names;
}

ExperimentConfig parse_config(std::string_view text)
{
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    } catch (const YAML::Exception& e) {
        throw ConfigError("", e.msg, e.mark.is_null() ? 0 : e.mark.line + 1,
                          e.mark.is_null() ? 0 : e.mark.column + 1);
    }
    ExperimentConfig c;
    if (root.IsNull()) {
        validate_config(c);
        return c;
    }
    if (!root.IsMap()) {
        fail_at(root, "", "top level must be a mapping of sections");
    }

    std::map<std::string, Readers> sections;
    auto& o = sections["oscillator"];
    bind_field(o, "mass", c.oscillator.mass);
    bind_field(o, "charge", c.oscillator.charge);
    bind_field(o, "omega0", c.oscillator.omega0);
    auto& l = sections["laser"];
    bind_field(l, "omega1", c.laser.omega1);
    bind_field(l, "omega2", c.laser.omega2);
    bind_field(l, "a1", c.laser.a1);
    bind_field(l, "a2", c.laser.a2);
    bind_field(l, "tau", c.laser.tau);
    auto& g = sections["grid"];
    bind_field(g, "half_width_dx", c.grid.half_width_dx);
    bind_field(g, "points", c.grid.points);
    bind_field(g, "steps_per_period", c.grid.steps_per_period);
    bind_field(g, "fock_n_max", c.grid.fock_n_max);
    auto& z = sections["zpf"];
    bind_field(z, "band_low", c.zpf.band_low);
    bind_field(z, "band_high", c.zpf.band_high);
    bind_field(z, "modes", c.zpf.modes);
    bind_field(z, "spatial", c.zpf.spatial);
    auto& e = sections["ensemble"];
    bind_field(e, "particles", c.ensemble.particles);
    bind_field(e, "preparation", c.ensemble.preparation);
    bind_field(e, "relax_time", c.ensemble.relax_time);
    bind_field(e, "threads", c.ensemble.threads);
    auto& a = sections["analysis"];
    bind_field(a, "bins", c.analysis.bins);
    bind_field(a, "histogram_half_width_dx", c.analysis.histogram_half_width_dx);
    bind_field(a, "peak_over_median", c.analysis.peak_over_median);
    bind_field(a, "valley_fraction", c.analysis.valley_fraction);
    bind_field(a, "fringe_window_periods", c.analysis.fringe_window_periods);
    auto& r = sections["run"];
    bind_field(r, "scenario", c.run.scenario);
    bind_field(r, "seed", c.run.seed);
    bind_field(r, "output", c.run.output);
    bind_field(r, "snapshot_every", c.run.snapshot_every);

    for (const auto& kv : root) {
        const std::string key = kv.first.as<std::string>();
        const auto it = sections.find(key);
        if (it == sections.end()) {
            fail_at(kv.first, key, "unknown section");
        }
        read_section(kv.second, key, it->second);
    }
    validate_config(c);
    return c;
}

std::string serialize_config(const ExperimentConfig& c)
{
    std::ostringstream s;
    s << "oscillator:\n"
      << "  mass: " << num(c.oscillator.mass) << "\n"
      << "  charge: " << num(c.oscillator.charge) << "\n"
      << "  omega0: " << num(c.oscillator.omega0) << "\n"
      << "laser:\n"
      << "  omega1: " << num(c.laser.omega1) << "\n"
      << "  omega2: " << num(c.laser.omega2) << "\n"
      << "  a1: " << num(c.laser.a1) << "\n"
      << "  a2: " << num(c.laser.a2) << "\n"
      << "  tau: " << num(c.laser.tau) << "\n"
      << "grid:\n"
      << "  half_width_dx: " << num(c.grid.half_width_dx) << "\n"
      << "  points: " << c.grid.points << "\n"
      << "  steps_per_period: " << num(c.grid.steps_per_period) << "\n"
      << "  fock_n_max: " << c.grid.fock_n_max << "\n"
      << "zpf:\n"
      << "  band_low: " << num(c.zpf.band_low) << "\n"
      << "  band_high: " << num(c.zpf.band_high) << "\n"
      << "  modes: " << c.zpf.modes << "\n"
      << "  spatial: " << (c.zpf.spatial ? "true" : "false") << "\n"
      << "ensemble:\n"
      << "  particles: " << c.ensemble.particles << "\n"
      << "  preparation: " << c.ensemble.preparation << "\n"
      << "  relax_time: " << num(c.ensemble.relax_time) << "\n"
      << "  threads: " << c.ensemble.threads << "\n"
      << "analysis:\n"
      << "  bins: " << c.analysis.bins << "\n"
      << "  histogram_half_width_dx: " << num(c.analysis.histogram_half_width_dx) << "\n"
      << "  peak_over_median: " << num(c.analysis.peak_over_median) << "\n"
      << "  valley_fraction: " << num(c.analysis.valley_fraction) << "\n"
      << "  fringe_window_periods: " << num(c.analysis.fringe_window_periods) << "\n"
      << "run:\n"
      << "  scenario: " << c.run.scenario << "\n"
      << "  seed: " << c.run.seed << "\n"
      << "  output: " << quoted(c.run.output) << "\n"
      << "  snapshot_every: " << c.run.snapshot_every << "\n";
    return s.str();
}

void validate_config(const ExperimentConfig& c)
{
    const auto& o = c.oscillator;
    require(positive(o.mass), "oscillator.mass", "must be positive and finite");
    require(std::isfinite(o.charge) && o.charge != 0.0, "oscillator.charge",
            "must be non-zero and finite");
    require(positive(o.omega0), "oscillator.omega0", "must be positive and finite");

    const auto& l = c.laser;
    require(positive(l.omega1), "laser.omega1", "must be positive and finite");
    require(positive(l.omega2), "laser.omega2", "must be positive and finite");
    require(l.omega1 > l.omega2, "laser.omega1", "must exceed laser.omega2");
    require(std::isfinite(l.a1) && l.a1 >= 0.0, "laser.a1", "must be non-negative and finite");
    require(std::isfinite(l.a2) && l.a2 >= 0.0, "laser.a2", "must be non-negative and finite");
    require(positive(l.tau), "laser.tau", "must be positive and finite");

    const auto& g = c.grid;
    require(positive(g.half_width_dx), "grid.half_width_dx", "must be positive");
    require(g.points >= 256 && (g.points & (g.points - 1)) == 0, "grid.points",
            "must be a power of two, at least 256");
    require(std::isfinite(g.steps_per_period) && g.steps_per_period >= 2000.0,
            "grid.steps_per_period", "must be at least 2000");
    require(static_cast<double>(g.points) >= 6.0 * g.half_width_dx, "grid.points",
            "must give at least three points per Delta_x");
    require(g.fock_n_max >= 1, "grid.fock_n_max", "must be at least 1");

    const auto& z = c.zpf;
    require(positive(z.band_low) && z.band_low < 1.0, "zpf.band_low", "must lie in (0, 1)");
    require(std::isfinite(z.band_high) && z.band_high > 1.0, "zpf.band_high", "must exceed 1");
    require(z.modes >= 1000, "zpf.modes", "must be at least 1000");

    const auto& e = c.ensemble;
    require(e.particles >= 1, "ensemble.particles", "must be at least 1");
    require(e.preparation == "direct" || e.preparation == "relaxed", "ensemble.preparation",
            "must be direct or relaxed");
    require(std::isfinite(e.relax_time) && e.relax_time >= 0.0, "ensemble.relax_time",
            "must be non-negative");

    const auto& a = c.analysis;
    require(a.bins >= 16, "analysis.bins", "must be at least 16");
    require(positive(a.histogram_half_width_dx), "analysis.histogram_half_width_dx",
            "must be positive");
    require(positive(a.peak_over_median), "analysis.peak_over_median", "must be positive");
    require(a.valley_fraction > 0.0 && a.valley_fraction < 1.0, "analysis.valley_fraction",
            "must lie in (0, 1)");
    require(std::isfinite(a.fringe_window_periods) && a.fringe_window_periods >= 5.0,
            "analysis.fringe_window_periods", "must be at least 5");

    const auto& names = scenario_names();
    require(std::find(names.begin(), names.end(), c.run.scenario) != names.end(), "run.scenario",
            "unknown scenario '" + c.run.scenario + "'");
    require(c.run.snapshot_every >= 1, "run.snapshot_every", "must be at least 1");

    // Module preconditions that depend on several fields.
    const OscillatorParams osc = oscillator_of(c);
    try {
        qm::validate(qm_protocol_of(c).grid);
    } catch (const ParameterError& err) {
        fail("grid", err.what());
    }
    try {
        sed::validate(zpf_of(c), osc, l.tau);
    } catch (const ParameterError& err) {
        fail("zpf", err.what());
    }
    if (e.relax_time > 0.0 && e.relax_time < 5.0 * osc.tau_d) {
        fail("ensemble.relax_time", "must be 0 or at least five damping times");
    }
}

OscillatorParams oscillator_of(const ExperimentConfig& c)
{
    return derive_oscillator(c.oscillator.mass, c.oscillator.charge, c.oscillator.omega0);
}

LaserConfig laser_of(const ExperimentConfig& c)
{
    return make_laser(c.laser.omega1, c.laser.omega2, c.laser.a1, c.laser.a2, c.laser.tau);
}

qm::QmProtocol qm_protocol_of(const ExperimentConfig& c)
{
    const OscillatorParams osc = oscillator_of(c);
    qm::QmProtocol p = qm::default_qm_protocol(osc);
    p.grid = qm::make_grid(osc, c.grid.half_width_dx, c.grid.points, c.grid.steps_per_period);
    p.record_every = c.run.snapshot_every;
    p.density_every = c.run.snapshot_every;
    p.fock_n_max = c.grid.fock_n_max;
    return p;
}

sed::ZpfSpec zpf_of(const ExperimentConfig& c)
{
    sed::ZpfSpec z;
    z.omega_low = c.zpf.band_low * c.oscillator.omega0;
    z.omega_high = c.zpf.band_high * c.oscillator.omega0;
    z.n_modes = c.zpf.modes;
    z.spatial = c.zpf.spatial;
    return z;
}

sed::GroundPreparation preparation_of(const ExperimentConfig& c)
{
    return c.ensemble.preparation == "relaxed" ? sed::GroundPreparation::relaxed
                                               : sed::GroundPreparation::direct;
}

sed::SedProtocol sed_protocol_of(const ExperimentConfig& c)
{
    sed::SedProtocol p = sed::default_sed_protocol(oscillator_of(c), c.run.seed);
    p.zpf = zpf_of(c);
    p.n_particles = c.ensemble.particles;
    p.preparation = preparation_of(c);
    p.relax_time = c.ensemble.relax_time;
    p.threads = c.ensemble.threads;
    p.record_every = c.run.snapshot_every;
    return p;
}

}  // namespace sedcat::app
