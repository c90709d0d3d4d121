#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sedcat/physics.hpp"
#include "sedcat/qm/experiment.hpp"
#include "sedcat/sed/experiment.hpp"
#include "sedcat/sed/zpf.hpp"

namespace sedcat::app {

// Invalid configuration: a parse error carries its line and column (1-based),
// a validation error the dotted path of the offending field.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, std::string message, int line = 0, int column = 0);

    const std::string& field() const noexcept { return field_; }
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    std::string field_;
    int line_;
    int column_;
};

struct OscillatorSection {
    double mass = 9.11e-35;    // kg
    double charge = 1.60e-19;  // C
    double omega0 = 1e16;      // rad/s
    friend bool operator==(const OscillatorSection&, const OscillatorSection&) = default;
};

struct LaserSection {
    double omega1 = 2.3e16;  // rad/s
    double omega2 = 0.3e16;  // rad/s
    double a1 = 4.5e-8;      // V s/m
    double a2 = 4.5e-8;      // V s/m
    double tau = 5e-15;      // s
    friend bool operator==(const LaserSection&, const LaserSection&) = default;
};

struct GridSection {
    double half_width_dx = 40.0;  // Delta_x
    std::size_t points = 2048;
    double steps_per_period = 2000.0;
    std::size_t fock_n_max = 200;
    friend bool operator==(const GridSection&, const GridSection&) = default;
};

struct ZpfSection {
    double band_low = 0.5;   // omega0
    double band_high = 1.5;  // omega0
    std::size_t modes = 10000;
    bool spatial = false;
    friend bool operator==(const ZpfSection&, const ZpfSection&) = default;
};

struct EnsembleSection {
    std::size_t particles = 30000;
    std::string preparation = "direct";  // direct | relaxed
    double relax_time = 0.0;             // s, 0 selects 5 tau_d
    unsigned threads = 0;                // 0 = hardware concurrency
    friend bool operator==(const EnsembleSection&, const EnsembleSection&) = default;
};

struct AnalysisSection {
    std::size_t bins = 256;
    double histogram_half_width_dx = 20.0;
    double peak_over_median = 10.0;
    double valley_fraction = 0.2;
    double fringe_window_periods = 6.0;
    friend bool operator==(const AnalysisSection&, const AnalysisSection&) = default;
};

struct RunSection {
    std::string scenario = "paper-repro";
    std::uint64_t seed = 0;
    std::string output;  // empty selects the environment default
    std::size_t snapshot_every = 100;  // steps
    friend bool operator==(const RunSection&, const RunSection&) = default;
};

struct ExperimentConfig {
    OscillatorSection oscillator;
    LaserSection laser;
    GridSection grid;
    ZpfSection zpf;
    EnsembleSection ensemble;
    AnalysisSection analysis;
    RunSection run;
    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

const std::vector<std::string>& scenario_names();

// YAML text with optional sections; omitted fields keep their defaults.
// Throws ConfigError for syntax errors, unknown keys, wrong types and
// failed validation.
ExperimentConfig parse_config(std::string_view text);

// YAML with every field present; doubles carry 17 significant digits so
// parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& config);

// Checks every field against the preconditions of the modules it feeds.
void validate_config(const ExperimentConfig& config);

OscillatorParams oscillator_of(const ExperimentConfig& c);
LaserConfig laser_of(const ExperimentConfig& c);
qm::QmProtocol qm_protocol_of(const ExperimentConfig& c);
sed::ZpfSpec zpf_of(const ExperimentConfig& c);
sed::SedProtocol sed_protocol_of(const ExperimentConfig& c);
sed::GroundPreparation preparation_of(const ExperimentConfig& c);

}  // namespace sedcat::app
