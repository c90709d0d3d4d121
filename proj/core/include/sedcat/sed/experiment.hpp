#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "sedcat/physics.hpp"
#include "sedcat/sed/ensemble.hpp"
#include "sedcat/sed/zpf.hpp"

namespace sedcat::sed {

// Classical counterpart of the pulsed cat-state protocol: an ensemble of
// ZPF-driven charges runs through the same pulse window. The separated
// instant is the first maximum of the ensemble <x^2> after the pulse and the
// recombination instant follows a quarter period later.
struct SedProtocol {
    ZpfSpec zpf;
    std::size_t n_particles = 30000;
    std::uint64_t master_seed = 0;
    GroundPreparation preparation = GroundPreparation::direct;
    double relax_time = 0.0;              // s, relaxed only; 0 selects 5 tau_d
    std::size_t record_every = 100;       // steps between ensemble records
    double post_recombination_periods = 2.0;
    unsigned threads = 0;
    bool keep_snapshots = false;          // keep every recorded snapshot in the result
};

SedProtocol default_sed_protocol(const OscillatorParams& osc, std::uint64_t master_seed = 0);

struct SedRecord {
    double time = 0.0;         // s
    double mean_energy = 0.0;  // J
    double var_x = 0.0;        // m^2
    double var_v = 0.0;        // m^2/s^2
};

struct SedRunResult {
    double t_start = 0.0;
    double t_pulse_end = 0.0;
    double t_separated = 0.0;
    double t_recombined = 0.0;
    double t_end = 0.0;
    double dt = 0.0;

    std::vector<SedRecord> records;
    std::vector<EnsembleSnapshot> snapshots;  // one per record when keep_snapshots is set
    std::optional<RelaxationReport> relaxation;

    EnsembleSnapshot initial;
    EnsembleSnapshot pulse_end;
    EnsembleSnapshot separated;
    EnsembleSnapshot recombined;
    EnsembleSnapshot final_state;
};

// Throws NumericalError when <x^2> shows no maximum within the search window.
SedRunResult run_sed_experiment(const OscillatorParams& osc, const LaserConfig& laser,
                                const SedProtocol& protocol);

}  // namespace sedcat::sed
