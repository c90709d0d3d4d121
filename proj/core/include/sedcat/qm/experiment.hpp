#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "sedcat/physics.hpp"
#include "sedcat/qm/grid.hpp"

namespace sedcat::qm {

// Pulsed cat-state protocol: start in the ground state at the leading edge
// of the pulse window, drive through the pulse, locate the first maximum of
// <x^2> after the pulse (packets furthest apart), then continue a quarter
// period to the recombination instant and on to the end of the run.
struct QmProtocol {
    GridSpec grid;
    std::size_t record_every = 100;    // steps between time-series records
    std::size_t density_every = 100;   // steps between stored densities; 0 disables
    std::size_t fock_n_max = 200;
    double post_recombination_periods = 2.0;
};

QmProtocol default_qm_protocol(const OscillatorParams& osc);

struct QmRecord {
    double time = 0.0;     // s
    double energy = 0.0;   // J, bare oscillator energy
    double x2 = 0.0;       // m^2
    double sigma_x = 0.0;  // m
    double sigma_p = 0.0;  // kg m/s
    double norm = 0.0;
    double odd_population = std::numeric_limits<double>::quiet_NaN();
};

struct DensityFrame {
    double time = 0.0;
    std::vector<double> rho;  // 1/m on the grid points
};

struct QmRunResult {
    double t_start = 0.0;
    double t_pulse_end = 0.0;
    double t_separated = 0.0;
    double t_recombined = 0.0;
    double t_end = 0.0;

    std::vector<QmRecord> records;
    std::vector<DensityFrame> densities;
    double max_odd_population = 0.0;

    Wavefunction initial;
    Wavefunction pulse_end;
    Wavefunction separated;
    Wavefunction recombined;
    Wavefunction final_state;
};

QmRunResult run_qm_experiment(const OscillatorParams& osc, const LaserConfig& laser,
                              const QmProtocol& protocol);

}  // namespace sedcat::qm
