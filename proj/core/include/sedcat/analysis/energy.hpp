#pragma once

#include <cstddef>
#include <vector>

#include "sedcat/physics.hpp"
#include "sedcat/qm/observables.hpp"
#include "sedcat/sed/ensemble.hpp"

namespace sedcat::analysis {

// QM: levels hold E_n = hbar w0 (n + 1/2) and probability P(n).
// SED: levels hold bins + 1 edges and probability the share per bin.
struct EnergyDistribution {
    bool discrete = false;
    std::vector<double> levels;       // J
    std::vector<double> probability;
    double mean = 0.0;      // J
    double std_dev = 0.0;   // J
};

EnergyDistribution energy_distribution_qm(const qm::FockPopulations& pops,
                                          const OscillatorParams& osc);

// Per-particle E = m v^2/2 + m w0^2 x^2/2 binned over [0, e_max]; e_max <= 0
// selects max(largest energy, hbar w0). Mean and width come from the
// samples, not the bins.
EnergyDistribution energy_distribution_sed(const sed::EnsembleSnapshot& snapshot,
                                           const OscillatorParams& osc, std::size_t bins = 64,
                                           double e_max = 0.0);

double mean_energy(const sed::EnsembleSnapshot& snapshot, const OscillatorParams& osc);

struct EnsembleMoments {
    double mean_x = 0.0, mean_v = 0.0;  // m, m/s
    double var_x = 0.0, var_v = 0.0;    // m^2, m^2/s^2
    double cov_xv = 0.0;                // m^2/s
};

EnsembleMoments ensemble_moments(const sed::EnsembleSnapshot& snapshot);

// Agreement of the SED mean-energy trajectory with the QM one from t_from
// up to the SED maximum t_m. QM energies are interpolated linearly to the
// SED times.
struct EnergyOverlap {
    double t_max = 0.0;              // s, time of the SED maximum
    double sed_max = 0.0;            // J
    double max_relative_deviation = 0.0;
    double t_worst = 0.0;            // s
};

EnergyOverlap energy_overlap(const std::vector<double>& qm_times,
                             const std::vector<double>& qm_energy,
                             const std::vector<double>& sed_times,
                             const std::vector<double>& sed_energy, double t_from);

}  // namespace sedcat::analysis
