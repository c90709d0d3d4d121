#pragma once

#include <cstddef>
#include <vector>

#include "sedcat/physics.hpp"
#include "sedcat/qm/grid.hpp"

namespace sedcat::qm {

// psi_0(x) = (m w0 / pi hbar)^{1/4} exp(-m w0 x^2 / 2 hbar), normalized on the
// grid. Throws ResolutionError when dx > Delta_x / 3.
Wavefunction ground_state(const GridSpec& grid, const OscillatorParams& osc);

// Ground state displaced to x0 and boosted to momentum p0.
Wavefunction coherent_state(const GridSpec& grid, const OscillatorParams& osc, double x0,
                            double p0);

// Squeezed vacuum with sigma_x = Delta_x e^{-r}.
Wavefunction squeezed_vacuum(const GridSpec& grid, const OscillatorParams& osc, double r);

// Number state |n> sampled from the Hermite-function table.
Wavefunction fock_state(const GridSpec& grid, const OscillatorParams& osc, std::size_t n);

// Orthonormal Hermite functions phi_0..phi_{n_max} on the grid points, with
// length scale sqrt(hbar / m w0). Evaluated with a normalized three-term
// recurrence whose mantissas are rescaled on overflow and carried together
// with a separate log-magnitude, so high orders far in the tails neither
// overflow nor underflow prematurely.
struct HermiteTable {
    std::size_t n_max = 0;
    std::size_t n_points = 0;
    std::vector<double> values;  // row-major: values[n * n_points + j], m^{-1/2}

    const double* row(std::size_t n) const noexcept { return values.data() + n * n_points; }
};

HermiteTable hermite_functions(const std::vector<double>& xs, const OscillatorParams& osc,
                               std::size_t n_max);
HermiteTable hermite_functions(const GridSpec& grid, const OscillatorParams& osc,
                               std::size_t n_max);

std::vector<double> grid_points(const GridSpec& grid);

}  // namespace sedcat::qm
