#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "sedcat/physics.hpp"

namespace sedcat::qm {

// Uniform periodic grid x_j = x_min + j dx, j = 0..n_points-1, with
// dx = (x_max - x_min) / n_points; x_max itself is the periodic image of x_min.
struct GridSpec {
    double x_min = 0.0;         // m
    double x_max = 0.0;         // m
    std::size_t n_points = 0;   // power of two, >= 256
    double dt = 0.0;            // s
    std::size_t n_steps = 0;    // nominal step count of a run; 0 when unused

    double length() const noexcept { return x_max - x_min; }
    double dx() const noexcept { return length() / static_cast<double>(n_points); }
    double x(std::size_t j) const noexcept { return x_min + static_cast<double>(j) * dx(); }
    // Angular wavenumber of FFT bin j in standard (unshifted) order.
    double k(std::size_t j) const noexcept;
};

// Symmetric grid over [-half_width_dx, half_width_dx] Delta_x with time step
// T0 / steps_per_period. Defaults give the production grid.
GridSpec make_grid(const OscillatorParams& osc, double half_width_dx = 40.0,
                   std::size_t n_points = 2048, double steps_per_period = 2000.0);

// Throws ParameterError on a malformed grid.
void validate(const GridSpec& grid);

struct Wavefunction {
    GridSpec grid;
    std::vector<std::complex<double>> psi;  // m^{-1/2}
    double time = 0.0;                      // s

    // Riemann sum of |psi|^2 dx, which is the trapezoid rule on a periodic grid.
    double norm() const noexcept;
    void normalize();
};

// <a|b> by periodic quadrature. Grids must match.
std::complex<double> inner_product(const Wavefunction& a, const Wavefunction& b);

// |<a|b>|^2 for normalized states.
double fidelity(const Wavefunction& a, const Wavefunction& b);

// sqrt(sum |a - b|^2 dx).
double l2_distance(const Wavefunction& a, const Wavefunction& b);

}  // namespace sedcat::qm
