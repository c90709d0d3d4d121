#pragma once

#include <cstddef>
#include <vector>

#include "sedcat/physics.hpp"
#include "sedcat/qm/grid.hpp"

namespace sedcat::qm {

// (x, p) lattice x_i = -half_width_x + i dx, p_m = -half_width_p + m dp with
// dx = 2 half_width_x / nx and dp = 2 half_width_p / np. The x points must
// coincide with grid points.
struct WignerLattice {
    double half_width_x = 0.0;  // m
    double half_width_p = 0.0;  // kg m/s
    std::size_t nx = 256;
    std::size_t np = 256;
    double marginal_tolerance = 1e-6;  // L1 bound on the x-marginal mismatch
};

WignerLattice default_wigner_lattice(const OscillatorParams& osc);

struct WignerMap {
    double x0 = 0.0, dx = 0.0;  // m
    double p0 = 0.0, dp = 0.0;  // kg m/s
    std::size_t nx = 0, np = 0;
    std::vector<double> values;  // row-major values[i * np + m], 1/(m kg m/s)
    double time = 0.0;

    double marginal_l1 = 0.0;  // L1 distance of sum_p W dp from |psi|^2
    double total = 0.0;        // sum W dx dp

    double at(std::size_t i, std::size_t m) const noexcept { return values[i * np + m]; }
};

// W(x, p) = (1/pi hbar) integral psi*(x + y) psi(x - y) e^{2 i p y / hbar} dy,
// with the y-sum restricted to points inside the grid (no periodic wrap).
// Throws ResolutionError when the x-marginal misses |psi|^2 by more than the
// lattice tolerance, which signals aliasing in p.
WignerMap wigner(const Wavefunction& psi, const OscillatorParams& osc,
                 const WignerLattice& lattice);

}  // namespace sedcat::qm
