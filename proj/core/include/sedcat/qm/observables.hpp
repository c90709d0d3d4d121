#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "sedcat/physics.hpp"
#include "sedcat/qm/grid.hpp"
#include "sedcat/qm/states.hpp"

namespace sedcat::qm {

// |psi|^2 / norm at the grid points [1/m].
std::vector<double> density(const Wavefunction& psi);

// <p^2/2m + m w0^2 x^2/2>, kinetic part by spectral differentiation [J].
double energy_expectation(const Wavefunction& psi, const OscillatorParams& osc);

// <x^2> [m^2].
double second_moment(const Wavefunction& psi);

// Smooth spatial window: weight 1 on [lo, hi], raised-cosine roll-off of
// width `rolloff` outside each finite edge, 0 beyond.
struct PacketWindow {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    double rolloff = 0.0;  // m

    double weight(double x) const noexcept;
};

// Window isolating the packet on one side of the origin (side > 0 or < 0):
// a raised-cosine roll-off of rolloff_dx Delta_x across the density valley
// between that packet and the origin, three quarters of it on the inner
// side, and full weight outwards of it.
PacketWindow auto_packet_window(const Wavefunction& psi, const OscillatorParams& osc, int side,
                                double rolloff_dx = 2.0);

struct QuadratureReport {
    double mean_x = 0.0;   // m
    double mean_p = 0.0;   // kg m/s
    double sigma_x = 0.0;  // m
    double sigma_p = 0.0;  // kg m/s
    double product = 0.0;  // J s
    std::optional<PacketWindow> window;
    double packet_mass_fraction = 1.0;  // share of the packet's mass kept by the window
};

// Moments of the full state, or of the apodized and renormalized windowed
// state when a window is given. Momentum moments come from the spectral
// transform in both cases. Throws WindowingError if the window keeps less
// than min_packet_fraction of the packet it contains.
QuadratureReport quadratures(const Wavefunction& psi,
                             const std::optional<PacketWindow>& window = std::nullopt,
                             double min_packet_fraction = 0.99);

struct FockPopulations {
    std::vector<double> probability;  // P(n), n = 0..n_max
    double total = 0.0;

    double odd_total() const noexcept;
    double mean_n() const noexcept;
};

// Projects states on one grid onto |0>..|n_max>, reusing one Hermite table.
class FockProjector {
public:
    FockProjector(const GridSpec& grid, const OscillatorParams& osc, std::size_t n_max);

    // Throws ResolutionError when the populations miss unity by more than
    // `tolerance` (basis too small), PrecisionError on non-finite overlaps.
    FockPopulations project(const Wavefunction& psi, double tolerance = 1e-6) const;

    std::size_t n_max() const noexcept { return table_.n_max; }

private:
    GridSpec grid_;
    HermiteTable table_;
};

FockPopulations fock_populations(const Wavefunction& psi, const OscillatorParams& osc,
                                 std::size_t n_max);

}  // namespace sedcat::qm
