#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "sedcat/physics.hpp"
#include "sedcat/qm/grid.hpp"

namespace sedcat::qm {

struct PropagatorOptions {
    double norm_tolerance = 1e-9;       // allowed norm drift per 1e4 steps
    double boundary_margin_dx = 5.0;    // width of the guard strip, in Delta_x
    double boundary_mass_limit = 1e-10; // probability allowed inside the guard strip
    std::size_t check_every = 1000;     // steps between norm and boundary checks
    bool enforce_step_limit = true;     // require dt <= T0 / 2000
};

// Symmetric split-step Fourier propagator for
//   H = p^2/2m + m w0^2 x^2/2 + U_KD(x, t) e^{-2 (t/tau)^2}
// with the time-dependent potential sampled at the midpoint of each step.
class SplitStepPropagator {
public:
    using Observer = std::function<void(const Wavefunction&, std::size_t step)>;

    SplitStepPropagator(const GridSpec& grid, const OscillatorParams& osc,
                        std::optional<LaserConfig> laser, PropagatorOptions options = {});
    ~SplitStepPropagator();
    SplitStepPropagator(const SplitStepPropagator&) = delete;
    SplitStepPropagator& operator=(const SplitStepPropagator&) = delete;

    // One step of length grid.dt from psi.time.
    void step(Wavefunction& psi);

    // Steps from psi.time to t_end. The final step is shortened when the span
    // is not a whole number of dt. Step k ends at t_start + k dt exactly, so no
    // rounding accumulates in the clock. The observer, if given, runs after
    // every `every`-th step and after the last one.
    void advance(Wavefunction& psi, double t_end, const Observer& observer = {},
                 std::size_t every = 0);

    const GridSpec& grid() const noexcept { return grid_; }

private:
    void step_of_length(Wavefunction& psi, double h);
    void check_health(const Wavefunction& psi, std::size_t steps_done) const;

    GridSpec grid_;
    OscillatorParams osc_;
    std::optional<LaserConfig> laser_;
    PropagatorOptions options_;

    std::vector<double> trap_phase_;    // V_trap(x_j) / hbar
    std::vector<double> lattice_phase_; // U0 cos(K x_j) / hbar
    std::vector<std::complex<double>> kinetic_;      // for the nominal dt, includes 1/N
    std::vector<std::complex<double>> static_kick_;  // half kick with the drive off

    struct Plans;
    std::unique_ptr<Plans> plans_;
    double reference_norm_ = 1.0;
};

// Convenience wrapper: evolve psi from t_start to t_end.
Wavefunction propagate(Wavefunction psi, const OscillatorParams& osc,
                       const std::optional<LaserConfig>& laser, const GridSpec& grid,
                       double t_start, double t_end);

}  // namespace sedcat::qm
