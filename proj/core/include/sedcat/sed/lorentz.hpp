#pragma once

#include <cstddef>
#include <vector>

#include "sedcat/physics.hpp"

namespace sedcat::sed {

// Compares the two-dimensional motion under the complete laser force with
// the one-dimensional resonant Kapitza-Dirac reduction, ZPF off.
//
// Full model, fields from combined_field with envelope e^{-(t/tau)^2}:
//   x'' = -w0^2 x - Gamma w0^2 x' + (q/m) v_z B_y
//   v_z' = (q/m) (E_z + x' B_y)
// The x' B_y term keeps v_z = -(q/m) A_z along a moving trajectory; v_z
// starts on that value. Reduced model: step_particle's equation with the
// ZPF off. A third, undriven trajectory from the same start serves as the
// reference for excitation amplitudes.
struct LorentzValidationConfig {
    OscillatorParams osc;
    LaserConfig laser;
    double x0 = 0.0;        // m
    double v0 = 0.0;        // m/s
    double t_start = 0.0;   // s
    double t_end = 0.0;     // s
    double dt = 0.0;        // s
    bool damping = true;
    std::size_t record_every = 10;
};

// Pulse window [-t_w, t_w], x0 = Delta_x, dt = T0 / 2000.
LorentzValidationConfig default_lorentz_validation(const OscillatorParams& osc,
                                                   const LaserConfig& laser);

struct LorentzTrajectories {
    std::vector<double> time;       // s
    std::vector<double> x_full;     // m
    std::vector<double> x_reduced;  // m
    std::vector<double> x_free;     // m
    std::vector<double> z_full;     // m

    double rms_difference = 0.0;    // m, over every step
    double max_excursion = 0.0;     // m, max |x_reduced|
    // max |x - x_free| over the last oscillation period of the run.
    double final_amplitude_full = 0.0;
    double final_amplitude_reduced = 0.0;

    double relative_rms() const noexcept
    {
        return max_excursion > 0.0 ? rms_difference / max_excursion : 0.0;
    }
};

// Throws StabilityError on non-finite states and ParameterError for an
// empty window or a step above T0 / 200.
LorentzTrajectories run_full_lorentz_validation(const LorentzValidationConfig& config);

}  // namespace sedcat::sed
