#pragma once

#include "sedcat/physics.hpp"
#include "sedcat/sed/zpf.hpp"

namespace sedcat::sed {

struct ParticleState {
    double x = 0.0;  // m
    double v = 0.0;  // m/s

    friend bool operator==(const ParticleState&, const ParticleState&) = default;
};

enum class DriveKind {
    none,
    kapitza_dirac,      // F_KD(x, t) e^{-2 (t/tau)^2}
    linear_parametric,  // -m w0^2 depth cos(frequency t) x, no envelope
};

struct DriveModel {
    DriveKind kind = DriveKind::none;
    LaserConfig laser;       // kapitza_dirac
    double depth = 0.0;      // linear_parametric, dimensionless
    double frequency = 0.0;  // linear_parametric, rad/s

    static DriveModel off() { return {}; }
    static DriveModel kapitza_dirac(const LaserConfig& laser);
    static DriveModel parametric(double depth, double frequency);

    // Drive acceleration at (x, t) [m/s^2].
    double acceleration(double x, double t, const OscillatorParams& osc) const noexcept;
};

// Right-hand side of
//   m x'' = -m w0^2 x - m Gamma w0^2 x' + q E_vac(t) + F_drive(x, t).
struct ForceModel {
    OscillatorParams osc;
    DriveModel drive;
    const ZpfRealization* zpf = nullptr;  // ZPF off when null
    bool damping = true;

    double acceleration(double x, double v, double t) const noexcept;
};

// Largest step allowed for the model: min(T0, 2 pi / omega_high) / 200.
double max_step(const ForceModel& model) noexcept;

// One classical fourth-order Runge-Kutta step. Throws ParameterError when
// dt exceeds max_step and StabilityError when the result is not finite.
ParticleState step_particle(const ParticleState& s, double t, double dt,
                            const ForceModel& model);

namespace detail {

// RK4 with the explicit time dependence supplied per stage: accel(x, v, j)
// with j = 0, 1, 2 for t, t + dt/2, t + dt.
template <class Accel>
inline ParticleState rk4(const ParticleState& s, double dt, Accel&& accel)
{
    const double h2 = 0.5 * dt;
    const double k1x = s.v;
    const double k1v = accel(s.x, s.v, 0);
    const double x2 = s.x + h2 * k1x, v2 = s.v + h2 * k1v;
    const double k2x = v2;
    const double k2v = accel(x2, v2, 1);
    const double x3 = s.x + h2 * k2x, v3 = s.v + h2 * k2v;
    const double k3x = v3;
    const double k3v = accel(x3, v3, 1);
    const double x4 = s.x + dt * k3x, v4 = s.v + dt * k3v;
    const double k4x = v4;
    const double k4v = accel(x4, v4, 2);
    return {s.x + dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x),
            s.v + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)};
}

}  // namespace detail

}  // namespace sedcat::sed
