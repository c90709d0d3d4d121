#include "sedcat/physics.hpp"

#include <limits>
#include <sstream>

#include "sedcat/errors.hpp"

namespace sedcat {

namespace {

constexpr double kPi = std::numbers::pi;

void require_finite(double v, const char* name)
{
    if (!std::isfinite(v)) {
        std::ostringstream os;
        os << name << " must be finite (got " << v << ")";
        throw ParameterError(os.str());
    }
}

}  // namespace

OscillatorParams derive_oscillator(double mass, double charge, double omega0,
                                   const PhysicalConstants& constants)
{
    require_finite(mass, "mass");
    require_finite(charge, "charge");
    require_finite(omega0, "omega0");
    if (mass <= 0.0) {
        throw ParameterError("mass must be positive");
    }
    if (omega0 <= 0.0) {
        throw ParameterError("omega0 must be positive");
    }

    OscillatorParams p;
    p.mass = mass;
    p.charge = charge;
    p.omega0 = omega0;
    p.constants = constants;

    const double c = constants.c();
    p.gamma = 2.0 * charge * charge / (3.0 * mass * c * c * c) / (4.0 * kPi * constants.epsilon0());
    p.tau_d = p.gamma > 0.0 ? 2.0 / (p.gamma * omega0 * omega0)
                            : std::numeric_limits<double>::infinity();
    p.delta_x = std::sqrt(constants.hbar() / (2.0 * mass * omega0));
    p.delta_p = std::sqrt(constants.hbar() * mass * omega0 / 2.0);
    return p;
}

LaserConfig make_laser(double omega1, double omega2, double a1, double a2, double tau,
                       const PhysicalConstants& constants)
{
    require_finite(omega1, "omega1");
    require_finite(omega2, "omega2");
    require_finite(a1, "A1");
    require_finite(a2, "A2");
    require_finite(tau, "tau");
    if (!(omega2 > 0.0) || !(omega1 > omega2)) {
        throw ParameterError("laser frequencies must satisfy omega1 > omega2 > 0");
    }
    if (!(tau > 0.0)) {
        throw ParameterError("pulse duration tau must be positive");
    }
    LaserConfig l;
    l.omega1 = omega1;
    l.omega2 = omega2;
    l.a1 = a1;
    l.a2 = a2;
    l.tau = tau;
    l.k1 = omega1 / constants.c();
    l.k2 = omega2 / constants.c();
    return l;
}

bool is_resonant(const LaserConfig& laser, const OscillatorParams& osc) noexcept
{
    const double target = 2.0 * osc.omega0;
    return std::abs(laser.difference_frequency() - target) / target < 1e-12;
}

double pulse_envelope(double t, double tau) noexcept
{
    const double u = t / tau;
    return std::exp(-u * u);
}

double drive_envelope(double t, double tau) noexcept
{
    const double u = t / tau;
    const double e = std::exp(-2.0 * u * u);
    return e < kEnvelopeCutoff ? 0.0 : e;
}

double pulse_half_window(double tau) noexcept
{
    return tau * std::sqrt(-std::log(kEnvelopeCutoff) / 2.0);
}

FieldSample combined_field(double x, double t, const LaserConfig& laser, bool envelope_on) noexcept
{
    const double c1 = std::cos(laser.k1 * x - laser.omega1 * t);
    const double c2 = std::cos(laser.k2 * x + laser.omega2 * t);
    const double env = envelope_on ? pulse_envelope(t, laser.tau) : 1.0;
    FieldSample f;
    f.ez = env * (laser.a1 * laser.omega1 * c1 - laser.a2 * laser.omega2 * c2);
    f.by = env * (-laser.a1 * laser.k1 * c1 - laser.a2 * laser.k2 * c2);
    return f;
}

double kd_force_amplitude(const LaserConfig& laser, const OscillatorParams& osc) noexcept
{
    const double q = osc.charge;
    return q * q * laser.a1 * laser.a2 * laser.lattice_wavenumber() / (2.0 * osc.mass);
}

double kd_potential_amplitude(const LaserConfig& laser, const OscillatorParams& osc) noexcept
{
    const double q = osc.charge;
    return q * q * laser.a1 * laser.a2 / (2.0 * osc.mass);
}

double kd_force(double x, double t, const LaserConfig& laser, const OscillatorParams& osc,
                bool envelope_on) noexcept
{
    const double env = envelope_on ? drive_envelope(t, laser.tau) : 1.0;
    return kd_force_amplitude(laser, osc) * std::sin(laser.lattice_wavenumber() * x) *
           std::cos(laser.difference_frequency() * t) * env;
}

double kd_potential(double x, double t, const LaserConfig& laser, const OscillatorParams& osc,
                    bool envelope_on) noexcept
{
    const double env = envelope_on ? drive_envelope(t, laser.tau) : 1.0;
    return kd_potential_amplitude(laser, osc) * std::cos(laser.lattice_wavenumber() * x) *
           std::cos(laser.difference_frequency() * t) * env;
}

ForceComponents lorentz_force_expansion(double x, double t, const LaserConfig& laser,
                                        const OscillatorParams& osc) noexcept
{
    const double q = osc.charge;
    const double pref = q * q / (2.0 * osc.mass);
    const double a1 = laser.a1;
    const double a2 = laser.a2;
    const double k1 = laser.k1;
    const double k2 = laser.k2;
    const double phase1 = k1 * x - laser.omega1 * t;
    const double phase2 = k2 * x + laser.omega2 * t;

    ForceComponents f;
    f.two_omega1 = pref * a1 * a1 * k1 * std::sin(2.0 * phase1);
    // The A2^2 self term: beam 2 quivering in its own magnetic field.
    f.two_omega2 = pref * a2 * a2 * k2 * std::sin(2.0 * phase2);
    f.sum_freq = pref * a1 * a2 * (k2 - k1) * std::sin(phase1 - phase2);
    f.diff_freq = pref * a1 * a2 * (k1 + k2) * std::sin(phase1 + phase2);
    return f;
}

double lorentz_force_product(double x, double t, const LaserConfig& laser,
                             const OscillatorParams& osc) noexcept
{
    const double q = osc.charge;
    const double phase1 = laser.k1 * x - laser.omega1 * t;
    const double phase2 = laser.k2 * x + laser.omega2 * t;
    const double quiver = laser.a1 * std::sin(phase1) + laser.a2 * std::sin(phase2);
    const double grad = laser.a1 * laser.k1 * std::cos(phase1) + laser.a2 * laser.k2 * std::cos(phase2);
    return q * q / osc.mass * quiver * grad;
}

StandingWaveSplit split_resonant_term(double x, double t, const LaserConfig& laser,
                                      const OscillatorParams& osc) noexcept
{
    const double amp = kd_force_amplitude(laser, osc);
    const double kx = laser.lattice_wavenumber() * x;
    const double wt = laser.difference_frequency() * t;
    return {amp * std::sin(kx) * std::cos(wt), -amp * std::cos(kx) * std::sin(wt)};
}

StrongDriveReport strong_drive_check(const LaserConfig& laser, const OscillatorParams& osc) noexcept
{
    const auto& k = osc.constants;
    const double w0 = osc.omega0;
    const double w05 = w0 * w0 * w0 * w0 * w0;
    StrongDriveReport r;
    r.drive_force = kd_force_amplitude(laser, osc);
    r.vacuum_force = std::abs(osc.charge) / (2.0 * kPi) *
                     std::sqrt(k.hbar() * osc.gamma * w05 / (k.epsilon0() * k.c() * k.c() * k.c()));
    r.ratio = r.vacuum_force > 0.0 ? r.drive_force / r.vacuum_force
                                   : std::numeric_limits<double>::infinity();
    r.pulse_over_damping = laser.tau / osc.tau_d;
    return r;
}

}  // namespace sedcat
