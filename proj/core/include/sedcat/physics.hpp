#pragma once

// Parameter types and closed-form field, force and potential evaluations
// shared by the quantum and the stochastic-electrodynamics engines.
//
// Geometry: two counter-propagating beams along x, both polarized along z.
// Beam 1 travels towards +x at omega1, beam 2 towards -x at omega2. The
// charge is trapped harmonically along x and free along z. All quantities
// are strict SI.

#include <cmath>
#include <numbers>

namespace sedcat {

class PhysicalConstants {
public:
    static constexpr PhysicalConstants codata2018() noexcept
    {
        return PhysicalConstants(1.054571817e-34, 299792458.0, 8.8541878128e-12);
    }

    constexpr double hbar() const noexcept { return hbar_; }          // J s
    constexpr double c() const noexcept { return c_; }                // m/s
    constexpr double epsilon0() const noexcept { return epsilon0_; }  // F/m

    friend constexpr bool operator==(const PhysicalConstants&, const PhysicalConstants&) = default;

private:
    constexpr PhysicalConstants(double hbar, double c, double eps0) noexcept
        : hbar_(hbar), c_(c), epsilon0_(eps0)
    {
    }

    double hbar_;
    double c_;
    double epsilon0_;
};

inline constexpr PhysicalConstants kCodata = PhysicalConstants::codata2018();

// Trapped charge with its derived damping and ground-state scales.
struct OscillatorParams {
    double mass = 0.0;    // kg
    double charge = 0.0;  // C
    double omega0 = 0.0;  // rad/s

    double gamma = 0.0;    // radiation damping coefficient Gamma [s]
    double tau_d = 0.0;    // damping time 2/(Gamma omega0^2) [s]; +inf when undamped
    double delta_x = 0.0;  // sqrt(hbar / 2 m omega0) [m]
    double delta_p = 0.0;  // sqrt(hbar m omega0 / 2) [kg m/s]

    PhysicalConstants constants = kCodata;

    bool undamped() const noexcept { return gamma == 0.0; }
    double period() const noexcept { return 2.0 * std::numbers::pi / omega0; }
    // Energy linewidth Gamma omega0^2 [1/s].
    double linewidth() const noexcept { return gamma * omega0 * omega0; }
    double hbar_omega0() const noexcept { return constants.hbar() * omega0; }
};

OscillatorParams derive_oscillator(double mass, double charge, double omega0,
                                   const PhysicalConstants& constants = kCodata);

struct LaserConfig {
    double omega1 = 0.0;  // rad/s, beam travelling towards +x
    double omega2 = 0.0;  // rad/s, beam travelling towards -x
    double a1 = 0.0;      // vector-potential amplitude [V s/m]
    double a2 = 0.0;
    double tau = 0.0;     // pulse duration [s]
    double k1 = 0.0;      // omega1 / c
    double k2 = 0.0;

    double lattice_wavenumber() const noexcept { return k1 + k2; }
    double difference_frequency() const noexcept { return omega1 - omega2; }
    double sum_frequency() const noexcept { return omega1 + omega2; }
};

LaserConfig make_laser(double omega1, double omega2, double a1, double a2, double tau,
                       const PhysicalConstants& constants = kCodata);

// True iff |(omega1 - omega2) - 2 omega0| / (2 omega0) < 1e-12.
bool is_resonant(const LaserConfig& laser, const OscillatorParams& osc) noexcept;

// Field envelope exp(-(t/tau)^2).
double pulse_envelope(double t, double tau) noexcept;

// Envelope of the bilinear drive terms, exp(-2 (t/tau)^2), set to zero
// wherever it falls below kEnvelopeCutoff.
inline constexpr double kEnvelopeCutoff = 1e-12;
double drive_envelope(double t, double tau) noexcept;

// Half-width of the window where drive_envelope is non-zero.
double pulse_half_window(double tau) noexcept;

struct FieldSample {
    double ez = 0.0;  // V/m
    double by = 0.0;  // T
};

FieldSample combined_field(double x, double t, const LaserConfig& laser, bool envelope_on) noexcept;

// Peak of the resonant Kapitza-Dirac force, q^2 A1 A2 (k1 + k2) / (2 m).
double kd_force_amplitude(const LaserConfig& laser, const OscillatorParams& osc) noexcept;
// Peak of the Kapitza-Dirac potential, q^2 A1 A2 / (2 m).
double kd_potential_amplitude(const LaserConfig& laser, const OscillatorParams& osc) noexcept;

double kd_force(double x, double t, const LaserConfig& laser, const OscillatorParams& osc,
                bool envelope_on) noexcept;
double kd_potential(double x, double t, const LaserConfig& laser, const OscillatorParams& osc,
                    bool envelope_on) noexcept;

// The four frequency groups of the x-directed Lorentz force q v_z B_y, with
// v_z the quiver velocity -(q/m) A_z of a charge free along z.
struct ForceComponents {
    double two_omega1 = 0.0;   // N
    double two_omega2 = 0.0;   // N
    double sum_freq = 0.0;     // N, oscillates at omega1 + omega2
    double diff_freq = 0.0;    // N, oscillates at omega1 - omega2 (travelling wave)

    double total() const noexcept { return two_omega1 + two_omega2 + sum_freq + diff_freq; }
};

ForceComponents lorentz_force_expansion(double x, double t, const LaserConfig& laser,
                                        const OscillatorParams& osc) noexcept;

// Unexpanded product form (q^2/m)(A1 sin p1 + A2 sin p2)(A1 k1 cos p1 + A2 k2 cos p2).
double lorentz_force_product(double x, double t, const LaserConfig& laser,
                             const OscillatorParams& osc) noexcept;

// Standing-wave split of the travelling resonant term:
// sin(Kx - dw t) = sin(Kx) cos(dw t) - cos(Kx) sin(dw t). The odd-in-x part
// is the resonant Kapitza-Dirac force.
struct StandingWaveSplit {
    double odd = 0.0;   // sin(Kx) cos(dw t) part, equals kd_force without envelope
    double even = 0.0;  // -cos(Kx) sin(dw t) part
};

StandingWaveSplit split_resonant_term(double x, double t, const LaserConfig& laser,
                                      const OscillatorParams& osc) noexcept;

// Compares the drive strength against the zero-point force scale
// (q / 2 pi) sqrt(hbar Gamma omega0^5 / (eps0 c^3)).
struct StrongDriveReport {
    double drive_force = 0.0;     // N
    double vacuum_force = 0.0;    // N
    double ratio = 0.0;
    double pulse_over_damping = 0.0;  // tau / tau_d
};

StrongDriveReport strong_drive_check(const LaserConfig& laser, const OscillatorParams& osc) noexcept;

}  // namespace sedcat
