#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "sedcat/physics.hpp"

namespace sedcat::sed {

// Uniform mode comb omega_n = omega_low + (n + 1/2) d_omega, n < n_modes,
// d_omega = (omega_high - omega_low) / n_modes.
struct ZpfSpec {
    double omega_low = 0.0;   // rad/s
    double omega_high = 0.0;  // rad/s
    std::size_t n_modes = 10000;
    std::uint64_t seed = 0;
    // Draw a direction cosine per mode and evaluate cos(k_x x - w t + theta)
    // instead of the long-wavelength form. Off by default.
    bool spatial = false;

    double spacing() const noexcept
    {
        return (omega_high - omega_low) / static_cast<double>(n_modes);
    }
    double frequency(std::size_t n) const noexcept
    {
        return omega_low + (static_cast<double>(n) + 0.5) * spacing();
    }
};

// Default window [0.5, 1.5] omega0 with 10^4 modes.
ZpfSpec default_zpf_spec(const OscillatorParams& osc, std::uint64_t seed = 0);

// Throws SpectralCoverageError if omega0 lies outside the window, if the
// window spans fewer than 100 linewidths or less than 1/tau (when tau > 0)
// on either side of omega0, or if the mode spacing exceeds half a linewidth.
// Throws ParameterError for n_modes < 1000 or non-finite bounds.
void validate(const ZpfSpec& spec, const OscillatorParams& osc, double tau = 0.0);

// Stationary variance of x for the damped oscillator driven through q E by
// modes of squared amplitude E_n^2:
//   sum_n (q/m)^2 E_n^2 / 2 / ((w0^2 - w_n^2)^2 + (gamma w_n)^2).
double steady_state_variance(const std::vector<double>& omegas,
                             const std::vector<double>& amplitudes,
                             const OscillatorParams& osc);

// Constant C in E_n^2 = C w_n^3 d_omega making steady_state_variance equal
// to hbar / (2 m w0) on the spec's comb. Throws CalibrationError when the
// oscillator is undamped or uncharged.
double calibrate_spectral_constant(const ZpfSpec& spec, const OscillatorParams& osc);

// hbar / (3 pi^2 eps0 c^3): C in E_n^2 = C w^3 d_omega for one Cartesian
// component of the isotropic zero-point field, whose mean square is
// hbar w^3 d_omega / (6 pi^2 eps0 c^3). For comparison with the calibrated value.
double physical_spectral_constant(const PhysicalConstants& k);

class ZpfRealization {
public:
    const ZpfSpec& spec() const noexcept { return spec_; }
    const std::vector<double>& frequencies() const noexcept { return omega_; }
    const std::vector<double>& amplitudes() const noexcept { return amp_; }    // V/m
    const std::vector<double>& phases() const noexcept { return theta_; }      // rad
    const std::vector<double>& wavenumbers() const noexcept { return kx_; }    // 1/m, spatial only
    double spectral_constant() const noexcept { return constant_; }

private:
    friend ZpfRealization synthesize_zpf(const ZpfSpec&, const OscillatorParams&, double);
    friend ZpfRealization synthesize_zpf(const ZpfSpec&, double, std::mt19937_64&,
                                         const PhysicalConstants&);
    ZpfSpec spec_;
    std::vector<double> omega_, amp_, theta_, kx_;
    double constant_ = 0.0;
};

// Phases theta_n uniform on [0, 2 pi), drawn in mode order from
// mt19937_64(spec.seed); in spatial mode the direction cosines follow.
ZpfRealization synthesize_zpf(const ZpfSpec& spec, const OscillatorParams& osc,
                              double spectral_constant);
ZpfRealization synthesize_zpf(const ZpfSpec& spec, const OscillatorParams& osc);

// Same draw order, continuing an existing engine; used by the ensemble so
// that phases and initial conditions come from one per-particle stream.
ZpfRealization synthesize_zpf(const ZpfSpec& spec, double spectral_constant,
                              std::mt19937_64& rng, const PhysicalConstants& constants = kCodata);

// Exact mode sum sum_n E_n cos(w_n t + theta_n) at x = 0 [V/m].
double zpf_field(const ZpfRealization& z, double t) noexcept;
// Spatial variant sum_n E_n cos(w_n t + theta_n - k_n x), k_n = (w_n / c) mu_n;
// reduces to the long-wavelength form at x = 0.
double zpf_field(const ZpfRealization& z, double x, double t) noexcept;

// Force scale of the field within the oscillator linewidth
// |w - w0| <= gamma / 2, q sqrt(sum E_n^2 / 2), compared with the vacuum
// force scale of the strong-drive check.
struct ZpfForceScale {
    double linewidth_force = 0.0;  // N
    double reference_force = 0.0;  // N
    double ratio = 0.0;            // reference / linewidth
};

ZpfForceScale zpf_force_scale(const ZpfRealization& z, const OscillatorParams& osc);

// Samples of the long-wavelength field on a uniform time lattice
// t_i = t0 + i h, i < count, from a baseband FFT of the realization on a
// coarse lattice followed by four-point Lagrange interpolation and
// remodulation. One instance is meant to be reused for many realizations
// on the same spec.
class ZpfSampler {
public:
    explicit ZpfSampler(const ZpfSpec& spec);
    ~ZpfSampler();
    ZpfSampler(const ZpfSampler&) = delete;
    ZpfSampler& operator=(const ZpfSampler&) = delete;

    // Recurrence period 2 pi / d_omega of the comb [s].
    double recurrence_period() const noexcept;
    std::size_t fft_size() const noexcept;

    // out[i] = field at t0 + i h, evaluated at position x (spatial
    // realizations only; x is ignored otherwise). Throws ParameterError when
    // the window exceeds the recurrence period.
    void sample(const ZpfRealization& z, double t0, double h, std::size_t count,
                std::vector<double>& out, double x = 0.0);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace sedcat::sed
