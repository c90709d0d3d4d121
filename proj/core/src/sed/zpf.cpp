#include "sedcat/sed/zpf.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fft.hpp"
#include "sedcat/errors.hpp"

namespace sedcat::sed {

namespace {

constexpr double kPi = std::numbers::pi;

double response(double w, const OscillatorParams& osc)
{
    const double w0 = osc.omega0;
    const double g = osc.linewidth();
    const double d = w0 * w0 - w * w;
    return 1.0 / (d * d + g * g * w * w);
}

}  // namespace

ZpfSpec default_zpf_spec(const OscillatorParams& osc, std::uint64_t seed)
{
    ZpfSpec s;
    s.omega_low = 0.5 * osc.omega0;
    s.omega_high = 1.5 * osc.omega0;
    s.n_modes = 10000;
    s.seed = seed;
    return s;
}

void validate(const ZpfSpec& spec, const OscillatorParams& osc, double tau)
{
    if (!std::isfinite(spec.omega_low) || !std::isfinite(spec.omega_high)) {
        throw ParameterError("ZPF window bounds must be finite");
    }
    if (spec.n_modes < 1000) {
        throw ParameterError("ZPF needs at least 1000 modes");
    }
    const double w0 = osc.omega0;
    if (!(spec.omega_low > 0.0) || !(spec.omega_low < w0) || !(spec.omega_high > w0)) {
        std::ostringstream os;
        os << "ZPF window [" << spec.omega_low / w0 << ", " << spec.omega_high / w0
           << "] omega0 must contain omega0 with a positive lower bound";
        throw SpectralCoverageError(os.str());
    }
    const double side = std::min(w0 - spec.omega_low, spec.omega_high - w0);
    const double g = osc.linewidth();
    if (g > 0.0 && side < 100.0 * g) {
        std::ostringstream os;
        os << "ZPF window reaches only " << side / g
           << " linewidths from omega0 (need >= 100)";
        throw SpectralCoverageError(os.str());
    }
    if (tau > 0.0 && side < 1.0 / tau) {
        throw SpectralCoverageError("ZPF window narrower than the pulse bandwidth 1/tau");
    }
    if (g > 0.0 && spec.spacing() > 0.5 * g) {
        std::ostringstream os;
        os << "ZPF mode spacing is " << spec.spacing() / g
           << " linewidths; need <= 0.5 to resolve the resonance";
        throw SpectralCoverageError(os.str());
    }
}

double steady_state_variance(const std::vector<double>& omegas,
                             const std::vector<double>& amplitudes,
                             const OscillatorParams& osc)
{
    const double qm = osc.charge / osc.mass;
    double s = 0.0;
    for (std::size_t n = 0; n < omegas.size(); ++n) {
        s += amplitudes[n] * amplitudes[n] * 0.5 * response(omegas[n], osc);
    }
    return qm * qm * s;
}

double calibrate_spectral_constant(const ZpfSpec& spec, const OscillatorParams& osc)
{
    if (osc.undamped() || osc.charge == 0.0) {
        throw CalibrationError("ZPF calibration needs a charged, damped oscillator");
    }
    const double qm = osc.charge / osc.mass;
    const double dw = spec.spacing();
    double s = 0.0;
    for (std::size_t n = 0; n < spec.n_modes; ++n) {
        const double w = spec.frequency(n);
        s += w * w * w * dw * 0.5 * response(w, osc);
    }
    const double target = osc.constants.hbar() / (2.0 * osc.mass * osc.omega0);
    const double c = target / (qm * qm * s);
    if (!std::isfinite(c) || !(c > 0.0)) {
        throw CalibrationError("ZPF spectral constant is not finite");
    }
    return c;
}

double physical_spectral_constant(const PhysicalConstants& k)
{
    return k.hbar() / (3.0 * kPi * kPi * k.epsilon0() * k.c() * k.c() * k.c());
}

ZpfRealization synthesize_zpf(const ZpfSpec& spec, double spectral_constant,
                              std::mt19937_64& rng, const PhysicalConstants& constants)
{
    ZpfRealization z;
    z.spec_ = spec;
    z.constant_ = spectral_constant;
    const std::size_t n = spec.n_modes;
    const double dw = spec.spacing();
    z.omega_.resize(n);
    z.amp_.resize(n);
    z.theta_.resize(n);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double w = spec.frequency(i);
        z.omega_[i] = w;
        z.amp_[i] = std::sqrt(spectral_constant * w * w * w * dw);
        z.theta_[i] = 2.0 * kPi * uniform(rng);
    }
    if (spec.spatial) {
        z.kx_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double mu = 2.0 * uniform(rng) - 1.0;
            z.kx_[i] = z.omega_[i] / constants.c() * mu;
        }
    }
    return z;
}

ZpfRealization synthesize_zpf(const ZpfSpec& spec, const OscillatorParams& osc,
                              double spectral_constant)
{
    validate(spec, osc);
    std::mt19937_64 rng(spec.seed);
    return synthesize_zpf(spec, spectral_constant, rng, osc.constants);
}

ZpfRealization synthesize_zpf(const ZpfSpec& spec, const OscillatorParams& osc)
{
    validate(spec, osc);
    return synthesize_zpf(spec, osc, calibrate_spectral_constant(spec, osc));
}

double zpf_field(const ZpfRealization& z, double t) noexcept
{
    const auto& w = z.frequencies();
    const auto& a = z.amplitudes();
    const auto& th = z.phases();
    double s = 0.0;
    for (std::size_t n = 0; n < w.size(); ++n) {
        s += a[n] * std::cos(w[n] * t + th[n]);
    }
    return s;
}

double zpf_field(const ZpfRealization& z, double x, double t) noexcept
{
    const auto& k = z.wavenumbers();
    if (k.empty()) {
        return zpf_field(z, t);
    }
    const auto& w = z.frequencies();
    const auto& a = z.amplitudes();
    const auto& th = z.phases();
    double s = 0.0;
    for (std::size_t n = 0; n < w.size(); ++n) {
        s += a[n] * std::cos(w[n] * t + th[n] - k[n] * x);
    }
    return s;
}

ZpfForceScale zpf_force_scale(const ZpfRealization& z, const OscillatorParams& osc)
{
    const double half = 0.5 * osc.linewidth();
    double e2 = 0.0;
    for (std::size_t n = 0; n < z.frequencies().size(); ++n) {
        if (std::abs(z.frequencies()[n] - osc.omega0) <= half) {
            e2 += 0.5 * z.amplitudes()[n] * z.amplitudes()[n];
        }
    }
    ZpfForceScale f;
    f.linewidth_force = std::abs(osc.charge) * std::sqrt(e2);
    const auto& k = osc.constants;
    const double w0 = osc.omega0;
    f.reference_force = std::abs(osc.charge) / (2.0 * kPi) *
                        std::sqrt(k.hbar() * osc.gamma * w0 * w0 * w0 * w0 * w0 /
                                  (k.epsilon0() * k.c() * k.c() * k.c()));
    f.ratio = f.linewidth_force > 0.0 ? f.reference_force / f.linewidth_force : 0.0;
    return f;
}

struct ZpfSampler::Impl {
    Impl(const ZpfSpec& s, std::size_t m)
        : spec(s), fft(m, detail::FftPlan::Direction::backward)
    {
    }
    ZpfSpec spec;
    detail::FftPlan fft;
};

ZpfSampler::ZpfSampler(const ZpfSpec& spec)
{
    // Baseband offsets reach (n_modes/2) d_omega, so a coarse step
    // h_c = 2 pi / (d_omega M) gives a phase advance of pi n_modes / M per
    // step; M >= 8 pi n_modes keeps it below 1/8 rad, where cubic
    // interpolation errs by ~1e-5 of a mode amplitude.
    const auto need = static_cast<std::size_t>(std::ceil(8.0 * kPi * static_cast<double>(spec.n_modes)));
    impl_ = std::make_unique<Impl>(spec, std::bit_ceil(need));
}

ZpfSampler::~ZpfSampler() = default;

double ZpfSampler::recurrence_period() const noexcept
{
    return 2.0 * kPi / impl_->spec.spacing();
}

std::size_t ZpfSampler::fft_size() const noexcept
{
    return impl_->fft.size();
}

void ZpfSampler::sample(const ZpfRealization& z, double t0, double h, std::size_t count,
                        std::vector<double>& out, double x)
{
    const ZpfSpec& spec = impl_->spec;
    if (z.frequencies().size() != spec.n_modes || z.spec().omega_low != spec.omega_low ||
        z.spec().omega_high != spec.omega_high) {
        throw ParameterError("realization does not match the sampler's mode comb");
    }
    const double period = recurrence_period();
    if (count > 0 && static_cast<double>(count - 1) * h > period) {
        std::ostringstream os;
        os << "sampling window " << static_cast<double>(count - 1) * h
           << " s exceeds the ZPF recurrence period " << period << " s";
        throw ParameterError(os.str());
    }

    const std::size_t m = impl_->fft.size();
    const double dw = spec.spacing();
    const auto half = static_cast<std::ptrdiff_t>(spec.n_modes / 2);
    const double w_ref = spec.omega_low + (static_cast<double>(half) + 0.5) * dw;
    const auto& kx = z.wavenumbers();

    std::complex<double>* buf = impl_->fft.data();
    std::fill(buf, buf + m, std::complex<double>(0.0, 0.0));
    for (std::size_t n = 0; n < spec.n_modes; ++n) {
        const std::ptrdiff_t j = static_cast<std::ptrdiff_t>(n) - half;
        const std::size_t idx = j >= 0 ? static_cast<std::size_t>(j)
                                       : m - static_cast<std::size_t>(-j);
        double phase = z.phases()[n] + static_cast<double>(j) * dw * t0;
        if (!kx.empty()) {
            phase -= kx[n] * x;
        }
        buf[idx] = std::polar(z.amplitudes()[n], phase);
    }
    impl_->fft.execute();

    const double hc = period / static_cast<double>(m);
    const double ratio = h / hc;
    const std::complex<double> rot = std::polar(1.0, w_ref * h);
    std::complex<double> carrier;
    out.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        if (i % 256 == 0) {
            carrier = std::polar(1.0, w_ref * (t0 + static_cast<double>(i) * h));
        } else {
            carrier *= rot;
        }
        const double u = static_cast<double>(i) * ratio;
        const double fl = std::floor(u);
        const double s = u - fl;
        const auto k = static_cast<std::size_t>(fl) % m;
        const std::size_t km1 = (k + m - 1) % m;
        const std::size_t k1 = (k + 1) % m;
        const std::size_t k2 = (k + 2) % m;
        const double wm1 = -s * (s - 1.0) * (s - 2.0) / 6.0;
        const double w0 = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
        const double w1 = -(s + 1.0) * s * (s - 2.0) / 2.0;
        const double w2 = (s + 1.0) * s * (s - 1.0) / 6.0;
        const std::complex<double> b = wm1 * buf[km1] + w0 * buf[k] + w1 * buf[k1] + w2 * buf[k2];
        out[i] = carrier.real() * b.real() - carrier.imag() * b.imag();
    }
}

}  // namespace sedcat::sed
