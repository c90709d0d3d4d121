#include "sedcat/sed/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sedcat/errors.hpp"

namespace sedcat::sed {

DriveModel DriveModel::kapitza_dirac(const LaserConfig& laser)
{
    DriveModel d;
    d.kind = DriveKind::kapitza_dirac;
    d.laser = laser;
    return d;
}

DriveModel DriveModel::parametric(double depth, double frequency)
{
    DriveModel d;
    d.kind = DriveKind::linear_parametric;
    d.depth = depth;
    d.frequency = frequency;
    return d;
}

double DriveModel::acceleration(double x, double t, const OscillatorParams& osc) const noexcept
{
    switch (kind) {
    case DriveKind::kapitza_dirac:
        return kd_force(x, t, laser, osc, true) / osc.mass;
    case DriveKind::linear_parametric:
        return -osc.omega0 * osc.omega0 * depth * std::cos(frequency * t) * x;
    case DriveKind::none:
        break;
    }
    return 0.0;
}

double ForceModel::acceleration(double x, double v, double t) const noexcept
{
    const double w0 = osc.omega0;
    double a = -w0 * w0 * x + drive.acceleration(x, t, osc);
    if (damping) {
        a -= osc.linewidth() * v;
    }
    if (zpf != nullptr) {
        a += osc.charge / osc.mass * zpf_field(*zpf, x, t);
    }
    return a;
}

double max_step(const ForceModel& model) noexcept
{
    double fastest = model.osc.period();
    if (model.zpf != nullptr) {
        fastest = std::min(fastest, 2.0 * std::numbers::pi / model.zpf->spec().omega_high);
    }
    return fastest / 200.0;
}

ParticleState step_particle(const ParticleState& s, double t, double dt, const ForceModel& model)
{
    if (!(dt > 0.0) || dt > max_step(model) * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "SED step " << dt << " s outside (0, " << max_step(model) << "] s";
        throw ParameterError(os.str());
    }
    const double times[3] = {t, t + 0.5 * dt, t + dt};
    const ParticleState out = detail::rk4(s, dt, [&](double x, double v, int j) {
        return model.acceleration(x, v, times[j]);
    });
    if (!std::isfinite(out.x) || !std::isfinite(out.v)) {
        std::ostringstream os;
        os << "particle state became non-finite at t = " << t << " s (x = " << s.x
           << " m, v = " << s.v << " m/s before the step)";
        throw StabilityError(os.str());
    }
    return out;
}

}  // namespace sedcat::sed
