#include "sedcat/sed/lorentz.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "sedcat/errors.hpp"
#include "sedcat/sed/integrator.hpp"

namespace sedcat::sed {

namespace {

using State4 = std::array<double, 4>;  // x, v_x, z, v_z

}  // namespace

LorentzValidationConfig default_lorentz_validation(const OscillatorParams& osc,
                                                   const LaserConfig& laser)
{
    LorentzValidationConfig c;
    c.osc = osc;
    c.laser = laser;
    c.x0 = osc.delta_x;
    c.t_end = pulse_half_window(laser.tau);
    c.t_start = -c.t_end;
    c.dt = osc.period() / 2000.0;
    return c;
}

LorentzTrajectories run_full_lorentz_validation(const LorentzValidationConfig& c)
{
    if (!(c.t_end > c.t_start)) {
        throw ParameterError("validation window is empty");
    }
    if (!(c.dt > 0.0) || c.dt > c.osc.period() / 200.0) {
        throw ParameterError("validation step must lie in (0, T0/200]");
    }
    const OscillatorParams& osc = c.osc;
    const LaserConfig& laser = c.laser;
    const double qm = osc.charge / osc.mass;
    const double w02 = osc.omega0 * osc.omega0;
    const double damp = c.damping ? osc.linewidth() : 0.0;

    auto deriv = [&](const State4& s, double t) {
        const FieldSample f = combined_field(s[0], t, laser, true);
        return State4{s[1], -w02 * s[0] - damp * s[1] + qm * s[3] * f.by, s[3],
                      qm * (f.ez + s[1] * f.by)};
    };
    auto rk4_full = [&](const State4& s, double t, double h) {
        const State4 k1 = deriv(s, t);
        State4 y;
        for (int i = 0; i < 4; ++i) y[i] = s[i] + 0.5 * h * k1[i];
        const State4 k2 = deriv(y, t + 0.5 * h);
        for (int i = 0; i < 4; ++i) y[i] = s[i] + 0.5 * h * k2[i];
        const State4 k3 = deriv(y, t + 0.5 * h);
        for (int i = 0; i < 4; ++i) y[i] = s[i] + h * k3[i];
        const State4 k4 = deriv(y, t + h);
        State4 out;
        for (int i = 0; i < 4; ++i) {
            out[i] = s[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        return out;
    };

    ForceModel reduced;
    reduced.osc = osc;
    reduced.drive = DriveModel::kapitza_dirac(laser);
    reduced.damping = c.damping;
    ForceModel free_model = reduced;
    free_model.drive = DriveModel::off();

    const double t0 = c.t_start;
    const double quiver = laser.a1 * std::sin(laser.k1 * c.x0 - laser.omega1 * t0) +
                          laser.a2 * std::sin(laser.k2 * c.x0 + laser.omega2 * t0);
    State4 full{c.x0, c.v0, 0.0, -qm * pulse_envelope(t0, laser.tau) * quiver};
    ParticleState red{c.x0, c.v0};
    ParticleState fre{c.x0, c.v0};

    const auto n_steps = static_cast<std::size_t>(std::ceil((c.t_end - t0) / c.dt - 1e-9));
    const auto tail_steps = static_cast<std::size_t>(std::llround(osc.period() / c.dt));

    LorentzTrajectories out;
    double sum_sq = 0.0;
    auto observe = [&](std::size_t k, double t) {
        const double d = full[0] - red.x;
        sum_sq += d * d;
        out.max_excursion = std::max(out.max_excursion, std::abs(red.x));
        if (k + tail_steps >= n_steps) {
            out.final_amplitude_full = std::max(out.final_amplitude_full, std::abs(full[0] - fre.x));
            out.final_amplitude_reduced =
                std::max(out.final_amplitude_reduced, std::abs(red.x - fre.x));
        }
        if (c.record_every > 0 && (k % c.record_every == 0 || k == n_steps)) {
            out.time.push_back(t);
            out.x_full.push_back(full[0]);
            out.x_reduced.push_back(red.x);
            out.x_free.push_back(fre.x);
            out.z_full.push_back(full[2]);
        }
    };

    observe(0, t0);
    for (std::size_t k = 0; k < n_steps; ++k) {
        const double t = t0 + static_cast<double>(k) * c.dt;
        full = rk4_full(full, t, c.dt);
        const double times[3] = {t, t + 0.5 * c.dt, t + c.dt};
        red = detail::rk4(red, c.dt, [&](double x, double v, int j) {
            return reduced.acceleration(x, v, times[j]);
        });
        fre = detail::rk4(fre, c.dt, [&](double x, double v, int j) {
            return free_model.acceleration(x, v, times[j]);
        });
        if (!std::isfinite(full[0]) || !std::isfinite(full[3]) || !std::isfinite(red.x)) {
            std::ostringstream os;
            os << "validation trajectory became non-finite at t = " << t << " s";
            throw StabilityError(os.str());
        }
        observe(k + 1, t + c.dt);
    }
    out.rms_difference = std::sqrt(sum_sq / static_cast<double>(n_steps + 1));
    return out;
}

}  // namespace sedcat::sed
