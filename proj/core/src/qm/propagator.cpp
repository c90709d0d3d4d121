#include "sedcat/qm/propagator.hpp"

#include <cmath>
#include <sstream>

#include "fft.hpp"
#include "sedcat/errors.hpp"

namespace sedcat::qm {

struct SplitStepPropagator::Plans {
    explicit Plans(std::size_t n)
        : forward(n, detail::FftPlan::Direction::forward),
          backward(n, detail::FftPlan::Direction::backward)
    {
    }
    detail::FftPlan forward;
    detail::FftPlan backward;
};

SplitStepPropagator::SplitStepPropagator(const GridSpec& grid, const OscillatorParams& osc,
                                         std::optional<LaserConfig> laser,
                                         PropagatorOptions options)
    : grid_(grid), osc_(osc), laser_(std::move(laser)), options_(options)
{
    validate(grid_);
    if (options_.enforce_step_limit && grid_.dt > osc_.period() / 2000.0 * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "split-step dt = " << grid_.dt / osc_.period()
           << " T0 exceeds the T0/2000 accuracy limit";
        throw ParameterError(os.str());
    }

    const std::size_t n = grid_.n_points;
    const double hbar = osc_.constants.hbar();
    const double mw2 = osc_.mass * osc_.omega0 * osc_.omega0;
    trap_phase_.resize(n);
    lattice_phase_.assign(n, 0.0);
    kinetic_.resize(n);
    static_kick_.resize(n);
    const double u0 = laser_ ? kd_potential_amplitude(*laser_, osc_) : 0.0;
    const double kl = laser_ ? laser_->lattice_wavenumber() : 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double x = grid_.x(j);
        trap_phase_[j] = 0.5 * mw2 * x * x / hbar;
        if (laser_) {
            lattice_phase_[j] = u0 * std::cos(kl * x) / hbar;
        }
        static_kick_[j] = std::polar(1.0, -trap_phase_[j] * 0.5 * grid_.dt);
        const double k = grid_.k(j);
        kinetic_[j] = std::polar(1.0 / static_cast<double>(n),
                                 -hbar * k * k / (2.0 * osc_.mass) * grid_.dt);
    }
    plans_ = std::make_unique<Plans>(n);
}

SplitStepPropagator::~SplitStepPropagator() = default;

void SplitStepPropagator::step(Wavefunction& psi)
{
    step_of_length(psi, grid_.dt);
    psi.time += grid_.dt;
}

void SplitStepPropagator::step_of_length(Wavefunction& psi, double h)
{
    const std::size_t n = grid_.n_points;
    if (psi.psi.size() != n) {
        throw ParameterError("wavefunction does not match the propagator grid");
    }
    const bool nominal = h == grid_.dt;
    double s = 0.0;
    if (laser_) {
        const double tm = psi.time + 0.5 * h;
        s = std::cos(laser_->difference_frequency() * tm) * drive_envelope(tm, laser_->tau);
    }

    std::complex<double>* buf = plans_->forward.data();
    auto kick = [&](const std::complex<double>* src, std::complex<double>* dst) {
        if (s == 0.0 && nominal) {
            for (std::size_t j = 0; j < n; ++j) {
                dst[j] = src[j] * static_kick_[j];
            }
        } else {
            for (std::size_t j = 0; j < n; ++j) {
                const double phase = -(trap_phase_[j] + s * lattice_phase_[j]) * 0.5 * h;
                dst[j] = src[j] * std::polar(1.0, phase);
            }
        }
    };

    kick(psi.psi.data(), buf);
    plans_->forward.execute();
    std::complex<double>* out = plans_->backward.data();
    if (nominal) {
        for (std::size_t j = 0; j < n; ++j) {
            out[j] = buf[j] * kinetic_[j];
        }
    } else {
        const double hbar = osc_.constants.hbar();
        for (std::size_t j = 0; j < n; ++j) {
            const double k = grid_.k(j);
            out[j] = buf[j] * std::polar(1.0 / static_cast<double>(n),
                                         -hbar * k * k / (2.0 * osc_.mass) * h);
        }
    }
    plans_->backward.execute();
    kick(out, psi.psi.data());
}

void SplitStepPropagator::check_health(const Wavefunction& psi, std::size_t steps_done) const
{
    const double norm = psi.norm();
    const double allowed =
        options_.norm_tolerance * std::max(1.0, static_cast<double>(steps_done) / 1e4);
    if (!std::isfinite(norm) || std::abs(norm - reference_norm_) > allowed) {
        std::ostringstream os;
        os << "norm drifted from " << reference_norm_ << " to " << norm << " after "
           << steps_done << " steps at t = " << psi.time << " s";
        throw StabilityError(os.str());
    }
    const double margin = options_.boundary_margin_dx * osc_.delta_x;
    double edge = 0.0;
    for (std::size_t j = 0; j < grid_.n_points; ++j) {
        const double x = grid_.x(j);
        if (x < grid_.x_min + margin || x > grid_.x_max - margin) {
            edge += std::norm(psi.psi[j]);
        }
    }
    edge *= grid_.dx();
    if (edge > options_.boundary_mass_limit) {
        std::ostringstream os;
        os << "probability " << edge << " within " << options_.boundary_margin_dx
           << " Delta_x of the grid boundary at t = " << psi.time << " s";
        throw DomainOverflowError(os.str());
    }
}

void SplitStepPropagator::advance(Wavefunction& psi, double t_end, const Observer& observer,
                                  std::size_t every)
{
    const double t_start = psi.time;
    if (!(t_end >= t_start)) {
        throw ParameterError("propagation end time precedes the start time");
    }
    reference_norm_ = psi.norm();
    if (std::abs(reference_norm_ - 1.0) > 1e-6) {
        std::ostringstream os;
        os << "propagation requires a normalized state (norm = " << reference_norm_ << ")";
        throw ParameterError(os.str());
    }
    check_health(psi, 0);

    const double span = t_end - t_start;
    const double dt = grid_.dt;
    auto full = static_cast<std::size_t>(std::floor(span / dt * (1.0 + 1e-12)));
    const double rest = span - static_cast<double>(full) * dt;
    const bool tail = rest > 1e-9 * dt;
    const std::size_t total = full + (tail ? 1 : 0);

    for (std::size_t k = 1; k <= total; ++k) {
        const bool last = k == total;
        if (k <= full) {
            step_of_length(psi, dt);
            psi.time = t_start + static_cast<double>(k) * dt;
        } else {
            step_of_length(psi, rest);
            psi.time = t_end;
        }
        if (k % options_.check_every == 0 || last) {
            check_health(psi, k);
        }
        if (observer && ((every > 0 && k % every == 0) || last)) {
            observer(psi, k);
        }
    }
}

Wavefunction propagate(Wavefunction psi, const OscillatorParams& osc,
                       const std::optional<LaserConfig>& laser, const GridSpec& grid,
                       double t_start, double t_end)
{
    SplitStepPropagator prop(grid, osc, laser);
    psi.time = t_start;
    prop.advance(psi, t_end);
    return psi;
}

}  // namespace sedcat::qm
