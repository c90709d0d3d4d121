#include "sedcat/qm/experiment.hpp"

#include <algorithm>
#include <cmath>

#include "sedcat/errors.hpp"
#include "sedcat/qm/observables.hpp"
#include "sedcat/qm/propagator.hpp"
#include "sedcat/qm/states.hpp"

namespace sedcat::qm {

QmProtocol default_qm_protocol(const OscillatorParams& osc)
{
    QmProtocol p;
    p.grid = make_grid(osc);
    return p;
}

QmRunResult run_qm_experiment(const OscillatorParams& osc, const LaserConfig& laser,
                              const QmProtocol& protocol)
{
    const GridSpec& grid = protocol.grid;
    SplitStepPropagator prop(grid, osc, laser);
    const FockProjector projector(grid, osc, protocol.fock_n_max);

    QmRunResult r;
    const double dt = grid.dt;
    r.t_start = -pulse_half_window(laser.tau);
    // Pulse end rounded up to the step lattice anchored at t_start.
    const auto pulse_steps =
        static_cast<std::size_t>(std::ceil((2.0 * -r.t_start) / dt - 1e-9));

    Wavefunction psi = ground_state(grid, osc);
    psi.time = r.t_start;
    r.initial = psi;

    std::size_t step = 0;
    auto time_of = [&](std::size_t k) { return r.t_start + static_cast<double>(k) * dt; };

    auto record = [&](const Wavefunction& w) {
        QmRecord rec;
        rec.time = w.time;
        rec.energy = energy_expectation(w, osc);
        rec.x2 = second_moment(w);
        const QuadratureReport q = quadratures(w);
        rec.sigma_x = q.sigma_x;
        rec.sigma_p = q.sigma_p;
        rec.norm = w.norm();
        rec.odd_population = projector.project(w).odd_total();
        r.max_odd_population = std::max(r.max_odd_population, rec.odd_population);
        r.records.push_back(rec);
    };
    auto on_step = [&](std::size_t k) {
        if (protocol.record_every > 0 && k % protocol.record_every == 0) {
            record(psi);
        }
        if (protocol.density_every > 0 && k % protocol.density_every == 0) {
            r.densities.push_back({psi.time, density(psi)});
        }
    };
    auto go_to = [&](std::size_t target) {
        const std::size_t base = step;
        prop.advance(psi, time_of(target),
                     [&](const Wavefunction&, std::size_t k) {
                         psi.time = time_of(base + k);
                         on_step(base + k);
                     },
                     1);
        step = target;
        psi.time = time_of(step);
    };

    on_step(0);
    go_to(pulse_steps);
    r.t_pulse_end = psi.time;
    r.pulse_end = psi;

    // First local maximum of <x^2> after the pulse.
    const auto period_steps = static_cast<std::size_t>(std::llround(osc.period() / dt));
    double prev_x2 = second_moment(psi);
    bool rising = false;
    bool found = false;
    for (std::size_t i = 0; i < 2 * period_steps; ++i) {
        Wavefunction before = psi;
        go_to(step + 1);
        const double x2 = second_moment(psi);
        if (rising && x2 < prev_x2) {
            r.separated = std::move(before);
            r.t_separated = r.separated.time;
            found = true;
            break;
        }
        rising = x2 > prev_x2;
        prev_x2 = x2;
    }
    if (!found) {
        throw NumericalError("no maximum of <x^2> found within two periods after the pulse");
    }
    const std::size_t sep_step = step - 1;
    const auto quarter = static_cast<std::size_t>(std::llround(0.25 * osc.period() / dt));
    go_to(sep_step + quarter);
    r.t_recombined = psi.time;
    r.recombined = psi;

    const auto tail = static_cast<std::size_t>(
        std::llround(protocol.post_recombination_periods * osc.period() / dt));
    go_to(step + tail);
    r.t_end = psi.time;
    r.final_state = psi;
    return r;
}

}  // namespace sedcat::qm
