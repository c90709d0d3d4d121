#include "sedcat/sed/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sedcat/errors.hpp"

namespace sedcat::sed {

namespace {

SedRecord summarize(const EnsembleSnapshot& s, const OscillatorParams& osc)
{
    const auto n = static_cast<double>(s.size());
    double mx = 0.0, mv = 0.0, xx = 0.0, vv = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        mx += s.x[i];
        mv += s.v[i];
        xx += s.x[i] * s.x[i];
        vv += s.v[i] * s.v[i];
    }
    mx /= n;
    mv /= n;
    xx /= n;
    vv /= n;
    SedRecord r;
    r.time = s.time;
    r.mean_energy = 0.5 * osc.mass * (vv + osc.omega0 * osc.omega0 * xx);
    r.var_x = xx - mx * mx;
    r.var_v = vv - mv * mv;
    return r;
}

double second_moment(const EnsembleSnapshot& s)
{
    double xx = 0.0;
    for (double x : s.x) {
        xx += x * x;
    }
    return xx / static_cast<double>(s.size());
}

}  // namespace

SedProtocol default_sed_protocol(const OscillatorParams& osc, std::uint64_t master_seed)
{
    SedProtocol p;
    p.zpf = default_zpf_spec(osc);
    p.master_seed = master_seed;
    return p;
}

SedRunResult run_sed_experiment(const OscillatorParams& osc, const LaserConfig& laser,
                                const SedProtocol& protocol)
{
    const double t0 = osc.period();
    const double tw = pulse_half_window(laser.tau);
    validate(protocol.zpf, osc, laser.tau);

    EnsembleConfig c;
    c.osc = osc;
    c.drive = DriveModel::kapitza_dirac(laser);
    c.zpf = protocol.zpf;
    c.n_particles = protocol.n_particles;
    c.master_seed = protocol.master_seed;
    c.preparation = protocol.preparation;
    c.relax_time = protocol.relax_time > 0.0 ? protocol.relax_time : 5.0 * osc.tau_d;
    c.t_start = -tw;
    c.threads = protocol.threads;

    // The step is needed to place the pulse end on the lattice; reuse the
    // ensemble's automatic choice.
    const double dt = std::min(t0, 2.0 * std::numbers::pi / c.zpf.omega_high) / 200.0;
    const auto pulse_steps = static_cast<std::size_t>(std::ceil(2.0 * tw / dt - 1e-9));
    const double t_pulse_end = c.t_start + static_cast<double>(pulse_steps) * dt;
    // <x^2> of free motion oscillates at 2 omega0, so a maximum lies within
    // half a period; the recombination instant follows a quarter period on.
    const double search = 0.75 * t0;
    const double dense_end = t_pulse_end + search + 0.25 * t0 + 2.0 * dt;
    c.t_end = dense_end + protocol.post_recombination_periods * t0;
    c.dt = dt;
    c.schedule.every = protocol.record_every;
    c.schedule.dense_windows = {{t_pulse_end, dense_end}};

    EnsembleRun run = run_ensemble(c);

    SedRunResult r;
    r.t_start = c.t_start;
    r.t_pulse_end = t_pulse_end;
    r.dt = run.dt;
    r.relaxation = run.relaxation;
    r.records.reserve(run.snapshots.size());
    for (const auto& s : run.snapshots) {
        r.records.push_back(summarize(s, osc));
    }

    auto index_at = [&](double t) {
        std::size_t best = 0;
        for (std::size_t i = 0; i < run.snapshots.size(); ++i) {
            if (std::abs(run.snapshots[i].time - t) < std::abs(run.snapshots[best].time - t)) {
                best = i;
            }
        }
        return best;
    };
    const std::size_t i_pulse = index_at(t_pulse_end);

    std::size_t i_sep = 0;
    bool found = false;
    double prev = second_moment(run.snapshots[i_pulse]);
    bool rising = false;
    for (std::size_t i = i_pulse + 1; i < run.snapshots.size(); ++i) {
        const auto& s = run.snapshots[i];
        if (s.time > t_pulse_end + search + 0.5 * dt) {
            break;
        }
        const double x2 = second_moment(s);
        if (rising && x2 < prev) {
            i_sep = i - 1;
            found = true;
            break;
        }
        rising = x2 > prev;
        prev = x2;
    }
    if (!found) {
        throw NumericalError("ensemble <x^2> has no maximum within the search window after the pulse");
    }
    const std::size_t i_rec = index_at(run.snapshots[i_sep].time + 0.25 * t0);

    r.t_separated = run.snapshots[i_sep].time;
    r.t_recombined = run.snapshots[i_rec].time;
    r.t_end = run.snapshots.back().time;
    r.initial = run.snapshots.front();
    r.pulse_end = run.snapshots[i_pulse];
    r.separated = run.snapshots[i_sep];
    r.recombined = run.snapshots[i_rec];
    r.final_state = run.snapshots.back();
    if (protocol.keep_snapshots) {
        r.snapshots = std::move(run.snapshots);
    }
    return r;
}

}  // namespace sedcat::sed
