#include "sedcat/sed/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "sedcat/errors.hpp"

namespace sedcat::sed {

std::uint64_t derive_subseed(std::uint64_t master, std::uint64_t index) noexcept
{
    std::uint64_t z = master + (index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double relaxation_tolerance(std::size_t n) noexcept
{
    return 0.05 + 4.0 / std::sqrt(static_cast<double>(std::max<std::size_t>(n, 1)));
}

namespace {

constexpr std::size_t kCheckpoints = 11;

// Spatial ZPF: the field is tabulated at Chebyshev nodes spanning
// +-kSpatialHalfWidth Delta_x and interpolated barycentrically in x.
constexpr std::size_t kSpatialNodes = 32;
constexpr double kSpatialHalfWidth = 25.0;

struct ChebyshevNodes {
    std::vector<double> x, w;
};

ChebyshevNodes chebyshev_nodes(double half_width)
{
    ChebyshevNodes c;
    for (std::size_t i = 0; i < kSpatialNodes; ++i) {
        c.x.push_back(half_width * std::cos(std::numbers::pi * static_cast<double>(i) /
                                            static_cast<double>(kSpatialNodes - 1)));
        double w = i % 2 == 0 ? 1.0 : -1.0;
        if (i == 0 || i == kSpatialNodes - 1) {
            w *= 0.5;
        }
        c.w.push_back(w);
    }
    return c;
}

// values[c * stride] holds the field at node c.
double barycentric(const ChebyshevNodes& nodes, const double* values, std::size_t stride, double x)
{
    double num = 0.0, den = 0.0;
    for (std::size_t c = 0; c < nodes.x.size(); ++c) {
        const double d = x - nodes.x[c];
        if (d == 0.0) {
            return values[c * stride];
        }
        const double t = nodes.w[c] / d;
        num += t * values[c * stride];
        den += t;
    }
    return num / den;
}

struct Plan {
    double dt = 0.0;
    std::size_t n_steps = 0;
    std::size_t relax_steps = 0;
    std::vector<std::size_t> snapshot_steps;   // run-relative step indices
    std::vector<std::size_t> checkpoint_steps; // relax-relative step indices
    std::vector<double> drive_table;           // per half-step of the run
    double drive_wavenumber = 0.0;
    double excursion_guard = 0.0;
    double spectral_constant = 0.0;
};

std::vector<std::size_t> schedule_steps(const SnapshotSchedule& s, double t0, double dt,
                                        std::size_t n_steps)
{
    std::set<std::size_t> steps{0, n_steps};
    if (s.every > 0) {
        for (std::size_t k = 0; k <= n_steps; k += s.every) {
            steps.insert(k);
        }
    }
    for (const auto& [a, b] : s.dense_windows) {
        for (std::size_t k = 0; k <= n_steps; ++k) {
            const double t = t0 + static_cast<double>(k) * dt;
            if (t >= a - 1e-9 * dt && t <= b + 1e-9 * dt) {
                steps.insert(k);
            }
        }
    }
    for (double t : s.times) {
        const double u = std::round((t - t0) / dt);
        if (u < 0.0 || u > static_cast<double>(n_steps)) {
            std::ostringstream os;
            os << "requested snapshot time " << t << " s lies outside the run";
            throw ParameterError(os.str());
        }
        steps.insert(static_cast<std::size_t>(u));
    }
    return {steps.begin(), steps.end()};
}

Plan make_plan(const EnsembleConfig& c)
{
    if (c.n_particles == 0) {
        throw ParameterError("ensemble needs at least one particle");
    }
    if (!(c.t_end >= c.t_start)) {
        throw ParameterError("ensemble end time precedes the start time");
    }
    if (c.zpf_on || c.preparation == GroundPreparation::relaxed) {
        validate(c.zpf, c.osc);
    }

    Plan p;
    const bool with_zpf = c.zpf_on || c.preparation == GroundPreparation::relaxed;
    const double fastest = with_zpf ? std::min(c.osc.period(), 2.0 * std::numbers::pi / c.zpf.omega_high)
                                    : c.osc.period();
    const double limit = fastest / 200.0;
    p.dt = c.dt > 0.0 ? c.dt : limit;
    if (p.dt > limit * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "ensemble step " << p.dt << " s exceeds the limit " << limit << " s";
        throw ParameterError(os.str());
    }
    p.n_steps = static_cast<std::size_t>(std::ceil((c.t_end - c.t_start) / p.dt - 1e-9));

    if (c.zpf_on && c.zpf.spatial && c.preparation == GroundPreparation::relaxed) {
        throw ParameterError("the spatial ZPF variant supports direct preparation only");
    }
    if (c.preparation == GroundPreparation::relaxed) {
        if (!(c.relax_time >= 5.0 * c.osc.tau_d * (1.0 - 1e-12))) {
            throw ParameterError("relaxed preparation needs relax_time >= 5 tau_d");
        }
        if (!c.zpf_on || !c.damping) {
            throw ParameterError("relaxed preparation needs the ZPF and damping on");
        }
        p.relax_steps = static_cast<std::size_t>(std::ceil(c.relax_time / p.dt - 1e-9));
        for (std::size_t i = 0; i < kCheckpoints; ++i) {
            const double f = 0.5 + 0.5 * static_cast<double>(i) / (kCheckpoints - 1);
            p.checkpoint_steps.push_back(
                static_cast<std::size_t>(std::llround(f * static_cast<double>(p.relax_steps))));
        }
    }

    p.snapshot_steps = schedule_steps(c.schedule, c.t_start, p.dt, p.n_steps);
    const double bytes = static_cast<double>(p.snapshot_steps.size()) *
                         static_cast<double>(c.n_particles) * 2.0 * sizeof(double);
    if (bytes > static_cast<double>(c.max_snapshot_bytes)) {
        std::ostringstream os;
        os << "snapshots would need " << bytes / (1 << 20) << " MiB, above the "
           << c.max_snapshot_bytes / (1 << 20) << " MiB guard; decimate the schedule";
        throw ParameterError(os.str());
    }

    const std::size_t half_steps = 2 * p.n_steps + 1;
    p.drive_table.assign(half_steps, 0.0);
    const OscillatorParams& osc = c.osc;
    switch (c.drive.kind) {
    case DriveKind::kapitza_dirac: {
        const LaserConfig& l = c.drive.laser;
        const double amp = kd_force_amplitude(l, osc) / osc.mass;
        p.drive_wavenumber = l.lattice_wavenumber();
        for (std::size_t j = 0; j < half_steps; ++j) {
            const double t = c.t_start + 0.5 * static_cast<double>(j) * p.dt;
            p.drive_table[j] = amp * std::cos(l.difference_frequency() * t) * drive_envelope(t, l.tau);
        }
        break;
    }
    case DriveKind::linear_parametric:
        for (std::size_t j = 0; j < half_steps; ++j) {
            const double t = c.t_start + 0.5 * static_cast<double>(j) * p.dt;
            p.drive_table[j] = -osc.omega0 * osc.omega0 * c.drive.depth * std::cos(c.drive.frequency * t);
        }
        break;
    case DriveKind::none:
        break;
    }

    double excursion = 10.0 * osc.delta_x;
    if (c.drive.kind == DriveKind::kapitza_dirac) {
        excursion = std::max(excursion, std::numbers::pi / p.drive_wavenumber);
    }
    p.excursion_guard = 50.0 * excursion;
    if (with_zpf) {
        p.spectral_constant = calibrate_spectral_constant(c.zpf, osc);
    }
    return p;
}

struct Failure {
    std::size_t particle = std::numeric_limits<std::size_t>::max();
    std::string message;
    bool numerical = true;
};

}  // namespace

EnsembleRun run_ensemble(const EnsembleConfig& c)
{
    const Plan plan = make_plan(c);
    const std::size_t n = c.n_particles;
    const OscillatorParams& osc = c.osc;

    auto seeds = std::make_shared<std::vector<std::uint64_t>>(n);
    for (std::size_t i = 0; i < n; ++i) {
        (*seeds)[i] = derive_subseed(c.master_seed, i);
    }

    EnsembleRun run;
    run.dt = plan.dt;
    run.n_steps = plan.n_steps;
    run.subseeds = seeds;
    run.snapshots.resize(plan.snapshot_steps.size());
    for (std::size_t s = 0; s < plan.snapshot_steps.size(); ++s) {
        auto& snap = run.snapshots[s];
        snap.time = c.t_start + static_cast<double>(plan.snapshot_steps[s]) * plan.dt;
        snap.x.assign(n, 0.0);
        snap.v.assign(n, 0.0);
        snap.master_seed = c.master_seed;
        snap.subseeds = seeds;
    }
    std::vector<double> checkpoint_x(plan.checkpoint_steps.size() * n, 0.0);

    const bool relaxed = c.preparation == GroundPreparation::relaxed;
    const bool with_zpf = c.zpf_on;
    const double w02 = osc.omega0 * osc.omega0;
    const double damp = c.damping ? osc.linewidth() : 0.0;
    const double qm = osc.charge / osc.mass;
    const double kl = plan.drive_wavenumber;
    const DriveKind kind = c.drive.kind;
    const double dt = plan.dt;
    const std::size_t total_steps = plan.relax_steps + plan.n_steps;
    const double t_first = c.t_start - static_cast<double>(plan.relax_steps) * dt;

    if (with_zpf) {
        const double window = static_cast<double>(total_steps) * dt;
        const double period = 2.0 * std::numbers::pi / c.zpf.spacing();
        if (window > period) {
            std::ostringstream os;
            os << "run of " << window << " s exceeds the ZPF recurrence period " << period
               << " s; use more modes";
            throw ParameterError(os.str());
        }
    }

    const bool spatial = with_zpf && c.zpf.spatial;
    const ChebyshevNodes nodes = chebyshev_nodes(kSpatialHalfWidth * osc.delta_x);
    const std::size_t samples = 2 * total_steps + 1;

    std::atomic<std::size_t> next{0};
    std::mutex failure_mutex;
    Failure failure;

    auto worker = [&]() {
        std::unique_ptr<ZpfSampler> sampler;
        if (with_zpf && total_steps > 0) {
            sampler = std::make_unique<ZpfSampler>(c.zpf);
        }
        std::vector<double> trace, node_trace;
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) {
                break;
            }
            try {
                std::mt19937_64 rng((*seeds)[i]);
                ParticleState s;
                if (with_zpf) {
                    ZpfSpec spec = c.zpf;
                    spec.seed = (*seeds)[i];
                    const ZpfRealization z =
                        synthesize_zpf(spec, plan.spectral_constant, rng, osc.constants);
                    if (total_steps > 0 && !spatial) {
                        sampler->sample(z, t_first, 0.5 * dt, samples, trace);
                    } else if (total_steps > 0) {
                        // Node-major layout transposed to time-major for locality.
                        trace.assign(samples * kSpatialNodes, 0.0);
                        for (std::size_t nc = 0; nc < kSpatialNodes; ++nc) {
                            sampler->sample(z, t_first, 0.5 * dt, samples, node_trace, nodes.x[nc]);
                            for (std::size_t j = 0; j < samples; ++j) {
                                trace[j * kSpatialNodes + nc] = node_trace[j];
                            }
                        }
                    }
                }
                if (!relaxed) {
                    std::normal_distribution<double> nx(0.0, osc.delta_x);
                    std::normal_distribution<double> nv(0.0, osc.delta_p / osc.mass);
                    s.x = nx(rng);
                    s.v = nv(rng);
                }

                std::size_t next_snap = 0;
                std::size_t next_check = 0;
                for (std::size_t g = 0; g <= total_steps; ++g) {
                    if (next_check < plan.checkpoint_steps.size() &&
                        plan.checkpoint_steps[next_check] == g) {
                        checkpoint_x[next_check * n + i] = s.x;
                        ++next_check;
                    }
                    if (g >= plan.relax_steps) {
                        const std::size_t k = g - plan.relax_steps;
                        while (next_snap < plan.snapshot_steps.size() &&
                               plan.snapshot_steps[next_snap] == k) {
                            run.snapshots[next_snap].x[i] = s.x;
                            run.snapshots[next_snap].v[i] = s.v;
                            ++next_snap;
                        }
                    }
                    if (g == total_steps) {
                        break;
                    }

                    const double* e = with_zpf && !spatial ? trace.data() + 2 * g : nullptr;
                    const double* es =
                        spatial ? trace.data() + 2 * g * kSpatialNodes : nullptr;
                    const bool in_run = g >= plan.relax_steps;
                    const double* d = in_run ? plan.drive_table.data() + 2 * (g - plan.relax_steps)
                                             : nullptr;
                    s = detail::rk4(s, dt, [&](double x, double v, int j) {
                        double a = -w02 * x - damp * v;
                        if (e != nullptr) {
                            a += qm * e[j];
                        } else if (es != nullptr) {
                            a += qm * barycentric(nodes, es + static_cast<std::size_t>(j) * kSpatialNodes, 1, x);
                        }
                        if (d != nullptr) {
                            if (kind == DriveKind::kapitza_dirac) {
                                a += d[j] * std::sin(kl * x);
                            } else if (kind == DriveKind::linear_parametric) {
                                a += d[j] * x;
                            }
                        }
                        return a;
                    });
                    const double guard = spatial ? kSpatialHalfWidth * osc.delta_x : plan.excursion_guard;
                    if (!std::isfinite(s.x) || !std::isfinite(s.v) || std::abs(s.x) > guard) {
                        std::ostringstream os;
                        os << "state left the stable domain at t = "
                           << t_first + static_cast<double>(g + 1) * dt << " s (x = " << s.x
                           << " m)";
                        throw StabilityError(os.str());
                    }
                }
            } catch (const Error& err) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (i < failure.particle) {
                    failure.particle = i;
                    failure.message = err.what();
                    failure.numerical = dynamic_cast<const NumericalError*>(&err) != nullptr;
                }
            }
        }
    };

    unsigned threads = c.threads > 0 ? c.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
        for (auto& t : pool) {
            t.join();
        }
    }

    if (failure.particle != std::numeric_limits<std::size_t>::max()) {
        std::ostringstream os;
        os << "particle " << failure.particle << " (subseed " << (*seeds)[failure.particle]
           << "): " << failure.message;
        if (failure.numerical) {
            throw StabilityError(os.str());
        }
        throw ParameterError(os.str());
    }

    if (relaxed) {
        RelaxationReport rep;
        rep.tolerance = relaxation_tolerance(n);
        for (std::size_t k = 0; k < plan.checkpoint_steps.size(); ++k) {
            double m = 0.0, m2 = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double x = checkpoint_x[k * n + i];
                m += x;
                m2 += x * x;
            }
            m /= static_cast<double>(n);
            rep.times.push_back(t_first + static_cast<double>(plan.checkpoint_steps[k]) * dt);
            rep.var_x.push_back(m2 / static_cast<double>(n) - m * m);
        }
        // Least-squares slope of Var(x) against time over the checkpoints.
        const std::size_t kc = rep.times.size();
        double tm = 0.0, vm = 0.0;
        for (std::size_t k = 0; k < kc; ++k) {
            tm += rep.times[k];
            vm += rep.var_x[k];
        }
        tm /= static_cast<double>(kc);
        vm /= static_cast<double>(kc);
        double stt = 0.0, stv = 0.0;
        for (std::size_t k = 0; k < kc; ++k) {
            stt += (rep.times[k] - tm) * (rep.times[k] - tm);
            stv += (rep.times[k] - tm) * (rep.var_x[k] - vm);
        }
        const double span = rep.times.back() - rep.times.front();
        rep.relative_trend = (stv / stt) * span / vm;
        run.relaxation = rep;
        if (!(std::abs(rep.relative_trend) <= rep.tolerance)) {
            std::ostringstream os;
            os << "relaxation not converged: Var(x) changes by " << rep.relative_trend * 100.0
               << "% over the last half of the relaxation (tolerance "
               << rep.tolerance * 100.0 << "%)";
            throw CalibrationError(os.str());
        }
    }
    return run;
}

EnsembleSnapshot prepare_ground_ensemble(std::size_t n, const OscillatorParams& osc,
                                         const ZpfSpec& zpf, GroundPreparation mode,
                                         std::uint64_t master_seed, double relax_time,
                                         unsigned threads)
{
    if (n < 100) {
        throw ParameterError("ground ensemble needs at least 100 particles");
    }
    EnsembleConfig c;
    c.osc = osc;
    c.zpf = zpf;
    c.zpf_on = true;
    c.damping = true;
    c.n_particles = n;
    c.master_seed = master_seed;
    c.preparation = mode;
    c.relax_time = relax_time > 0.0 ? relax_time : 5.0 * osc.tau_d;
    c.t_start = 0.0;
    c.t_end = 0.0;
    c.threads = threads;
    EnsembleRun run = run_ensemble(c);
    return std::move(run.snapshots.front());
}

}  // namespace sedcat::sed
