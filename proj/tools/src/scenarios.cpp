#include "sedcat/app/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>

#include "sedcat/analysis/compare.hpp"
#include "sedcat/analysis/energy.hpp"
#include "sedcat/analysis/fringes.hpp"
#include "sedcat/analysis/histogram.hpp"
#include "sedcat/errors.hpp"
#include "sedcat/qm/experiment.hpp"
#include "sedcat/qm/observables.hpp"
#include "sedcat/qm/propagator.hpp"
#include "sedcat/qm/states.hpp"
#include "sedcat/qm/wigner.hpp"
#include "sedcat/sed/experiment.hpp"
#include "sedcat/sed/lorentz.hpp"
#include "sedcat/sed/zpf.hpp"

namespace sedcat::app {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Check make_check(int id, std::string name, double value, std::string limit, bool pass,
                 std::string detail)
{
    return {id, std::move(name), value, std::move(limit), pass, std::move(detail)};
}

void say(const Logger& log, const std::string& s)
{
    if (log) {
        log(s);
    }
}

// Runs body against a fresh manifest; a failure is recorded in the manifest
// before it propagates.
template <class Body>
ScenarioResult guarded(const fs::path& dir, const std::string& scenario,
                       const ExperimentConfig& config, Body&& body)
{
    ManifestWriter m(dir, scenario, config);
    try {
        body(m);
        m.finalize();
    } catch (const std::exception& e) {
        m.fail(e.what());
        throw;
    }
    return {m.path(), m.checks()};
}

analysis::SampledDensity grid_density(const qm::Wavefunction& psi)
{
    analysis::SampledDensity d;
    d.x0 = psi.grid.x_min;
    d.dx = psi.grid.dx();
    d.values = qm::density(psi);
    return d;
}

analysis::ModalityOptions modality_of(const ExperimentConfig& c)
{
    analysis::ModalityOptions o;
    o.peak_over_median = c.analysis.peak_over_median;
    o.valley_fraction = c.analysis.valley_fraction;
    return o;
}

analysis::FringeOptions fringe_options_of(const ExperimentConfig& c)
{
    analysis::FringeOptions o;
    o.window_periods = c.analysis.fringe_window_periods;
    return o;
}

json fringe_json(const analysis::FringeReport& f)
{
    return {{"separation_m", f.separation},
            {"predicted_lambda_m", f.predicted_lambda},
            {"measured_lambda_m", f.measured_lambda ? json(*f.measured_lambda) : json(nullptr)},
            {"contrast", f.contrast},
            {"extrema_contrast", f.extrema_contrast},
            {"spectral_peak_ratio", f.spectral_peak_ratio},
            {"wavenumber_used_per_m", f.wavenumber_used},
            {"window_half_width_m", f.window_half_width},
            {"peak_power", f.peak_power},
            {"noise_power", f.noise_power}};
}

json separation_json(const analysis::PacketSeparation& s)
{
    return {{"a_m", s.a}, {"left_m", s.left}, {"right_m", s.right}};
}

qm::WignerLattice wigner_lattice_of(const qm::GridSpec& grid, const OscillatorParams& osc)
{
    qm::WignerLattice l = qm::default_wigner_lattice(osc);
    l.half_width_x = -grid.x_min;
    l.nx = std::min<std::size_t>(256, grid.n_points);
    return l;
}

F64Array wigner_array(const qm::WignerMap& w)
{
    F64Array a;
    a.shape = {w.nx, w.np};
    a.axes = {"x", "p"};
    a.origin = {w.x0, w.p0};
    a.spacing = {w.dx, w.dp};
    a.units = {"m", "kg m/s"};
    a.value_unit = "1/(J s)";
    a.extra = {{"time_s", w.time}, {"marginal_l1", w.marginal_l1}, {"total", w.total}};
    a.data = w.values;
    return a;
}

// Per-snapshot particle histograms on a common x lattice; time axis listed
// explicitly because the dense window makes it non-uniform.
F64Array histogram_trajectory(const std::vector<sed::EnsembleSnapshot>& snaps, double half,
                              std::size_t bins)
{
    F64Array a;
    a.shape = {snaps.size(), bins};
    a.axes = {"time", "x"};
    const double w = 2.0 * half / static_cast<double>(bins);
    a.origin = {snaps.empty() ? 0.0 : snaps.front().time, -half + 0.5 * w};
    a.spacing = {0.0, w};
    a.units = {"s", "m"};
    a.value_unit = "1/m";
    std::vector<double> times;
    std::vector<double> outside;
    for (const auto& s : snaps) {
        const auto h = analysis::histogram(s.x, -half, half, bins, 1);
        // Density per particle of the whole ensemble, so escaped particles
        // lower the map instead of inflating it.
        const double scale = h.in_domain / static_cast<double>(s.size());
        for (double d : h.density) {
            a.data.push_back(d * scale);
        }
        times.push_back(s.time);
        outside.push_back(static_cast<double>(h.out_of_domain));
    }
    a.extra = {{"times_s", times}, {"out_of_domain", outside}};
    return a;
}

struct Upstream {
    ManifestReader qm;
    ManifestReader sed;
    ExperimentConfig physics;  // the qm-run config
};

Upstream load_upstream(const fs::path& root)
{
    Upstream u{ManifestReader(root / "qm-run" / "manifest.json"),
               ManifestReader(root / "sed-run" / "manifest.json"), {}};
    u.physics = u.qm.config();
    const ExperimentConfig s = u.sed.config();
    if (!(u.physics.oscillator == s.oscillator) || !(u.physics.laser == s.laser)) {
        throw IoError("qm-run and sed-run used different oscillator or laser parameters");
    }
    return u;
}

ScenarioResult qm_run(const ExperimentConfig& c, const fs::path& dir, const Logger& log)
{
    return guarded(dir, "qm-run", c, [&](ManifestWriter& m) {
        const OscillatorParams osc = oscillator_of(c);
        const LaserConfig laser = laser_of(c);
        const qm::QmProtocol proto = qm_protocol_of(c);
        const double hbar = osc.constants.hbar();

        say(log, "qm-run: free evolution of the ground state over 10 periods");
        {
            const auto psi0 = qm::ground_state(proto.grid, osc);
            const double e0 = qm::energy_expectation(psi0, osc);
            auto psi = psi0;
            qm::SplitStepPropagator prop(proto.grid, osc, std::nullopt);
            double drift = 0.0;
            prop.advance(psi, 10.0 * osc.period(),
                         [&](const qm::Wavefunction& w, std::size_t) {
                             drift = std::max(drift,
                                              std::abs(qm::energy_expectation(w, osc) / e0 - 1.0));
                         },
                         200);
            const double infid = 1.0 - qm::fidelity(psi0, psi);
            m.add_check(make_check(3, "undriven ground state over 10 periods",
                                   std::max(infid, drift), "< 1e-6",
                                   infid < 1e-6 && drift < 1e-6,
                                   fmt("1 - fidelity = %.2e, max <E> drift %.2e", infid, drift)));
        }

        say(log, "qm-run: pulsed drive");
        const qm::QmRunResult r = qm::run_qm_experiment(osc, laser, proto);

        std::vector<CsvColumn> ts = {{"time", "s", {}},          {"energy", "J", {}},
                                     {"x2", "m^2", {}},          {"sigma_x", "m", {}},
                                     {"sigma_p", "kg m/s", {}}, {"norm", "1", {}},
                                     {"odd_population", "1", {}}};
        for (const auto& rec : r.records) {
            ts[0].values.push_back(rec.time);
            ts[1].values.push_back(rec.energy);
            ts[2].values.push_back(rec.x2);
            ts[3].values.push_back(rec.sigma_x);
            ts[4].values.push_back(rec.sigma_p);
            ts[5].values.push_back(rec.norm);
            ts[6].values.push_back(rec.odd_population);
        }
        m.csv("timeseries.csv", "qm.timeseries", ts);

        if (!r.densities.empty()) {
            F64Array d;
            d.shape = {r.densities.size(), proto.grid.n_points};
            d.axes = {"time", "x"};
            d.origin = {r.densities.front().time, proto.grid.x_min};
            d.spacing = {static_cast<double>(proto.density_every) * proto.grid.dt, proto.grid.dx()};
            d.units = {"s", "m"};
            d.value_unit = "1/m";
            std::vector<double> times;
            for (const auto& f : r.densities) {
                times.push_back(f.time);
                d.data.insert(d.data.end(), f.rho.begin(), f.rho.end());
            }
            d.extra = {{"times_s", times}};
            m.f64("density.f64", "qm.density", d);
        }

        say(log, "qm-run: Wigner maps");
        const auto lattice = wigner_lattice_of(proto.grid, osc);
        m.f64("wigner_initial.f64", "qm.wigner.initial", wigner_array(qm::wigner(r.initial, osc, lattice)));
        m.f64("wigner_separated.f64", "qm.wigner.separated",
              wigner_array(qm::wigner(r.separated, osc, lattice)));
        m.f64("wigner_recombined.f64", "qm.wigner.recombined",
              wigner_array(qm::wigner(r.recombined, osc, lattice)));
        m.f64("psi_separated.f64", "qm.psi.separated", wavefunction_array(r.separated));
        m.f64("psi_recombined.f64", "qm.psi.recombined", wavefunction_array(r.recombined));

        say(log, "qm-run: number-state populations");
        const qm::FockProjector projector(proto.grid, osc, proto.fock_n_max);
        const auto p_init = projector.project(r.initial);
        const auto p_pulse = projector.project(r.pulse_end);
        const auto p_sep = projector.project(r.separated);
        const auto p_final = projector.project(r.final_state);
        std::vector<CsvColumn> fock = {{"n", "1", {}},           {"energy", "J", {}},
                                       {"p_initial", "1", {}},   {"p_pulse_end", "1", {}},
                                       {"p_separated", "1", {}}, {"p_final", "1", {}}};
        for (std::size_t n = 0; n < p_init.probability.size(); ++n) {
            fock[0].values.push_back(static_cast<double>(n));
            fock[1].values.push_back(osc.hbar_omega0() * (static_cast<double>(n) + 0.5));
            fock[2].values.push_back(p_init.probability[n]);
            fock[3].values.push_back(p_pulse.probability[n]);
            fock[4].values.push_back(p_sep.probability[n]);
            fock[5].values.push_back(p_final.probability[n]);
        }
        m.csv("fock_populations.csv", "qm.fock", fock);

        double worst = p_final.odd_total();
        for (const auto& rec : r.records) {
            if (rec.time >= r.t_pulse_end) {
                worst = std::max(worst, rec.odd_population);
            }
        }
        m.add_check(make_check(4, "parity after the pulse", worst, "< 1e-4", worst < 1e-4,
                               fmt("max odd-number population %.2e", worst)));

        m.set_summary("times_s", {{"start", r.t_start},
                                  {"pulse_end", r.t_pulse_end},
                                  {"separated", r.t_separated},
                                  {"recombined", r.t_recombined},
                                  {"end", r.t_end}});
        m.set_summary("grid", {{"x_min_m", proto.grid.x_min},
                               {"x_max_m", proto.grid.x_max},
                               {"n_points", proto.grid.n_points},
                               {"dt_s", proto.grid.dt}});
        m.set_summary("units", {{"delta_x_m", osc.delta_x},
                                {"delta_p_kg_m_per_s", osc.delta_p},
                                {"period_s", osc.period()},
                                {"hbar_omega0_J", osc.hbar_omega0()},
                                {"hbar_J_s", hbar}});
        m.set_summary("mean_n_final", p_final.mean_n());
    });
}

ScenarioResult sed_run(const ExperimentConfig& c, const fs::path& dir, const Logger& log)
{
    return guarded(dir, "sed-run", c, [&](ManifestWriter& m) {
        const OscillatorParams osc = oscillator_of(c);
        const LaserConfig laser = laser_of(c);
        sed::SedProtocol proto = sed_protocol_of(c);
        proto.keep_snapshots = true;

        say(log, fmt("sed-run: %zu particles", proto.n_particles));
        const sed::SedRunResult r = sed::run_sed_experiment(osc, laser, proto);

        std::vector<CsvColumn> ts = {{"time", "s", {}},
                                     {"mean_energy", "J", {}},
                                     {"var_x", "m^2", {}},
                                     {"var_v", "m^2/s^2", {}}};
        for (const auto& rec : r.records) {
            ts[0].values.push_back(rec.time);
            ts[1].values.push_back(rec.mean_energy);
            ts[2].values.push_back(rec.var_x);
            ts[3].values.push_back(rec.var_v);
        }
        m.csv("timeseries.csv", "sed.timeseries", ts);

        const double half = c.analysis.histogram_half_width_dx * osc.delta_x;
        m.f64("histograms.f64", "sed.histograms",
              histogram_trajectory(r.snapshots, half, c.analysis.bins));

        m.f64("ensemble_initial.f64", "sed.ensemble.initial", ensemble_array(r.initial));
        m.f64("ensemble_pulse_end.f64", "sed.ensemble.pulse_end", ensemble_array(r.pulse_end));
        m.f64("ensemble_separated.f64", "sed.ensemble.separated", ensemble_array(r.separated));
        m.f64("ensemble_recombined.f64", "sed.ensemble.recombined", ensemble_array(r.recombined));
        m.f64("ensemble_final.f64", "sed.ensemble.final", ensemble_array(r.final_state));

        constexpr std::size_t kEnergyBins = 64;
        const std::vector<const sed::EnsembleSnapshot*> at = {&r.initial, &r.pulse_end, &r.separated,
                                                              &r.final_state};
        double e_max = osc.hbar_omega0();
        for (const auto* s : at) {
            for (std::size_t i = 0; i < s->size(); ++i) {
                e_max = std::max(e_max, 0.5 * osc.mass *
                                            (s->v[i] * s->v[i] +
                                             osc.omega0 * osc.omega0 * s->x[i] * s->x[i]));
            }
        }
        std::vector<CsvColumn> ed = {{"energy_low", "J", {}},   {"energy_high", "J", {}},
                                     {"p_initial", "1", {}},   {"p_pulse_end", "1", {}},
                                     {"p_separated", "1", {}}, {"p_final", "1", {}}};
        for (std::size_t k = 0; k < at.size(); ++k) {
            const auto d = analysis::energy_distribution_sed(*at[k], osc, kEnergyBins, e_max);
            if (k == 0) {
                for (std::size_t b = 0; b < kEnergyBins; ++b) {
                    ed[0].values.push_back(d.levels[b]);
                    ed[1].values.push_back(d.levels[b + 1]);
                }
            }
            ed[2 + k].values = d.probability;
        }
        m.csv("energy_distribution.csv", "sed.energy_distribution", ed);

        json subseeds = json::array();
        if (r.initial.subseeds) {
            for (auto s : *r.initial.subseeds) {
                subseeds.push_back(s);
            }
        }
        m.set_seeds({{"rule", "subseed(i) = splitmix64 finalizer of master + (i + 1) * "
                              "0x9e3779b97f4a7c15"},
                     {"ensemble_master", proto.master_seed},
                     {"particle_subseeds", subseeds}});
        m.set_summary("times_s", {{"start", r.t_start},
                                  {"pulse_end", r.t_pulse_end},
                                  {"separated", r.t_separated},
                                  {"recombined", r.t_recombined},
                                  {"end", r.t_end},
                                  {"dt", r.dt}});
        m.set_summary("particles", proto.n_particles);
        if (r.relaxation) {
            m.set_summary("relaxation", {{"times_s", r.relaxation->times},
                                         {"var_x_m2", r.relaxation->var_x},
                                         {"relative_trend", r.relaxation->relative_trend},
                                         {"tolerance", r.relaxation->tolerance}});
        }
    });
}

ScenarioResult validate_appendix(const ExperimentConfig& c, const fs::path& dir, const Logger& log)
{
    return guarded(dir, "validate-appendix", c, [&](ManifestWriter& m) {
        const OscillatorParams osc = oscillator_of(c);
        const LaserConfig laser = laser_of(c);
        say(log, "validate-appendix: full Lorentz force against the reduced drive");
        const auto cfg = sed::default_lorentz_validation(osc, laser);
        const auto tr = sed::run_full_lorentz_validation(cfg);
        m.csv("trajectories.csv", "appendix.trajectories",
              {{"time", "s", tr.time},
               {"x_full", "m", tr.x_full},
               {"x_reduced", "m", tr.x_reduced},
               {"x_free", "m", tr.x_free},
               {"z_full", "m", tr.z_full}});
        const double rel = tr.relative_rms();
        m.add_check(make_check(11, "full Lorentz force against the reduced drive", rel, "< 0.05",
                               rel < 0.05,
                               fmt("RMS difference %.3f%% of the max excursion %.3f Delta_x",
                                   100.0 * rel, tr.max_excursion / osc.delta_x)));
        m.set_summary("validation", {{"x0_m", cfg.x0},
                                     {"t_start_s", cfg.t_start},
                                     {"t_end_s", cfg.t_end},
                                     {"dt_s", cfg.dt},
                                     {"rms_difference_m", tr.rms_difference},
                                     {"max_excursion_m", tr.max_excursion},
                                     {"final_amplitude_full_m", tr.final_amplitude_full},
                                     {"final_amplitude_reduced_m", tr.final_amplitude_reduced}});
    });
}

ScenarioResult calibrate_zpf(const ExperimentConfig& c, const fs::path& dir, const Logger& log)
{
    return guarded(dir, "calibrate-zpf", c, [&](ManifestWriter& m) {
        const OscillatorParams osc = oscillator_of(c);
        sed::ZpfSpec zpf = zpf_of(c);
        const std::uint64_t master = calibration_seed(c.run.seed);
        const double relax = c.ensemble.relax_time > 0.0 ? c.ensemble.relax_time : 5.0 * osc.tau_d;
        say(log, fmt("calibrate-zpf: relaxing %zu particles for %.3g s, drive off",
                     c.ensemble.particles, relax));
        const auto snap = sed::prepare_ground_ensemble(c.ensemble.particles, osc, zpf,
                                                       sed::GroundPreparation::relaxed, master,
                                                       relax, c.ensemble.threads);
        m.f64("ensemble.f64", "calibration.ensemble", ensemble_array(snap));

        const auto mom = analysis::ensemble_moments(snap);
        const double vx = mom.var_x / (osc.delta_x * osc.delta_x);
        const double sp = osc.delta_p / osc.mass;
        const double vp = mom.var_v / (sp * sp);
        const double calibrated = sed::calibrate_spectral_constant(zpf, osc);
        const double physical = sed::physical_spectral_constant(osc.constants);
        const json report = {{"var_x_over_hbar_2m_omega0", vx},
                             {"var_mv_over_hbar_m_omega0_2", vp},
                             {"mean_x_m", mom.mean_x},
                             {"mean_v_m_per_s", mom.mean_v},
                             {"cov_xv_m2_per_s", mom.cov_xv},
                             {"particles", snap.size()},
                             {"relax_time_s", relax},
                             {"spectral_constant_calibrated", calibrated},
                             {"spectral_constant_physical", physical},
                             {"spectral_constant_ratio", calibrated / physical}};
        m.json("calibration.json", "calibration.report", report);
        const double worst = std::max(std::abs(vx - 1.0), std::abs(vp - 1.0));
        m.add_check(make_check(7, "ZPF ground-state calibration", worst, "< 0.1", worst < 0.1,
                               fmt("Var(x) %+.2f%%, Var(mv) %+.2f%% of the ground-state values",
                                   100.0 * (vx - 1.0), 100.0 * (vp - 1.0))));
        json subseeds = json::array();
        if (snap.subseeds) {
            for (auto s : *snap.subseeds) {
                subseeds.push_back(s);
            }
        }
        m.set_seeds({{"rule", "ensemble_master = subseed(master, 2^64 - 1); particle i uses "
                              "subseed(ensemble_master, i); subseed(m, i) = splitmix64 "
                              "finalizer of m + (i + 1) * 0x9e3779b97f4a7c15"},
                     {"ensemble_master", master},
                     {"particle_subseeds", subseeds}});
        m.set_summary("calibration", report);
    });
}

ScenarioResult analyze(const ExperimentConfig& c, const fs::path& root, const fs::path& dir,
                       const Logger& log)
{
    return guarded(dir, "analyze", c, [&](ManifestWriter& m) {
        const Upstream up = load_upstream(root);
        m.add_input(up.qm.path());
        m.add_input(up.sed.path());
        const OscillatorParams osc = oscillator_of(up.physics);
        const double hbar = osc.constants.hbar();
        say(log, "analyze: packets, quadratures and fringes");

        const auto psi_sep = wavefunction_from(read_f64(up.qm.file("qm.psi.separated")));
        const auto psi_rec = wavefunction_from(read_f64(up.qm.file("qm.psi.recombined")));
        const auto sep = analysis::packet_separation(grid_density(psi_sep), modality_of(c));

        json quads = json::array();
        bool ok5 = true;
        double worst5 = 0.0;
        std::string detail5;
        for (int side : {-1, +1}) {
            const auto w = qm::auto_packet_window(psi_sep, osc, side);
            const auto q = qm::quadratures(psi_sep, w);
            const double sx = q.sigma_x / osc.delta_x;
            const double prod = q.product / (0.5 * hbar);
            ok5 = ok5 && sx < 1.0 && std::abs(prod - 1.0) < 0.1;
            worst5 = std::max(worst5, std::abs(prod - 1.0));
            detail5 += fmt("%s packet sigma_x = %.4f Delta_x, sigma_x sigma_p = %.4f hbar/2; ",
                           side < 0 ? "left" : "right", sx, prod);
            quads.push_back({{"side", side < 0 ? "left" : "right"},
                             {"mean_x_m", q.mean_x},
                             {"mean_p_kg_m_per_s", q.mean_p},
                             {"sigma_x_m", q.sigma_x},
                             {"sigma_p_kg_m_per_s", q.sigma_p},
                             {"product_J_s", q.product},
                             {"window_lo_m", q.window->lo},
                             {"window_hi_m", q.window->hi},
                             {"window_rolloff_m", q.window->rolloff},
                             {"packet_mass_fraction", q.packet_mass_fraction}});
        }
        detail5 += "limits sigma_x < Delta_x, product within 10%";
        m.add_check(make_check(5, "packet quadratures at the separated instant", worst5,
                               "sigma_x < Delta_x and |product - 1| < 0.1", ok5, detail5));

        const auto fq = analysis::fringe_analysis(grid_density(psi_rec), sep.a, osc,
                                                  fringe_options_of(c));
        const double dl = fq.measured_lambda ? *fq.measured_lambda / fq.predicted_lambda - 1.0 : 1.0;
        m.add_check(make_check(
            6, "quantum fringes at recombination", std::abs(dl),
            "|lambda / predicted - 1| < 0.1 and contrast > 0.5",
            fq.measured_lambda && std::abs(dl) < 0.1 && fq.contrast > 0.5,
            fmt("a = %.3f Delta_x, lambda = %.4f vs predicted %.4f Delta_x (%+.2f%%), contrast %.3f",
                sep.a / osc.delta_x, fq.measured_lambda ? *fq.measured_lambda / osc.delta_x : 0.0,
                fq.predicted_lambda / osc.delta_x, 100.0 * dl, fq.contrast)));

        const double half = c.analysis.histogram_half_width_dx * osc.delta_x;
        const auto ens_sep = ensemble_from(read_f64(up.sed.file("sed.ensemble.separated")));
        const auto ens_rec = ensemble_from(read_f64(up.sed.file("sed.ensemble.recombined")));
        json sed_sep;
        try {
            sed_sep = separation_json(analysis::packet_separation(
                analysis::sampled(analysis::histogram(ens_sep.x, -half, half, c.analysis.bins)),
                modality_of(c)));
        } catch (const AnalysisError& e) {
            sed_sep = {{"error", e.what()}};
        }
        const auto fs_ = analysis::fringe_analysis(
            analysis::sampled(analysis::histogram(ens_rec.x, -half, half, c.analysis.bins)), sep.a,
            osc, fringe_options_of(c));

        m.json("analysis.json", "analysis.report",
               {{"qm", {{"separation", separation_json(sep)},
                        {"quadratures", quads},
                        {"fringes_recombined", fringe_json(fq)}}},
                {"sed", {{"separation", sed_sep}, {"fringes_recombined", fringe_json(fs_)}}}});
    });
}

ScenarioResult compare(const ExperimentConfig& c, const fs::path& root, const fs::path& dir,
                       const Logger& log)
{
    return guarded(dir, "compare", c, [&](ManifestWriter& m) {
        const Upstream up = load_upstream(root);
        m.add_input(up.qm.path());
        m.add_input(up.sed.path());
        const OscillatorParams osc = oscillator_of(up.physics);
        say(log, "compare: quantum against classical densities and energies");

        const auto psi_sep = wavefunction_from(read_f64(up.qm.file("qm.psi.separated")));
        const auto psi_rec = wavefunction_from(read_f64(up.qm.file("qm.psi.recombined")));
        const auto ens_sep = ensemble_from(read_f64(up.sed.file("sed.ensemble.separated")));
        const auto ens_rec = ensemble_from(read_f64(up.sed.file("sed.ensemble.recombined")));

        const double half = c.analysis.histogram_half_width_dx * osc.delta_x;
        const std::size_t bins = c.analysis.bins;
        auto qm_hist = [&](const qm::Wavefunction& psi) {
            const auto rho = qm::density(psi);
            return analysis::rebin_density(psi.grid.x_min, psi.grid.dx(), rho, -half, half, bins);
        };
        auto sed_hist = [&](const sed::EnsembleSnapshot& s) {
            return analysis::histogram(s.x, -half, half, bins);
        };
        const auto hq_sep = qm_hist(psi_sep);
        const auto hq_rec = qm_hist(psi_rec);
        const auto hs_sep = sed_hist(ens_sep);
        const auto hs_rec = sed_hist(ens_rec);

        std::vector<CsvColumn> overlay = {{"x", "m", {}},
                                          {"qm_separated", "1/m", hq_sep.density},
                                          {"sed_separated", "1/m", hs_sep.density},
                                          {"qm_recombined", "1/m", hq_rec.density},
                                          {"sed_recombined", "1/m", hs_rec.density}};
        for (std::size_t b = 0; b < bins; ++b) {
            overlay[0].values.push_back(hq_sep.center(b));
        }
        m.csv("overlay.csv", "compare.overlay", overlay);

        const auto d_sep = analysis::compare_distributions(hs_sep, hq_sep);
        const auto d_rec = analysis::compare_distributions(hs_rec, hq_rec);

        const auto sq = analysis::packet_separation(grid_density(psi_sep), modality_of(c));
        const auto ss = analysis::packet_separation(analysis::sampled(hs_sep), modality_of(c));
        const double r8 = ss.a / sq.a - 1.0;
        m.add_check(make_check(8, "classical ensemble splits into two packets", std::abs(r8),
                               "|a_SED / a_QM - 1| < 0.15", std::abs(r8) < 0.15,
                               fmt("a_SED = %.3f Delta_x vs a_QM = %.3f Delta_x (%+.2f%%)",
                                   ss.a / osc.delta_x, sq.a / osc.delta_x, 100.0 * r8)));

        const auto fopt = fringe_options_of(c);
        const auto fq = analysis::fringe_analysis(analysis::sampled(hq_rec), sq.a, osc, fopt);
        const auto fs_ = analysis::fringe_analysis(analysis::sampled(hs_rec), sq.a, osc, fopt);
        const double ratio = fs_.spectral_peak_ratio / fq.spectral_peak_ratio;
        m.add_check(make_check(9, "classical ensemble shows no fringes", fs_.contrast,
                               "contrast < 0.1 and fringe-bin power ratio < 0.1",
                               fs_.contrast < 0.1 && ratio < 0.1,
                               fmt("SED contrast %.3f, QM contrast %.3f, fringe-bin power %.3f of "
                                   "QM; L1 = %.3f, KS = %.3f",
                                   fs_.contrast, fq.contrast, ratio, d_rec.l1, d_rec.ks)));

        const auto tq = read_csv(up.qm.file("qm.timeseries"));
        const auto tsd = read_csv(up.sed.file("sed.timeseries"));
        const double t_from = up.qm.doc().at("summary").at("times_s").at("start").get<double>();
        const auto o = analysis::energy_overlap(column(tq, "time").values,
                                                column(tq, "energy").values,
                                                column(tsd, "time").values,
                                                column(tsd, "mean_energy").values, t_from);
        m.add_check(make_check(
            10, "mean energies agree up to the classical maximum", o.max_relative_deviation,
            "< 0.1", o.max_relative_deviation < 0.1,
            fmt("t_m = %.2f T0 after pulse start, E_max = %.3f hbar w0, worst deviation %.2f%% at "
                "%.2f T0",
                (o.t_max - t_from) / osc.period(), o.sed_max / osc.hbar_omega0(),
                100.0 * o.max_relative_deviation, (o.t_worst - t_from) / osc.period())));

        m.json("fringe_report.json", "compare.fringes",
               {{"qm", fringe_json(fq)},
                {"sed", fringe_json(fs_)},
                {"spectral_peak_ratio_sed_over_qm", ratio},
                {"separation_qm", separation_json(sq)},
                {"separation_sed", separation_json(ss)},
                {"distance_separated", {{"l1", d_sep.l1}, {"ks", d_sep.ks}}},
                {"distance_recombined", {{"l1", d_rec.l1}, {"ks", d_rec.ks}}},
                {"energy_overlap",
                 {{"t_max_s", o.t_max},
                  {"sed_max_J", o.sed_max},
                  {"max_relative_deviation", o.max_relative_deviation},
                  {"t_worst_s", o.t_worst}}}});
    });
}

ScenarioResult run_one(const ExperimentConfig& c, const std::string& name, const fs::path& root,
                       const Logger& log)
{
    const fs::path dir = root / name;
    if (name == "qm-run") {
        return qm_run(c, dir, log);
    }
    if (name == "sed-run") {
        return sed_run(c, dir, log);
    }
    if (name == "validate-appendix") {
        return validate_appendix(c, dir, log);
    }
    if (name == "calibrate-zpf") {
        return calibrate_zpf(c, dir, log);
    }
    if (name == "analyze") {
        return analyze(c, root, dir, log);
    }
    if (name == "compare") {
        return compare(c, root, dir, log);
    }
    throw ConfigError("run.scenario", "unknown scenario '" + name + "'");
}

ScenarioResult paper_repro(const ExperimentConfig& c, const fs::path& root, const Logger& log)
{
    const fs::path dir = root / "paper-repro";
    return guarded(dir, "paper-repro", c, [&](ManifestWriter& m) {
        const OscillatorParams osc = oscillator_of(c);
        const LaserConfig laser = laser_of(c);

        const double r1 = osc.tau_d / 3.2e-13 - 1.0;
        m.add_check(make_check(1, "damping time", std::abs(r1), "|tau_d / 3.2e-13 s - 1| < 0.02",
                               std::abs(r1) < 0.02,
                               fmt("tau_d = %.6e s, deviation %+.3f%%", osc.tau_d, 100.0 * r1)));
        const auto s = strong_drive_check(laser, osc);
        const double r2 = s.ratio / 5.8e2 - 1.0;
        m.add_check(make_check(2, "strong-drive ratio", std::abs(r2), "|F/R / 580 - 1| < 0.1",
                               std::abs(r2) < 0.1, fmt("F/R = %.2f, deviation %+.2f%%", s.ratio,
                                                       100.0 * r2)));

        for (const char* name : {"qm-run", "sed-run", "validate-appendix", "calibrate-zpf",
                                 "analyze", "compare"}) {
            ExperimentConfig sub = c;
            sub.run.scenario = name;
            const ScenarioResult r = run_one(sub, name, dir, log);
            m.add(fs::relative(r.manifest, dir).generic_string(), std::string("manifest.") + name);
            for (const auto& ch : r.checks) {
                m.add_check(ch);
            }
        }
        std::vector<Check> all = m.checks();
        std::sort(all.begin(), all.end(), [](const Check& a, const Check& b) { return a.id < b.id; });
        const std::string table = summary_table(all);
        m.text("summary.txt", "paper-repro.summary", table);
        say(log, "\n" + table);
        m.set_summary("not_evaluated",
                      json::array({{{"id", 12},
                                    {"name", "split-step against the number-basis reference"},
                                    {"where", "sedcat_acceptance"}}}));
    });
}

}  // namespace

bool ScenarioResult::all_pass() const noexcept
{
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::uint64_t calibration_seed(std::uint64_t master) noexcept
{
    return sed::derive_subseed(master, std::numeric_limits<std::uint64_t>::max());
}

ScenarioResult run_scenario(const ExperimentConfig& config, const fs::path& root, const Logger& log)
{
    validate_config(config);
    if (config.run.scenario == "paper-repro") {
        return paper_repro(config, root, log);
    }
    return run_one(config, config.run.scenario, root, log);
}

F64Array wavefunction_array(const qm::Wavefunction& psi)
{
    F64Array a;
    const auto& g = psi.grid;
    a.shape = {g.n_points, 2};
    a.axes = {"x", "component"};
    a.origin = {g.x_min, 0.0};
    a.spacing = {g.dx(), 1.0};
    a.units = {"m", "1"};
    a.value_unit = "m^-1/2";
    a.extra = {{"time_s", psi.time},
               {"components", {"real", "imag"}},
               {"grid", {{"x_min_m", g.x_min}, {"x_max_m", g.x_max}, {"n_points", g.n_points},
                         {"dt_s", g.dt}, {"n_steps", g.n_steps}}}};
    a.data.reserve(2 * g.n_points);
    for (const auto& v : psi.psi) {
        a.data.push_back(v.real());
        a.data.push_back(v.imag());
    }
    return a;
}

qm::Wavefunction wavefunction_from(const F64Array& a)
{
    if (a.shape.size() != 2 || a.shape[1] != 2 || a.axes[0] != "x" || !a.extra.contains("grid")) {
        throw IoError("array is not a wavefunction");
    }
    qm::Wavefunction psi;
    const auto& g = a.extra.at("grid");
    psi.grid.x_min = g.at("x_min_m").get<double>();
    psi.grid.x_max = g.at("x_max_m").get<double>();
    psi.grid.n_points = g.at("n_points").get<std::size_t>();
    psi.grid.dt = g.at("dt_s").get<double>();
    psi.grid.n_steps = g.at("n_steps").get<std::size_t>();
    psi.time = a.extra.at("time_s").get<double>();
    if (psi.grid.n_points != a.shape[0]) {
        throw IoError("wavefunction length does not match its grid");
    }
    psi.psi.resize(psi.grid.n_points);
    for (std::size_t j = 0; j < psi.psi.size(); ++j) {
        psi.psi[j] = {a.data[2 * j], a.data[2 * j + 1]};
    }
    return psi;
}

F64Array ensemble_array(const sed::EnsembleSnapshot& s)
{
    F64Array a;
    a.shape = {s.size(), 2};
    a.axes = {"particle", "component"};
    a.origin = {0.0, 0.0};
    a.spacing = {1.0, 1.0};
    a.units = {"1", "1"};
    a.value_unit = "m, m/s";
    a.extra = {{"time_s", s.time},
               {"components", {"x [m]", "v [m/s]"}},
               {"master_seed", s.master_seed}};
    a.data.reserve(2 * s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        a.data.push_back(s.x[i]);
        a.data.push_back(s.v[i]);
    }
    return a;
}

sed::EnsembleSnapshot ensemble_from(const F64Array& a)
{
    if (a.shape.size() != 2 || a.shape[1] != 2 || a.axes[0] != "particle" ||
        !a.extra.contains("time_s")) {
        throw IoError("array is not an ensemble snapshot");
    }
    sed::EnsembleSnapshot s;
    s.time = a.extra.at("time_s").get<double>();
    s.master_seed = a.extra.value("master_seed", std::uint64_t{0});
    s.x.resize(a.shape[0]);
    s.v.resize(a.shape[0]);
    for (std::size_t i = 0; i < a.shape[0]; ++i) {
        s.x[i] = a.data[2 * i];
        s.v[i] = a.data[2 * i + 1];
    }
    return s;
}

const std::map<std::string, std::vector<FigureInput>>& figure_inputs()
{
    static const std::map<std::string, std::vector<FigureInput>> inputs = {
        {"fig2a",
         {{"qm-run", "qm.wigner.initial"},
          {"qm-run", "qm.wigner.separated"},
          {"qm-run", "qm.wigner.recombined"}}},
        {"fig2b", {{"qm-run", "qm.density"}, {"qm-run", "qm.density.meta"}}},
        {"fig2c", {{"sed-run", "sed.histograms"}, {"sed-run", "sed.histograms.meta"}}},
        {"fig2d", {{"sed-run", "sed.ensemble.separated"}, {"sed-run", "sed.ensemble.recombined"}}},
        {"fig3a", {{"qm-run", "qm.timeseries"}, {"sed-run", "sed.timeseries"}}},
        {"fig3b", {{"qm-run", "qm.fock"}, {"sed-run", "sed.energy_distribution"}}},
        {"fig4a", {{"compare", "compare.overlay"}, {"compare", "compare.fringes"}}},
        {"fig4b", {{"compare", "compare.overlay"}, {"compare", "compare.fringes"}}},
    };
    return inputs;
}

fs::path resolve_figure_input(const ManifestReader& repro, const FigureInput& input)
{
    if (repro.scenario() != "paper-repro") {
        throw IoError(repro.path().string() + ": not a paper-repro manifest");
    }
    const ManifestReader sub(repro.file("manifest." + input.scenario));
    return sub.file(input.role);
}

std::string summary_table(const std::vector<Check>& checks)
{
    std::string t = fmt("%-4s %-6s %-48s %-12s %s\n", "id", "status", "criterion", "value", "detail");
    for (const auto& c : checks) {
        t += fmt("C%02d  %-6s %-48s %-12.4g %s\n", c.id, c.pass ? "PASS" : "FAIL", c.name.c_str(),
                 c.value, c.detail.c_str());
    }
    return t;
}

}  // namespace sedcat::app
