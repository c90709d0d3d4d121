// One PASS/FAIL line per acceptance criterion at desk scale
// (3e3 particles, 2048-point grid). Exit status 1 if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fock_oracle.hpp"
#include "reference_setup.hpp"
#include "sedcat/analysis/compare.hpp"
#include "sedcat/analysis/energy.hpp"
#include "sedcat/analysis/fringes.hpp"
#include "sedcat/analysis/histogram.hpp"
#include "sedcat/qm/experiment.hpp"
#include "sedcat/qm/observables.hpp"
#include "sedcat/qm/propagator.hpp"
#include "sedcat/qm/states.hpp"
#include "sedcat/sed/ensemble.hpp"
#include "sedcat/sed/experiment.hpp"
#include "sedcat/sed/lorentz.hpp"

using namespace sedcat;

namespace {

constexpr std::size_t kParticles = 3000;
constexpr std::size_t kBins = 256;
constexpr double kHistHalfWidthDx = 20.0;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

int failures = 0;

void report(int id, const char* name, const std::function<Outcome()>& check)
{
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = check();
    } catch (const std::exception& e) {
        o = {false, std::string("error: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) {
        ++failures;
    }
    std::printf("%s C%02d %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(),
                secs);
    std::fflush(stdout);
}

analysis::SampledDensity grid_density(const qm::Wavefunction& psi)
{
    analysis::SampledDensity d;
    d.x0 = psi.grid.x_min;
    d.dx = psi.grid.dx();
    d.values = qm::density(psi);
    return d;
}

analysis::Histogram qm_histogram(const qm::Wavefunction& psi, double half)
{
    const auto rho = qm::density(psi);
    return analysis::rebin_density(psi.grid.x_min, psi.grid.dx(), rho, -half, half, kBins);
}

analysis::Histogram sed_histogram(const sed::EnsembleSnapshot& s, double half)
{
    return analysis::histogram(s.x, -half, half, kBins);
}

}  // namespace

int main()
{
    const auto osc = testing::reference_oscillator();
    const auto laser = testing::reference_laser();
    const double hbar = osc.constants.hbar();
    const double half = kHistHalfWidthDx * osc.delta_x;

    report(1, "damping time", [&] {
        const double r = osc.tau_d / 3.2e-13 - 1.0;
        return Outcome{std::abs(r) < 0.02, fmt("tau_d = %.6e s, deviation %.3f%% (limit 2%%)",
                                               osc.tau_d, 100.0 * r)};
    });

    report(2, "strong-drive ratio", [&] {
        const auto s = strong_drive_check(laser, osc);
        const double r = s.ratio / 5.8e2 - 1.0;
        return Outcome{std::abs(r) < 0.1,
                       fmt("F/R = %.2f, deviation %.2f%% from 5.8e2 (limit 10%%)", s.ratio, 100.0 * r)};
    });

    report(3, "undriven ground state over 10 periods", [&] {
        const auto grid = qm::make_grid(osc);
        const auto psi0 = qm::ground_state(grid, osc);
        const double e0 = qm::energy_expectation(psi0, osc);
        auto psi = psi0;
        qm::SplitStepPropagator prop(grid, osc, std::nullopt);
        double drift = 0.0;
        prop.advance(psi, 10.0 * osc.period(),
                     [&](const qm::Wavefunction& w, std::size_t) {
                         drift = std::max(drift, std::abs(qm::energy_expectation(w, osc) / e0 - 1.0));
                     },
                     200);
        const double infid = 1.0 - qm::fidelity(psi0, psi);
        return Outcome{infid < 1e-6 && drift < 1e-6,
                       fmt("1 - fidelity = %.2e, max <E> drift %.2e (limits 1e-6)", infid, drift)};
    });

    // The full quantum run feeds criteria 4, 5, 6 and the comparisons.
    std::optional<qm::QmRunResult> qm_run;
    std::optional<analysis::PacketSeparation> qm_sep;
    auto need_qm = [&]() -> const qm::QmRunResult& {
        if (!qm_run) {
            qm_run = qm::run_qm_experiment(osc, laser, qm::default_qm_protocol(osc));
        }
        return *qm_run;
    };
    auto need_qm_sep = [&]() -> const analysis::PacketSeparation& {
        if (!qm_sep) {
            qm_sep = analysis::packet_separation(grid_density(need_qm().separated));
        }
        return *qm_sep;
    };

    report(4, "parity after the pulse", [&] {
        const auto& r = need_qm();
        double worst = 0.0;
        for (const auto& rec : r.records) {
            if (rec.time >= r.t_pulse_end) {
                worst = std::max(worst, rec.odd_population);
            }
        }
        const auto pops = qm::fock_populations(r.final_state, osc, 200);
        worst = std::max(worst, pops.odd_total());
        return Outcome{worst < 1e-4, fmt("max odd-number population %.2e (limit 1e-4)", worst)};
    });

    report(5, "packet quadratures at the separated instant", [&] {
        const auto& r = need_qm();
        Outcome o{true, ""};
        for (int side : {-1, +1}) {
            const auto w = qm::auto_packet_window(r.separated, osc, side);
            const auto q = qm::quadratures(r.separated, w);
            const double sx = q.sigma_x / osc.delta_x;
            const double prod = q.product / (0.5 * hbar);
            const bool ok = sx < 1.0 && std::abs(prod - 1.0) < 0.1;
            o.pass = o.pass && ok;
            o.detail += fmt("%s packet sigma_x = %.4f Delta_x, sigma_x sigma_p = %.4f hbar/2; ",
                            side < 0 ? "left" : "right", sx, prod);
        }
        o.detail += "limits sigma_x < Delta_x, product within 10%";
        return o;
    });

    report(6, "quantum fringes at recombination", [&] {
        const auto& r = need_qm();
        const auto sep = need_qm_sep();
        const auto f = analysis::fringe_analysis(grid_density(r.recombined), sep.a, osc);
        const double dl = f.measured_lambda ? *f.measured_lambda / f.predicted_lambda - 1.0 : 1.0;
        return Outcome{f.measured_lambda && std::abs(dl) < 0.1 && f.contrast > 0.5,
                       fmt("a = %.3f Delta_x, lambda = %.4f vs predicted %.4f Delta_x (%.2f%%), "
                           "contrast %.3f (limits 10%%, > 0.5)",
                           sep.a / osc.delta_x,
                           f.measured_lambda ? *f.measured_lambda / osc.delta_x : 0.0,
                           f.predicted_lambda / osc.delta_x, 100.0 * dl, f.contrast)};
    });

    report(7, "ZPF ground-state calibration", [&] {
        const auto snap = sed::prepare_ground_ensemble(kParticles, osc, sed::default_zpf_spec(osc),
                                                       sed::GroundPreparation::relaxed, 7001);
        const auto m = analysis::ensemble_moments(snap);
        const double rx = m.var_x / (osc.delta_x * osc.delta_x) - 1.0;
        const double sp = osc.delta_p / osc.mass;
        const double rp = m.var_v / (sp * sp) - 1.0;
        return Outcome{std::abs(rx) < 0.1 && std::abs(rp) < 0.1,
                       fmt("Var(x) %+.2f%%, Var(mv) %+.2f%% (limits 10%%)", 100.0 * rx, 100.0 * rp)};
    });

    std::optional<sed::SedRunResult> sed_run;
    auto need_sed = [&]() -> const sed::SedRunResult& {
        if (!sed_run) {
            auto p = sed::default_sed_protocol(osc, 2026);
            p.n_particles = kParticles;
            sed_run = sed::run_sed_experiment(osc, laser, p);
        }
        return *sed_run;
    };

    report(8, "classical ensemble splits into two packets", [&] {
        const auto& s = need_sed();
        const auto sep = analysis::packet_separation(analysis::sampled(sed_histogram(s.separated, half)));
        const double qa = need_qm_sep().a;
        const double r = sep.a / qa - 1.0;
        return Outcome{std::abs(r) < 0.15,
                       fmt("a_SED = %.3f Delta_x vs a_QM = %.3f Delta_x (%+.2f%%, limit 15%%)",
                           sep.a / osc.delta_x, qa / osc.delta_x, 100.0 * r)};
    });

    report(9, "classical ensemble shows no fringes", [&] {
        const auto& s = need_sed();
        const double qa = need_qm_sep().a;
        const auto hs = sed_histogram(s.recombined, half);
        const auto hq = qm_histogram(need_qm().recombined, half);
        const auto fs = analysis::fringe_analysis(analysis::sampled(hs), qa, osc);
        const auto fq = analysis::fringe_analysis(analysis::sampled(hq), qa, osc);
        const double ratio = fs.spectral_peak_ratio / fq.spectral_peak_ratio;
        const auto d = analysis::compare_distributions(hs, hq);
        return Outcome{fs.contrast < 0.1 && ratio < 0.1,
                       fmt("SED contrast %.3f (limit 0.1), fringe-bin power %.3f of QM (limit 0.1); "
                           "L1 = %.3f, KS = %.3f",
                           fs.contrast, ratio, d.l1, d.ks)};
    });

    report(10, "mean energies agree up to the classical maximum", [&] {
        const auto& s = need_sed();
        const auto& q = need_qm();
        std::vector<double> tq, eq, ts, es;
        for (const auto& r : q.records) {
            tq.push_back(r.time);
            eq.push_back(r.energy);
        }
        for (const auto& r : s.records) {
            ts.push_back(r.time);
            es.push_back(r.mean_energy);
        }
        const auto o = analysis::energy_overlap(tq, eq, ts, es, q.t_start);
        return Outcome{o.max_relative_deviation < 0.1,
                       fmt("t_m = %.2f T0 after pulse start, E_max = %.3f hbar w0, worst deviation "
                           "%.2f%% at %.2f T0 (limit 10%%)",
                           (o.t_max - q.t_start) / osc.period(), o.sed_max / osc.hbar_omega0(),
                           100.0 * o.max_relative_deviation, (o.t_worst - q.t_start) / osc.period())};
    });

    report(11, "full Lorentz force against the reduced drive", [&] {
        const auto tr = sed::run_full_lorentz_validation(sed::default_lorentz_validation(osc, laser));
        return Outcome{tr.relative_rms() < 0.05,
                       fmt("RMS difference %.3f%% of the max excursion %.3f Delta_x (limit 5%%)",
                           100.0 * tr.relative_rms(), tr.max_excursion / osc.delta_x)};
    });

    report(12, "split-step against the number-basis reference", [&] {
        auto grid = qm::make_grid(osc, 40.0, 256, 40000.0);
        const double tw = pulse_half_window(laser.tau);
        auto psi = qm::ground_state(grid, osc);
        psi.time = -tw;
        qm::SplitStepPropagator prop(grid, osc, laser);
        prop.advance(psi, tw);

        const testing::FockOracle oracle(osc, laser, 64);
        auto c = oracle.ground();
        oracle.propagate(c, -tw, tw, osc.period() / 1000.0);
        const auto ref = oracle.to_positions(c, qm::grid_points(grid));
        double err = 0.0;
        for (std::size_t j = 0; j < ref.size(); ++j) {
            err += std::norm(psi.psi[j] - ref[j]);
        }
        err = std::sqrt(err * grid.dx());
        const double tail = std::norm(c[c.size() - 1]) + std::norm(c[c.size() - 2]);
        return Outcome{err < 1e-5, fmt("L2 error %.2e (limit 1e-5), top-level population %.1e",
                                       err, tail)};
    });

    std::printf("%d of 12 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
