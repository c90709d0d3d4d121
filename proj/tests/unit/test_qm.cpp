#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <doctest.h>

#include "fock_oracle.hpp"
#include "reference_setup.hpp"
#include "sedcat/errors.hpp"
#include "sedcat/qm/grid.hpp"
#include "sedcat/qm/observables.hpp"
#include "sedcat/qm/propagator.hpp"
#include "sedcat/qm/states.hpp"
#include "sedcat/qm/wigner.hpp"

using namespace sedcat;
using namespace sedcat::qm;
using sedcat::testing::reference_laser;
using sedcat::testing::reference_oscillator;

namespace {

constexpr double kPi = std::numbers::pi;

double mean_x(const Wavefunction& w)
{
    double s = 0.0, n = 0.0;
    for (std::size_t j = 0; j < w.psi.size(); ++j) {
        s += w.grid.x(j) * std::norm(w.psi[j]);
        n += std::norm(w.psi[j]);
    }
    return s / n;
}

}  // namespace

TEST_CASE("grid validation")
{
    const auto osc = reference_oscillator();
    auto g = make_grid(osc);
    CHECK_NOTHROW(validate(g));
    g.n_points = 1000;
    CHECK_THROWS_AS(validate(g), ParameterError);
    g.n_points = 128;
    CHECK_THROWS_AS(validate(g), ParameterError);
    CHECK_THROWS_AS(make_grid(osc, -1.0), ParameterError);
}

TEST_CASE("ground state moments and energy")
{
    const auto osc = reference_oscillator();
    const auto g = make_grid(osc);
    const auto psi = ground_state(g, osc);
    CHECK(std::abs(psi.norm() - 1.0) < 1e-12);
    CHECK(std::abs(second_moment(psi) / (osc.delta_x * osc.delta_x) - 1.0) < 1e-10);
    CHECK(std::abs(energy_expectation(psi, osc) / osc.hbar_omega0() - 0.5) < 1e-10);
    const auto q = quadratures(psi);
    CHECK(std::abs(q.product / (osc.constants.hbar() / 2.0) - 1.0) < 1e-10);

    const auto coarse = make_grid(osc, 100.0, 256);
    CHECK_THROWS_AS(ground_state(coarse, osc), ResolutionError);
}

TEST_CASE("Hermite table agrees with a plain recurrence and is orthonormal")
{
    const auto osc = reference_oscillator();
    const auto g = make_grid(osc);
    const std::size_t nmax = 64;
    const auto table = hermite_functions(g, osc, nmax);
    const auto xs = grid_points(g);
    const double ell = std::sqrt(osc.constants.hbar() / (osc.mass * osc.omega0));
    const auto plain = sedcat::testing::plain_hermite(xs, ell, nmax);
    double worst = 0.0;
    for (std::size_t n = 0; n <= nmax; ++n) {
        for (std::size_t j = 0; j < xs.size(); ++j) {
            worst = std::max(worst, std::abs(table.row(n)[j] - plain[n][j]) * std::sqrt(ell));
        }
    }
    CHECK(worst < 1e-10);
    for (std::size_t m : {0u, 3u, 17u, 64u}) {
        for (std::size_t n : {0u, 3u, 17u, 64u}) {
            double s = 0.0;
            for (std::size_t j = 0; j < xs.size(); ++j) {
                s += table.row(m)[j] * table.row(n)[j];
            }
            s *= g.dx();
            CHECK(std::abs(s - (m == n ? 1.0 : 0.0)) < 1e-10);
        }
    }
    // Far-tail values of high orders stay finite.
    const auto tail = hermite_functions(std::vector<double>{-39.0 * osc.delta_x, 39.0 * osc.delta_x},
                                        osc, 200);
    for (double v : tail.values) {
        CHECK(std::isfinite(v));
    }
}

TEST_CASE("Fock projections")
{
    const auto osc = reference_oscillator();
    const auto g = make_grid(osc);
    const FockProjector proj(g, osc, 40);
    const auto p0 = proj.project(ground_state(g, osc));
    CHECK(p0.probability[0] >= 1.0 - 1e-10);
    const auto p4 = proj.project(fock_state(g, osc, 4));
    CHECK(std::abs(p4.probability[4] - 1.0) < 1e-10);
    CHECK(p4.odd_total() < 1e-12);
    CHECK(std::abs(p4.mean_n() - 4.0) < 1e-8);
    CHECK(std::abs(energy_expectation(fock_state(g, osc, 2), osc) / osc.hbar_omega0() - 2.5) < 1e-8);

    // A displaced state has mass beyond a tiny basis.
    const auto far = coherent_state(g, osc, 10.0 * osc.delta_x, 0.0);
    CHECK_THROWS_AS(FockProjector(g, osc, 5).project(far), ResolutionError);
}

TEST_CASE("free evolution of the ground state is stationary")
{
    const auto osc = reference_oscillator();
    const auto g = make_grid(osc);
    const auto psi0 = ground_state(g, osc);
    const auto psi = propagate(psi0, osc, std::nullopt, g, 0.0, osc.period());
    CHECK(fidelity(psi0, psi) > 1.0 - 1e-10);
    CHECK(std::abs(psi.time - osc.period()) < 1e-30);
}

TEST_CASE("coherent state follows the classical orbit")
{
    const auto osc = reference_oscillator();
    const auto g = make_grid(osc);
    const double x0 = 5.0 * osc.delta_x;
    auto psi = coherent_state(g, osc, x0, 0.0);
    SplitStepPropagator prop(g, osc, std::nullopt);
    double worst = 0.0;
    prop.advance(psi, osc.period(),
                 [&](const Wavefunction& w, std::size_t) {
                     worst = std::max(worst, std::abs(mean_x(w) - x0 * std::cos(osc.omega0 * w.time)));
                 },
                 50);
    CHECK(worst / x0 < 1e-5);
}

TEST_CASE("squeezed vacuum widths")
{
    const auto osc = reference_oscillator();
    const auto g = make_grid(osc);
    const double r = 0.5;
    const auto q = quadratures(squeezed_vacuum(g, osc, r));
    CHECK(std::abs(q.sigma_x / (osc.delta_x * std::exp(-r)) - 1.0) < 1e-4);
    CHECK(std::abs(q.sigma_p / (osc.delta_p * std::exp(r)) - 1.0) < 1e-4);
}

TEST_CASE("packet window isolates one lobe of a two-packet state")
{
    const auto osc = reference_oscillator();
    const auto g = make_grid(osc);
    const double d = 8.0 * osc.delta_x;
    auto a = coherent_state(g, osc, d, 0.0);
    const auto b = coherent_state(g, osc, -d, 0.0);
    for (std::size_t j = 0; j < a.psi.size(); ++j) {
        a.psi[j] += b.psi[j];
    }
    a.normalize();
    const auto w = auto_packet_window(a, osc, +1);
    const auto q = quadratures(a, w);
    CHECK(q.packet_mass_fraction > 0.999);
    CHECK(std::abs(q.mean_x / d - 1.0) < 1e-3);
    CHECK(std::abs(q.sigma_x / osc.delta_x - 1.0) < 1e-3);
    CHECK(std::abs(q.product / (osc.constants.hbar() / 2.0) - 1.0) < 1e-3);

    PacketWindow narrow{d, d + osc.delta_x, 0.1 * osc.delta_x};
    CHECK_THROWS_AS(quadratures(a, narrow), WindowingError);
}

TEST_CASE("Wigner function of the ground state")
{
    const auto osc = reference_oscillator();
    const auto g = make_grid(osc);
    const auto psi = ground_state(g, osc);
    const auto w = wigner(psi, osc, default_wigner_lattice(osc));
    const double peak = 1.0 / (kPi * osc.constants.hbar());
    CHECK(std::abs(w.at(128, 128) / peak - 1.0) < 1e-6);
    double minimum = 0.0;
    for (double v : w.values) {
        minimum = std::min(minimum, v);
    }
    CHECK(minimum > -1e-10 * peak);
    CHECK(w.marginal_l1 < 1e-6);
    CHECK(std::abs(w.total - 1.0) < 1e-6);

    // Odd Fock state: W(0, 0) = -1/(pi hbar).
    const auto w1 = wigner(fock_state(g, osc, 1), osc, default_wigner_lattice(osc));
    CHECK(std::abs(w1.at(128, 128) / peak + 1.0) < 1e-6);

    auto lat = default_wigner_lattice(osc);
    lat.half_width_x = 39.99 * osc.delta_x;
    CHECK_THROWS_AS(wigner(psi, osc, lat), ResolutionError);
}

TEST_CASE("propagator guards")
{
    const auto osc = reference_oscillator();
    auto g = make_grid(osc);
    g.dt = osc.period() / 1000.0;
    CHECK_THROWS_AS(SplitStepPropagator(g, osc, std::nullopt), ParameterError);

    const auto ok = make_grid(osc);
    SplitStepPropagator prop(ok, osc, std::nullopt);
    auto unnormalized = ground_state(ok, osc);
    for (auto& v : unnormalized.psi) {
        v *= 2.0;
    }
    CHECK_THROWS_AS(prop.advance(unnormalized, osc.period()), ParameterError);

    auto edge = coherent_state(ok, osc, 33.0 * osc.delta_x, 0.0);
    CHECK_THROWS_AS(prop.advance(edge, osc.period()), DomainOverflowError);

    auto back = ground_state(ok, osc);
    back.time = 1.0;
    CHECK_THROWS_AS(prop.advance(back, 0.0), ParameterError);
}

TEST_CASE("reference number-basis propagator")
{
    const auto osc = reference_oscillator();
    const auto laser = reference_laser();
    const sedcat::testing::FockOracle oracle(osc, laser, 32);
    const auto& c = oracle.cos_matrix();
    // <0|cos(Kx)|0> = exp(-K^2 Delta_x^2 / 2) for the ground-state Gaussian.
    const double k = laser.lattice_wavenumber();
    CHECK(std::abs(c(0, 0) - std::exp(-0.5 * k * k * osc.delta_x * osc.delta_x)) < 1e-12);
    // cos(Kx) is even: no coupling between opposite parities.
    CHECK(std::abs(c(0, 1)) < 1e-14);
    CHECK(std::abs(c(2, 5)) < 1e-14);

    // Undriven: pure phase rotation.
    auto v = oracle.ground();
    oracle.propagate(v, 1e-12, 1e-12 + osc.period(), osc.period() / 500.0);
    CHECK(std::abs(std::abs(v[0]) - 1.0) < 1e-13);
    CHECK(std::abs(v[0] + 1.0) < 1e-9);

    // Self-convergence through the pulse core.
    const double t0 = -2.0 * laser.tau, t1 = 2.0 * laser.tau;
    auto coarse = oracle.ground();
    auto fine = oracle.ground();
    oracle.propagate(coarse, t0, t1, osc.period() / 500.0);
    oracle.propagate(fine, t0, t1, osc.period() / 1000.0);
    CHECK((coarse - fine).norm() < 1e-8);
    CHECK(std::abs(fine.norm() - 1.0) < 1e-12);
}
