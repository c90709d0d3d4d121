#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <doctest.h>

#include "reference_setup.hpp"
#include "sedcat/analysis/compare.hpp"
#include "sedcat/analysis/energy.hpp"
#include "sedcat/analysis/fringes.hpp"
#include "sedcat/analysis/histogram.hpp"
#include "sedcat/errors.hpp"

using namespace sedcat;
using namespace sedcat::analysis;
using sedcat::testing::reference_oscillator;

namespace {

constexpr double kPi = std::numbers::pi;

double gauss(double x, double mu, double s)
{
    return std::exp(-0.5 * (x - mu) * (x - mu) / (s * s)) / (s * std::sqrt(2.0 * kPi));
}

SampledDensity lattice(double lo, double hi, std::size_t n, auto&& f)
{
    SampledDensity d;
    d.x0 = lo;
    d.dx = (hi - lo) / static_cast<double>(n - 1);
    d.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        d.values[i] = f(d.x(i));
    }
    return d;
}

std::vector<double> two_packet_samples(std::size_t n, double d, double s, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, s);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = g(rng) + (i % 2 == 0 ? d : -d);
    }
    return v;
}

}  // namespace

TEST_CASE("histogram statistics")
{
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> v(100000);
    for (auto& x : v) {
        x = g(rng);
    }
    const auto h = histogram(v, -6.0, 6.0, 256);
    CHECK(h.bins() == 256);
    double mass = 0.0, mean = 0.0, var = 0.0;
    for (std::size_t b = 0; b < h.bins(); ++b) {
        mass += h.density[b] * h.bin_width();
        mean += h.center(b) * h.density[b] * h.bin_width();
    }
    for (std::size_t b = 0; b < h.bins(); ++b) {
        var += (h.center(b) - mean) * (h.center(b) - mean) * h.density[b] * h.bin_width();
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(mean) < 0.01);
    CHECK(std::abs(var - 1.0) < 0.02);
    CHECK(h.sample_count.has_value());

    std::vector<double> delta(500, 0.3);
    const auto hd = histogram(delta, -1.0, 1.0, 20);
    int filled = 0;
    for (double c : hd.counts) {
        filled += c > 0.0 ? 1 : 0;
    }
    CHECK(filled == 1);

    std::vector<double> edge(200, 1.0);
    const auto he = histogram(edge, -1.0, 1.0, 20);
    CHECK(he.counts.back() == 200.0);

    std::vector<double> outside(300, 5.0);
    outside.resize(400, 0.0);
    const auto ho = histogram(outside, -1.0, 1.0, 10);
    CHECK(ho.out_of_domain == 300);
    CHECK(ho.in_domain == 100.0);

    CHECK_THROWS_AS(histogram(std::vector<double>{}, -1.0, 1.0, 10), DataError);
    CHECK_THROWS_AS(histogram(std::vector<double>(99, 0.0), -1.0, 1.0, 10), DataError);
    CHECK_THROWS_AS(histogram(v, 1.0, -1.0, 10), DataError);
}

TEST_CASE("rebinning a sampled density conserves mass")
{
    const auto d = lattice(-10.0, 10.0, 2001, [](double x) { return gauss(x, 1.0, 0.7); });
    const auto h = rebin_density(d.x0, d.dx, d.values, -8.0, 8.0, 64);
    double mass = 0.0;
    for (double c : h.counts) {
        mass += c;
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
    CHECK_FALSE(h.sample_count.has_value());
}

TEST_CASE("packet separation of two Gaussians")
{
    const double d = 5.0, s = 1.0;
    const auto rho = lattice(-20.0, 20.0, 4001, [&](double x) {
        return 0.5 * gauss(x, d, s) + 0.5 * gauss(x, -d, s);
    });
    const auto p = packet_separation(rho);
    CHECK(std::abs(p.a / (2.0 * d) - 1.0) < 1e-3);
    CHECK(p.left == doctest::Approx(-d).epsilon(1e-3));

    const auto single = lattice(-20.0, 20.0, 4001, [&](double x) { return gauss(x, 0.0, s); });
    CHECK_THROWS_AS(packet_separation(single), ModalityError);

    // Overlapping packets with no clear valley are not bimodal.
    const auto merged = lattice(-20.0, 20.0, 4001, [&](double x) {
        return 0.5 * gauss(x, 0.9, s) + 0.5 * gauss(x, -0.9, s);
    });
    CHECK_THROWS_AS(packet_separation(merged), ModalityError);
}

TEST_CASE("fringe analysis of an ideal interference pattern")
{
    const auto osc = reference_oscillator();
    const double a = 11.0 * osc.delta_x;
    const double lambda = 2.0 * kPi * osc.constants.hbar() / (osc.mass * osc.omega0 * a);
    const double wide = 4.0 * osc.delta_x;
    auto pattern = [&](double x) {
        return gauss(x, 0.0, wide) * (1.0 + std::cos(2.0 * kPi * x / lambda));
    };
    const auto rho = lattice(-20.0 * osc.delta_x, 20.0 * osc.delta_x, 4096, pattern);
    const auto r = fringe_analysis(rho, a, osc);
    REQUIRE(r.measured_lambda.has_value());
    CHECK(std::abs(*r.measured_lambda / lambda - 1.0) < 0.02);
    CHECK(r.predicted_lambda == doctest::Approx(lambda).epsilon(1e-12));
    CHECK(r.contrast > 0.95);
    CHECK(r.extrema_contrast > 0.99);
    CHECK(r.spectral_peak_ratio > 0.1);

    // Scaling the density leaves every dimensionless metric unchanged.
    auto scaled = rho;
    for (auto& v : scaled.values) {
        v *= 1e3;
    }
    const auto rs = fringe_analysis(scaled, a, osc);
    CHECK(rs.contrast == doctest::Approx(r.contrast).epsilon(1e-12));
    CHECK(*rs.measured_lambda == doctest::Approx(*r.measured_lambda).epsilon(1e-9));

    // Half-contrast fringes.
    const auto half = lattice(-20.0 * osc.delta_x, 20.0 * osc.delta_x, 4096, [&](double x) {
        return gauss(x, 0.0, wide) * (1.0 + 0.5 * std::cos(2.0 * kPi * x / lambda));
    });
    CHECK(std::abs(fringe_analysis(half, a, osc).contrast - 0.5) < 0.02);

    FringeOptions narrow;
    narrow.window_periods = 4.0;
    CHECK_THROWS_AS(fringe_analysis(rho, a, osc, narrow), ParameterError);
    CHECK_THROWS_AS(fringe_analysis(rho, -a, osc), ParameterError);
    FringeOptions off;
    off.centre = 19.9 * osc.delta_x;
    CHECK_THROWS_AS(fringe_analysis(rho, a, osc, off), DataError);
}

TEST_CASE("particle histograms without interference show no fringes")
{
    const auto osc = reference_oscillator();
    const double d = 5.8 * osc.delta_x;
    const auto samples = two_packet_samples(3000, d, 0.7 * osc.delta_x, 77);
    const auto h = histogram(samples, -20.0 * osc.delta_x, 20.0 * osc.delta_x, 256);
    const auto rho = sampled(h);
    const auto sep = packet_separation(rho);
    CHECK(std::abs(sep.a / (2.0 * d) - 1.0) < 0.1);
    // Recombined classical packets: one lump at the origin, shot noise only.
    std::mt19937_64 rng(78);
    std::normal_distribution<double> g(0.0, 1.5 * osc.delta_x);
    std::vector<double> lump(3000);
    for (auto& x : lump) {
        x = g(rng);
    }
    const auto r = fringe_analysis(
        sampled(histogram(lump, -20.0 * osc.delta_x, 20.0 * osc.delta_x, 256)), sep.a, osc);
    CHECK_FALSE(r.measured_lambda.has_value());
    CHECK(r.contrast < 0.1);
    CHECK(r.spectral_peak_ratio < 0.1);

    // Insensitive to halving the bin width.
    const auto h2 = histogram(samples, -20.0 * osc.delta_x, 20.0 * osc.delta_x, 512);
    const auto sep2 = packet_separation(sampled(h2));
    CHECK(std::abs(sep2.a / sep.a - 1.0) < 0.05);
}

TEST_CASE("distribution distances")
{
    std::vector<double> a(1000, -0.5), b(1000, 0.5);
    const auto ha = histogram(a, -1.0, 1.0, 20);
    const auto hb = histogram(b, -1.0, 1.0, 20);
    const auto same = compare_distributions(ha, ha);
    CHECK(same.l1 == 0.0);
    CHECK(same.ks == 0.0);
    const auto disjoint = compare_distributions(ha, hb);
    CHECK(disjoint.l1 == doctest::Approx(2.0));
    CHECK(disjoint.ks == doctest::Approx(1.0));

    const auto other = histogram(a, -1.0, 1.0, 40);
    CHECK_THROWS_AS(compare_distributions(ha, other), AlignmentError);
    const auto shifted = histogram(a, -1.1, 1.0, 20);
    CHECK_THROWS_AS(compare_distributions(ha, shifted), AlignmentError);

    std::mt19937_64 rng(4);
    std::normal_distribution<double> g(0.0, 0.3);
    std::vector<double> u(5000), w(5000);
    for (std::size_t i = 0; i < u.size(); ++i) {
        u[i] = g(rng);
        w[i] = g(rng) + 0.1;
    }
    const auto dist = compare_distributions(histogram(u, -1.0, 1.0, 40), histogram(w, -1.0, 1.0, 40));
    CHECK(dist.l1 > 0.0);
    CHECK(dist.l1 <= 2.0);
    CHECK(dist.ks > 0.05);
    CHECK(dist.ks <= 1.0);
}

TEST_CASE("energy distributions")
{
    const auto osc = reference_oscillator();
    qm::FockPopulations pops;
    pops.probability = {0.25, 0.0, 0.5, 0.0, 0.25};
    pops.total = 1.0;
    const auto q = energy_distribution_qm(pops, osc);
    CHECK(q.discrete);
    CHECK(q.mean == doctest::Approx(2.5 * osc.hbar_omega0()));
    CHECK(q.std_dev == doctest::Approx(std::sqrt(2.0) * osc.hbar_omega0()));

    sed::EnsembleSnapshot rest;
    rest.x = {0.0};
    rest.v = {0.0};
    const auto s = energy_distribution_sed(rest, osc);
    CHECK(s.probability.front() == 1.0);
    CHECK(s.mean == 0.0);

    sed::EnsembleSnapshot ring;
    const double amp = 3.0 * osc.delta_x;
    for (int i = 0; i < 100; ++i) {
        const double ph = 2.0 * kPi * i / 100.0;
        ring.x.push_back(amp * std::cos(ph));
        ring.v.push_back(-amp * osc.omega0 * std::sin(ph));
    }
    const double e = 0.5 * osc.mass * osc.omega0 * osc.omega0 * amp * amp;
    CHECK(mean_energy(ring, osc) == doctest::Approx(e).epsilon(1e-12));
    CHECK(energy_distribution_sed(ring, osc).std_dev < 1e-10 * e);
    const auto m = ensemble_moments(ring);
    CHECK(m.var_x == doctest::Approx(0.5 * amp * amp).epsilon(1e-12));

    sed::EnsembleSnapshot empty;
    CHECK_THROWS_AS(energy_distribution_sed(empty, osc), DataError);
}

TEST_CASE("energy overlap up to the SED maximum")
{
    const std::vector<double> tq = {0.0, 1.0, 2.0, 3.0, 4.0};
    const std::vector<double> eq = {1.0, 2.0, 3.0, 4.0, 5.0};
    const std::vector<double> ts = {0.5, 1.5, 2.5, 3.5};
    const std::vector<double> es = {1.5, 2.5 * 1.04, 3.6, 3.0};
    const auto o = energy_overlap(tq, eq, ts, es, 0.0);
    CHECK(o.t_max == 2.5);
    CHECK(o.sed_max == 3.6);
    CHECK(o.max_relative_deviation == doctest::Approx(0.04));
    CHECK(o.t_worst == 1.5);
    const auto late = energy_overlap(tq, eq, ts, es, 2.0);
    CHECK(late.max_relative_deviation == doctest::Approx(0.1 / 3.5));
    CHECK_THROWS_AS(energy_overlap({0.0}, {1.0}, ts, es, 0.0), DataError);
}
