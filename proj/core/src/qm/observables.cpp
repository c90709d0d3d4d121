#include "sedcat/qm/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fft.hpp"
#include "sedcat/errors.hpp"

namespace sedcat::qm {

namespace {

struct Spectrum {
    std::vector<double> power;  // |psi~(k_j)|^2, unnormalized
    double total = 0.0;
};

Spectrum spectrum(const Wavefunction& psi)
{
    const std::size_t n = psi.psi.size();
    detail::FftPlan plan(n, detail::FftPlan::Direction::forward);
    std::copy(psi.psi.begin(), psi.psi.end(), plan.data());
    plan.execute();
    Spectrum s;
    s.power.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        s.power[j] = std::norm(plan.data()[j]);
        s.total += s.power[j];
    }
    return s;
}

struct Moments {
    double mean = 0.0;
    double var = 0.0;
};

Moments x_moments(const Wavefunction& psi)
{
    double s0 = 0.0, s1 = 0.0;
    for (std::size_t j = 0; j < psi.psi.size(); ++j) {
        const double r = std::norm(psi.psi[j]);
        s0 += r;
        s1 += r * psi.grid.x(j);
    }
    Moments m;
    m.mean = s1 / s0;
    double s2 = 0.0;
    for (std::size_t j = 0; j < psi.psi.size(); ++j) {
        const double d = psi.grid.x(j) - m.mean;
        s2 += std::norm(psi.psi[j]) * d * d;
    }
    m.var = s2 / s0;
    return m;
}

Moments k_moments(const Wavefunction& psi)
{
    const Spectrum s = spectrum(psi);
    double s1 = 0.0;
    for (std::size_t j = 0; j < s.power.size(); ++j) {
        s1 += s.power[j] * psi.grid.k(j);
    }
    Moments m;
    m.mean = s1 / s.total;
    double s2 = 0.0;
    for (std::size_t j = 0; j < s.power.size(); ++j) {
        const double d = psi.grid.k(j) - m.mean;
        s2 += s.power[j] * d * d;
    }
    m.var = s2 / s.total;
    return m;
}

}  // namespace

std::vector<double> density(const Wavefunction& psi)
{
    const double n = psi.norm();
    std::vector<double> rho(psi.psi.size());
    for (std::size_t j = 0; j < rho.size(); ++j) {
        rho[j] = std::norm(psi.psi[j]) / n;
    }
    return rho;
}

double second_moment(const Wavefunction& psi)
{
    double s0 = 0.0, s2 = 0.0;
    for (std::size_t j = 0; j < psi.psi.size(); ++j) {
        const double r = std::norm(psi.psi[j]);
        const double x = psi.grid.x(j);
        s0 += r;
        s2 += r * x * x;
    }
    return s2 / s0;
}

double energy_expectation(const Wavefunction& psi, const OscillatorParams& osc)
{
    const Spectrum s = spectrum(psi);
    const double hbar = osc.constants.hbar();
    double kin = 0.0;
    for (std::size_t j = 0; j < s.power.size(); ++j) {
        const double k = psi.grid.k(j);
        kin += s.power[j] * k * k;
    }
    kin *= hbar * hbar / (2.0 * osc.mass) / s.total;
    const double pot = 0.5 * osc.mass * osc.omega0 * osc.omega0 * second_moment(psi);
    return kin + pot;
}

double PacketWindow::weight(double x) const noexcept
{
    if (x >= lo && x <= hi) {
        return 1.0;
    }
    if (!(rolloff > 0.0)) {
        return 0.0;
    }
    const double d = x < lo ? lo - x : x - hi;
    if (d >= rolloff) {
        return 0.0;
    }
    return 0.5 * (1.0 + std::cos(std::numbers::pi * d / rolloff));
}

PacketWindow auto_packet_window(const Wavefunction& psi, const OscillatorParams& osc, int side,
                                double rolloff_dx)
{
    if (side == 0) {
        throw ParameterError("packet window side must be non-zero");
    }
    const std::vector<double> rho = density(psi);
    const std::size_t n = rho.size();
    const double sgn = side > 0 ? 1.0 : -1.0;

    std::size_t peak = n;
    for (std::size_t j = 0; j < n; ++j) {
        if (sgn * psi.grid.x(j) > 0.0 && (peak == n || rho[j] > rho[peak])) {
            peak = j;
        }
    }
    if (peak == n) {
        throw WindowingError("no grid points on the requested side of the origin");
    }
    // Walk from the peak towards the origin down to the first local minimum.
    std::size_t j = peak;
    const auto inward = [&](std::size_t i) { return side > 0 ? i - 1 : i + 1; };
    while (true) {
        const std::size_t next = inward(j);
        if (next >= n || sgn * psi.grid.x(next) <= 0.0 || rho[next] > rho[j]) {
            break;
        }
        j = next;
    }
    // The roll-off straddles the valley, three quarters of it on the inner side.
    PacketWindow w;
    w.rolloff = rolloff_dx * osc.delta_x;
    if (side > 0) {
        w.lo = psi.grid.x(j) + 0.25 * w.rolloff;
    } else {
        w.hi = psi.grid.x(j) - 0.25 * w.rolloff;
    }
    return w;
}

QuadratureReport quadratures(const Wavefunction& psi, const std::optional<PacketWindow>& window,
                             double min_packet_fraction)
{
    QuadratureReport r;

    const Wavefunction* target = &psi;
    Wavefunction windowed;
    if (window) {
        const std::size_t n = psi.psi.size();
        std::vector<double> w(n);
        std::vector<double> rho(n);
        for (std::size_t j = 0; j < n; ++j) {
            w[j] = window->weight(psi.grid.x(j));
            rho[j] = std::norm(psi.psi[j]);
        }
        // The packet is the valley-to-valley lobe around the strongest
        // windowed point.
        std::size_t peak = 0;
        double best = -1.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double v = w[j] * w[j] * rho[j];
            if (v > best) {
                best = v;
                peak = j;
            }
        }
        if (!(best > 0.0)) {
            throw WindowingError("window contains no probability");
        }
        std::size_t lo = peak, hi = peak;
        while (lo > 0 && rho[lo - 1] <= rho[lo]) {
            --lo;
        }
        while (hi + 1 < n && rho[hi + 1] <= rho[hi]) {
            ++hi;
        }
        double kept = 0.0, all = 0.0;
        for (std::size_t j = lo; j <= hi; ++j) {
            kept += w[j] * w[j] * rho[j];
            all += rho[j];
        }
        r.packet_mass_fraction = kept / all;
        if (r.packet_mass_fraction < min_packet_fraction) {
            std::ostringstream os;
            os << "window keeps only " << r.packet_mass_fraction << " of the packet mass (need "
               << min_packet_fraction << ")";
            throw WindowingError(os.str());
        }
        windowed = psi;
        for (std::size_t j = 0; j < n; ++j) {
            windowed.psi[j] *= w[j];
        }
        windowed.normalize();
        target = &windowed;
        r.window = window;
    }

    // Constants are fixed CODATA values, so p = hbar k needs no oscillator.
    const double hbar = kCodata.hbar();
    const Moments mx = x_moments(*target);
    const Moments mk = k_moments(*target);
    r.mean_x = mx.mean;
    r.sigma_x = std::sqrt(mx.var);
    r.mean_p = hbar * mk.mean;
    r.sigma_p = hbar * std::sqrt(mk.var);
    r.product = r.sigma_x * r.sigma_p;
    return r;
}

double FockPopulations::odd_total() const noexcept
{
    double s = 0.0;
    for (std::size_t n = 1; n < probability.size(); n += 2) {
        s += probability[n];
    }
    return s;
}

double FockPopulations::mean_n() const noexcept
{
    double s = 0.0;
    for (std::size_t n = 0; n < probability.size(); ++n) {
        s += static_cast<double>(n) * probability[n];
    }
    return s / total;
}

FockProjector::FockProjector(const GridSpec& grid, const OscillatorParams& osc,
                             std::size_t n_max)
    : grid_(grid), table_(hermite_functions(grid, osc, n_max))
{
}

FockPopulations FockProjector::project(const Wavefunction& psi, double tolerance) const
{
    if (psi.psi.size() != grid_.n_points) {
        throw ParameterError("wavefunction does not match the projector grid");
    }
    const double dx = grid_.dx();
    const double norm = psi.norm();
    FockPopulations f;
    f.probability.resize(table_.n_max + 1);
    for (std::size_t n = 0; n <= table_.n_max; ++n) {
        const double* row = table_.row(n);
        std::complex<double> c = 0.0;
        for (std::size_t j = 0; j < grid_.n_points; ++j) {
            c += row[j] * psi.psi[j];
        }
        const double p = std::norm(c) * dx * dx / norm;
        if (!std::isfinite(p)) {
            throw PrecisionError("non-finite Fock overlap; raise precision");
        }
        f.probability[n] = p;
        f.total += p;
    }
    if (std::abs(f.total - 1.0) > tolerance) {
        std::ostringstream os;
        os << "Fock populations up to n = " << table_.n_max << " sum to " << f.total
           << "; enlarge n_max";
        throw ResolutionError(os.str());
    }
    return f;
}

FockPopulations fock_populations(const Wavefunction& psi, const OscillatorParams& osc,
                                 std::size_t n_max)
{
    return FockProjector(psi.grid, osc, n_max).project(psi);
}

}  // namespace sedcat::qm
