#include "sedcat/qm/states.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "sedcat/errors.hpp"

namespace sedcat::qm {

namespace {

constexpr double kPi = std::numbers::pi;

Wavefunction gaussian(const GridSpec& grid, double sigma_x, double x0, double p0, double hbar)
{
    validate(grid);
    Wavefunction w;
    w.grid = grid;
    w.psi.resize(grid.n_points);
    const double inv4s2 = 1.0 / (4.0 * sigma_x * sigma_x);
    for (std::size_t j = 0; j < grid.n_points; ++j) {
        const double x = grid.x(j);
        const double d = x - x0;
        w.psi[j] = std::exp(-d * d * inv4s2) * std::polar(1.0, p0 * x / hbar);
    }
    w.normalize();
    return w;
}

}  // namespace

std::vector<double> grid_points(const GridSpec& grid)
{
    std::vector<double> xs(grid.n_points);
    for (std::size_t j = 0; j < grid.n_points; ++j) {
        xs[j] = grid.x(j);
    }
    return xs;
}

Wavefunction ground_state(const GridSpec& grid, const OscillatorParams& osc)
{
    if (grid.dx() > osc.delta_x / 3.0) {
        std::ostringstream os;
        os << "grid spacing " << grid.dx() / osc.delta_x
           << " Delta_x does not resolve the ground state (need <= 1/3)";
        throw ResolutionError(os.str());
    }
    return gaussian(grid, osc.delta_x, 0.0, 0.0, osc.constants.hbar());
}

Wavefunction coherent_state(const GridSpec& grid, const OscillatorParams& osc, double x0,
                            double p0)
{
    return gaussian(grid, osc.delta_x, x0, p0, osc.constants.hbar());
}

Wavefunction squeezed_vacuum(const GridSpec& grid, const OscillatorParams& osc, double r)
{
    return gaussian(grid, osc.delta_x * std::exp(-r), 0.0, 0.0, osc.constants.hbar());
}

Wavefunction fock_state(const GridSpec& grid, const OscillatorParams& osc, std::size_t n)
{
    validate(grid);
    const HermiteTable h = hermite_functions(grid, osc, n);
    Wavefunction w;
    w.grid = grid;
    w.psi.resize(grid.n_points);
    const double* row = h.row(n);
    for (std::size_t j = 0; j < grid.n_points; ++j) {
        w.psi[j] = row[j];
    }
    w.normalize();
    return w;
}

HermiteTable hermite_functions(const std::vector<double>& xs, const OscillatorParams& osc,
                               std::size_t n_max)
{
    constexpr double kBig = 1e150;
    const double log_big = std::log(kBig);
    const double ell = std::sqrt(osc.constants.hbar() / (osc.mass * osc.omega0));

    HermiteTable t;
    t.n_max = n_max;
    t.n_points = xs.size();
    t.values.assign((n_max + 1) * xs.size(), 0.0);

    std::vector<double> coef_a(n_max + 1), coef_b(n_max + 1);
    for (std::size_t n = 0; n < n_max; ++n) {
        const auto nd = static_cast<double>(n);
        coef_a[n] = std::sqrt(2.0 / (nd + 1.0));
        coef_b[n] = std::sqrt(nd / (nd + 1.0));
    }

    const double log_norm0 = -0.25 * std::log(kPi) - 0.5 * std::log(ell);
    for (std::size_t j = 0; j < xs.size(); ++j) {
        const double xi = xs[j] / ell;
        double log_scale = log_norm0 - 0.5 * xi * xi;
        double prev = 0.0;
        double cur = 1.0;
        for (std::size_t n = 0;; ++n) {
            if (cur != 0.0) {
                const double lg = log_scale + std::log(std::abs(cur));
                const double v = lg < -745.0 ? 0.0 : std::copysign(std::exp(lg), cur);
                if (!std::isfinite(v)) {
                    throw PrecisionError("Hermite recurrence overflowed; raise precision");
                }
                t.values[n * xs.size() + j] = v;
            }
            if (n == n_max) {
                break;
            }
            const double next = coef_a[n] * xi * cur - coef_b[n] * prev;
            prev = cur;
            cur = next;
            if (std::abs(cur) > kBig) {
                cur /= kBig;
                prev /= kBig;
                log_scale += log_big;
            }
        }
    }
    return t;
}

HermiteTable hermite_functions(const GridSpec& grid, const OscillatorParams& osc,
                               std::size_t n_max)
{
    return hermite_functions(grid_points(grid), osc, n_max);
}

}  // namespace sedcat::qm
