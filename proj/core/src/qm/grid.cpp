#include "sedcat/qm/grid.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sedcat/errors.hpp"

namespace sedcat::qm {

double GridSpec::k(std::size_t j) const noexcept
{
    const auto n = static_cast<std::ptrdiff_t>(n_points);
    auto s = static_cast<std::ptrdiff_t>(j);
    if (s >= n / 2) {
        s -= n;
    }
    return 2.0 * std::numbers::pi * static_cast<double>(s) / length();
}

GridSpec make_grid(const OscillatorParams& osc, double half_width_dx, std::size_t n_points,
                   double steps_per_period)
{
    if (!(half_width_dx > 0.0) || !(steps_per_period > 0.0)) {
        throw ParameterError("grid half-width and steps per period must be positive");
    }
    GridSpec g;
    g.x_min = -half_width_dx * osc.delta_x;
    g.x_max = half_width_dx * osc.delta_x;
    g.n_points = n_points;
    g.dt = osc.period() / steps_per_period;
    validate(g);
    return g;
}

void validate(const GridSpec& grid)
{
    if (!std::isfinite(grid.x_min) || !std::isfinite(grid.x_max) || !(grid.x_max > grid.x_min)) {
        throw ParameterError("grid requires finite x_max > x_min");
    }
    if (grid.n_points < 256 || !std::has_single_bit(grid.n_points)) {
        std::ostringstream os;
        os << "grid n_points must be a power of two >= 256 (got " << grid.n_points << ")";
        throw ParameterError(os.str());
    }
    if (!(grid.dt > 0.0) || !std::isfinite(grid.dt)) {
        throw ParameterError("grid dt must be positive and finite");
    }
}

double Wavefunction::norm() const noexcept
{
    double s = 0.0;
    for (const auto& a : psi) {
        s += std::norm(a);
    }
    return s * grid.dx();
}

void Wavefunction::normalize()
{
    const double n = norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw NumericalError("cannot normalize a zero or non-finite wavefunction");
    }
    const double f = 1.0 / std::sqrt(n);
    for (auto& a : psi) {
        a *= f;
    }
}

namespace {

void require_same_grid(const Wavefunction& a, const Wavefunction& b)
{
    if (a.psi.size() != b.psi.size() || a.grid.x_min != b.grid.x_min ||
        a.grid.x_max != b.grid.x_max) {
        throw ParameterError("wavefunctions live on different grids");
    }
}

}  // namespace

std::complex<double> inner_product(const Wavefunction& a, const Wavefunction& b)
{
    require_same_grid(a, b);
    std::complex<double> s = 0.0;
    for (std::size_t j = 0; j < a.psi.size(); ++j) {
        s += std::conj(a.psi[j]) * b.psi[j];
    }
    return s * a.grid.dx();
}

double fidelity(const Wavefunction& a, const Wavefunction& b)
{
    return std::norm(inner_product(a, b));
}

double l2_distance(const Wavefunction& a, const Wavefunction& b)
{
    require_same_grid(a, b);
    double s = 0.0;
    for (std::size_t j = 0; j < a.psi.size(); ++j) {
        s += std::norm(a.psi[j] - b.psi[j]);
    }
    return std::sqrt(s * a.grid.dx());
}

}  // namespace sedcat::qm
