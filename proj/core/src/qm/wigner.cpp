#include "sedcat/qm/wigner.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "sedcat/errors.hpp"

namespace sedcat::qm {

WignerLattice default_wigner_lattice(const OscillatorParams& osc)
{
    WignerLattice l;
    l.half_width_x = 40.0 * osc.delta_x;
    l.half_width_p = 40.0 * osc.delta_p;
    return l;
}

WignerMap wigner(const Wavefunction& psi, const OscillatorParams& osc,
                 const WignerLattice& lattice)
{
    const GridSpec& g = psi.grid;
    const std::size_t n = g.n_points;
    if (lattice.nx == 0 || lattice.np == 0 || !(lattice.half_width_x > 0.0) ||
        !(lattice.half_width_p > 0.0)) {
        throw ParameterError("Wigner lattice needs positive extents and sizes");
    }

    WignerMap w;
    w.nx = lattice.nx;
    w.np = lattice.np;
    w.x0 = -lattice.half_width_x;
    w.dx = 2.0 * lattice.half_width_x / static_cast<double>(lattice.nx);
    w.p0 = -lattice.half_width_p;
    w.dp = 2.0 * lattice.half_width_p / static_cast<double>(lattice.np);
    w.time = psi.time;
    w.values.assign(w.nx * w.np, 0.0);

    std::vector<std::size_t> centre(w.nx);
    const double gdx = g.dx();
    for (std::size_t i = 0; i < w.nx; ++i) {
        const double u = (w.x0 + static_cast<double>(i) * w.dx - g.x_min) / gdx;
        const double r = std::round(u);
        if (std::abs(u - r) > 1e-6 || r < 0.0 || r >= static_cast<double>(n)) {
            throw ResolutionError("Wigner x-lattice does not coincide with grid points");
        }
        centre[i] = static_cast<std::size_t>(r);
    }

    const double hbar = osc.constants.hbar();
    const double norm = psi.norm();
    const double pref = gdx / (std::numbers::pi * hbar * norm);

    std::vector<std::complex<double>> step(w.np), phasor(w.np);
    std::vector<double> acc(w.np);
    for (std::size_t m = 0; m < w.np; ++m) {
        const double p = w.p0 + static_cast<double>(m) * w.dp;
        step[m] = std::polar(1.0, 2.0 * p * gdx / hbar);
    }

    for (std::size_t i = 0; i < w.nx; ++i) {
        const std::size_t c = centre[i];
        const std::size_t reach = std::min(c, n - 1 - c);
        const double f0 = std::norm(psi.psi[c]);
        for (std::size_t m = 0; m < w.np; ++m) {
            acc[m] = f0;
            phasor[m] = 1.0;
        }
        for (std::size_t j = 1; j <= reach; ++j) {
            const std::complex<double> f = std::conj(psi.psi[c + j]) * psi.psi[c - j];
            const bool anchor = j % 64 == 0;
            for (std::size_t m = 0; m < w.np; ++m) {
                if (anchor) {
                    const double p = w.p0 + static_cast<double>(m) * w.dp;
                    phasor[m] = std::polar(1.0, 2.0 * p * static_cast<double>(j) * gdx / hbar);
                } else {
                    phasor[m] *= step[m];
                }
                acc[m] += 2.0 * (f.real() * phasor[m].real() - f.imag() * phasor[m].imag());
            }
        }
        for (std::size_t m = 0; m < w.np; ++m) {
            w.values[i * w.np + m] = pref * acc[m];
        }
    }

    double l1 = 0.0, total = 0.0;
    for (std::size_t i = 0; i < w.nx; ++i) {
        double marg = 0.0;
        for (std::size_t m = 0; m < w.np; ++m) {
            marg += w.values[i * w.np + m];
        }
        marg *= w.dp;
        total += marg * w.dx;
        l1 += std::abs(marg - std::norm(psi.psi[centre[i]]) / norm) * w.dx;
    }
    w.marginal_l1 = l1;
    w.total = total;
    if (!(l1 <= lattice.marginal_tolerance)) {
        std::ostringstream os;
        os << "Wigner x-marginal misses the density by " << l1
           << " (L1); the momentum lattice is too coarse or too narrow";
        throw ResolutionError(os.str());
    }
    return w;
}

}  // namespace sedcat::qm
