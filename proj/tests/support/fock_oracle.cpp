#include "fock_oracle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sedcat::testing {

std::vector<std::vector<double>> plain_hermite(const std::vector<double>& xs, double ell,
                                               std::size_t n_max)
{
    std::vector<std::vector<double>> h(n_max + 1, std::vector<double>(xs.size()));
    const double c0 = 1.0 / std::sqrt(std::sqrt(std::numbers::pi) * ell);
    for (std::size_t j = 0; j < xs.size(); ++j) {
        const double xi = xs[j] / ell;
        h[0][j] = c0 * std::exp(-0.5 * xi * xi);
        if (n_max >= 1) {
            h[1][j] = std::sqrt(2.0) * xi * h[0][j];
        }
        for (std::size_t n = 1; n < n_max; ++n) {
            const auto nd = static_cast<double>(n);
            h[n + 1][j] = std::sqrt(2.0 / (nd + 1.0)) * xi * h[n][j] -
                          std::sqrt(nd / (nd + 1.0)) * h[n - 1][j];
        }
    }
    return h;
}

FockOracle::FockOracle(const OscillatorParams& osc, const LaserConfig& laser, std::size_t n_max,
                       std::size_t quadrature_points)
    : osc_(osc), laser_(laser), n_max_(n_max)
{
    ell_ = std::sqrt(osc.constants.hbar() / (osc.mass * osc.omega0));
    const std::size_t dim = n_max + 1;
    h0_.resize(static_cast<Eigen::Index>(dim));
    for (std::size_t n = 0; n < dim; ++n) {
        h0_[static_cast<Eigen::Index>(n)] = osc.omega0 * (static_cast<double>(n) + 0.5);
    }

    const double half = (std::sqrt(2.0 * static_cast<double>(n_max) + 1.0) + 14.0) * ell_;
    std::vector<double> xs(quadrature_points);
    const double dx = 2.0 * half / static_cast<double>(quadrature_points - 1);
    for (std::size_t j = 0; j < quadrature_points; ++j) {
        xs[j] = -half + static_cast<double>(j) * dx;
    }
    const auto phi = plain_hermite(xs, ell_, n_max);
    const double kl = laser.lattice_wavenumber();
    cos_.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t m = 0; m < dim; ++m) {
        for (std::size_t n = m; n < dim; ++n) {
            double s = 0.0;
            for (std::size_t j = 0; j < xs.size(); ++j) {
                const double w = (j == 0 || j + 1 == xs.size()) ? 0.5 : 1.0;
                s += w * phi[m][j] * phi[n][j] * std::cos(kl * xs[j]);
            }
            cos_(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) = s * dx;
            cos_(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m)) = s * dx;
        }
    }
    const Eigen::MatrixXd h0 = h0_.asDiagonal();
    comm_ = cos_ * h0 - h0 * cos_;
}

Eigen::VectorXcd FockOracle::ground() const
{
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n_max_ + 1));
    c[0] = 1.0;
    return c;
}

double FockOracle::drive(double t) const noexcept
{
    const double u = t / laser_.tau;
    double env = std::exp(-2.0 * u * u);
    if (env < 1e-12) {
        env = 0.0;
    }
    const double u0 = osc_.charge * osc_.charge * laser_.a1 * laser_.a2 / (2.0 * osc_.mass);
    return u0 * std::cos((laser_.omega1 - laser_.omega2) * t) * env / osc_.constants.hbar();
}

void FockOracle::propagate(Eigen::VectorXcd& c, double t0, double t1, double h) const
{
    const auto steps = static_cast<std::size_t>(std::ceil((t1 - t0) / h - 1e-9));
    const double dt = (t1 - t0) / static_cast<double>(steps);
    const double g = std::sqrt(3.0) / 6.0;
    const std::complex<double> I(0.0, 1.0);
    const Eigen::Index dim = c.size();
    for (std::size_t s = 0; s < steps; ++s) {
        const double t = t0 + static_cast<double>(s) * dt;
        const double f1 = drive(t + dt * (0.5 - g));
        const double f2 = drive(t + dt * (0.5 + g));
        // Omega = -i dt/2 (2 H0 + (f1 + f2) C) + sqrt(3)/12 dt^2 (f1 - f2) [C, H0].
        Eigen::MatrixXcd omega = (-I * 0.5 * dt * (f1 + f2)) * cos_.cast<std::complex<double>>();
        for (Eigen::Index n = 0; n < dim; ++n) {
            omega(n, n) += -I * dt * h0_[n];
        }
        omega += (std::sqrt(3.0) / 12.0 * dt * dt * (f1 - f2)) * comm_.cast<std::complex<double>>();

        Eigen::VectorXcd term = c;
        Eigen::VectorXcd sum = c;
        for (int k = 1; k < 60; ++k) {
            term = omega * term / static_cast<double>(k);
            sum += term;
            if (term.norm() < 1e-17 * sum.norm()) {
                break;
            }
        }
        c = sum;
    }
}

std::vector<std::complex<double>> FockOracle::to_positions(const Eigen::VectorXcd& c,
                                                           const std::vector<double>& xs) const
{
    const auto phi = plain_hermite(xs, ell_, n_max_);
    std::vector<std::complex<double>> psi(xs.size(), 0.0);
    for (std::size_t n = 0; n <= n_max_; ++n) {
        for (std::size_t j = 0; j < xs.size(); ++j) {
            psi[j] += c[static_cast<Eigen::Index>(n)] * phi[n][j];
        }
    }
    return psi;
}

}  // namespace sedcat::testing
