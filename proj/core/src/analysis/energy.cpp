#include "sedcat/analysis/energy.hpp"

#include <algorithm>
#include <cmath>

#include "sedcat/errors.hpp"

namespace sedcat::analysis {

EnergyDistribution energy_distribution_qm(const qm::FockPopulations& pops,
                                          const OscillatorParams& osc)
{
    EnergyDistribution d;
    d.discrete = true;
    const double hw = osc.hbar_omega0();
    double m1 = 0.0, m2 = 0.0;
    for (std::size_t n = 0; n < pops.probability.size(); ++n) {
        const double e = hw * (static_cast<double>(n) + 0.5);
        const double p = pops.probability[n] / pops.total;
        d.levels.push_back(e);
        d.probability.push_back(p);
        m1 += p * e;
        m2 += p * e * e;
    }
    d.mean = m1;
    d.std_dev = std::sqrt(std::max(0.0, m2 - m1 * m1));
    return d;
}

EnergyDistribution energy_distribution_sed(const sed::EnsembleSnapshot& s,
                                           const OscillatorParams& osc, std::size_t bins,
                                           double e_max)
{
    if (s.size() == 0 || bins == 0) {
        throw DataError("energy distribution needs particles and bins");
    }
    std::vector<double> e(s.size());
    const double k = 0.5 * osc.mass * osc.omega0 * osc.omega0;
    double m1 = 0.0, top = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        e[i] = 0.5 * osc.mass * s.v[i] * s.v[i] + k * s.x[i] * s.x[i];
        m1 += e[i];
        top = std::max(top, e[i]);
    }
    const auto n = static_cast<double>(s.size());
    m1 /= n;
    double var = 0.0;
    for (double v : e) {
        var += (v - m1) * (v - m1);
    }
    EnergyDistribution d;
    d.mean = m1;
    d.std_dev = std::sqrt(var / n);
    const double hi = e_max > 0.0 ? e_max : std::max(top, osc.hbar_omega0());
    d.levels.resize(bins + 1);
    for (std::size_t b = 0; b <= bins; ++b) {
        d.levels[b] = hi * static_cast<double>(b) / static_cast<double>(bins);
    }
    d.probability.assign(bins, 0.0);
    for (double v : e) {
        auto b = static_cast<std::size_t>(v / hi * static_cast<double>(bins));
        b = std::min(b, bins - 1);
        d.probability[b] += 1.0 / n;
    }
    return d;
}

double mean_energy(const sed::EnsembleSnapshot& s, const OscillatorParams& osc)
{
    const double k = 0.5 * osc.mass * osc.omega0 * osc.omega0;
    double m = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        m += 0.5 * osc.mass * s.v[i] * s.v[i] + k * s.x[i] * s.x[i];
    }
    return m / static_cast<double>(s.size());
}

EnsembleMoments ensemble_moments(const sed::EnsembleSnapshot& s)
{
    if (s.size() == 0) {
        throw DataError("moments of an empty ensemble");
    }
    const auto n = static_cast<double>(s.size());
    EnsembleMoments m;
    for (std::size_t i = 0; i < s.size(); ++i) {
        m.mean_x += s.x[i];
        m.mean_v += s.v[i];
    }
    m.mean_x /= n;
    m.mean_v /= n;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double dx = s.x[i] - m.mean_x;
        const double dv = s.v[i] - m.mean_v;
        m.var_x += dx * dx;
        m.var_v += dv * dv;
        m.cov_xv += dx * dv;
    }
    m.var_x /= n;
    m.var_v /= n;
    m.cov_xv /= n;
    return m;
}

EnergyOverlap energy_overlap(const std::vector<double>& qm_times,
                             const std::vector<double>& qm_energy,
                             const std::vector<double>& sed_times,
                             const std::vector<double>& sed_energy, double t_from)
{
    if (qm_times.size() < 2 || qm_times.size() != qm_energy.size() || sed_times.empty() ||
        sed_times.size() != sed_energy.size()) {
        throw DataError("energy overlap needs matching time and energy series");
    }
    EnergyOverlap o;
    std::size_t imax = 0;
    for (std::size_t i = 0; i < sed_energy.size(); ++i) {
        if (sed_energy[i] > sed_energy[imax]) {
            imax = i;
        }
    }
    o.t_max = sed_times[imax];
    o.sed_max = sed_energy[imax];
    for (std::size_t i = 0; i <= imax; ++i) {
        const double t = sed_times[i];
        if (t < t_from || t < qm_times.front() || t > qm_times.back()) {
            continue;
        }
        const auto it = std::upper_bound(qm_times.begin(), qm_times.end(), t);
        const std::size_t j = std::min<std::size_t>(
            static_cast<std::size_t>(it - qm_times.begin()), qm_times.size() - 1);
        const std::size_t j0 = j - 1;
        const double f = (t - qm_times[j0]) / (qm_times[j] - qm_times[j0]);
        const double eq = qm_energy[j0] + f * (qm_energy[j] - qm_energy[j0]);
        const double dev = std::abs(eq - sed_energy[i]) / eq;
        if (dev > o.max_relative_deviation) {
            o.max_relative_deviation = dev;
            o.t_worst = t;
        }
    }
    return o;
}

}  // namespace sedcat::analysis
