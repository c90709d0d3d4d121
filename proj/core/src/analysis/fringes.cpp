#include "sedcat/analysis/fringes.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <vector>

#include "sedcat/errors.hpp"

namespace sedcat::analysis {

namespace {

constexpr double kPi = std::numbers::pi;

double median(std::vector<double> v)
{
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    return v[mid];
}

double refine(const SampledDensity& rho, std::size_t i)
{
    const auto& v = rho.values;
    if (i == 0 || i + 1 >= v.size()) {
        return rho.x(i);
    }
    const double den = v[i - 1] - 2.0 * v[i] + v[i + 1];
    double off = den != 0.0 ? 0.5 * (v[i - 1] - v[i + 1]) / den : 0.0;
    off = std::clamp(off, -0.5, 0.5);
    return rho.x(i) + off * rho.dx;
}

}  // namespace

PacketSeparation packet_separation(const SampledDensity& rho, const ModalityOptions& options)
{
    const auto& v = rho.values;
    if (v.size() < 3) {
        throw DataError("packet separation needs at least three samples");
    }
    const double floor = options.peak_over_median * median(v);
    std::size_t top = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i] > v[top]) {
            top = i;
        }
    }
    if (!(v[top] > floor)) {
        throw ModalityError("density has no peak above the median threshold");
    }

    std::size_t best = v.size();
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        if (i == top || !(v[i] > v[i - 1] && v[i] >= v[i + 1])) {
            continue;
        }
        if (!(v[i] > floor) || v[i] < options.min_relative_height * v[top]) {
            continue;
        }
        const std::size_t lo = std::min(i, top);
        const std::size_t hi = std::max(i, top);
        const double valley = *std::min_element(v.begin() + static_cast<std::ptrdiff_t>(lo),
                                                v.begin() + static_cast<std::ptrdiff_t>(hi) + 1);
        if (!(valley < options.valley_fraction * v[i])) {
            continue;
        }
        if (best == v.size() || v[i] > v[best]) {
            best = i;
        }
    }
    if (best == v.size()) {
        throw ModalityError("density is not bimodal under the configured thresholds");
    }
    PacketSeparation s;
    const double p1 = refine(rho, top);
    const double p2 = refine(rho, best);
    s.left = std::min(p1, p2);
    s.right = std::max(p1, p2);
    s.a = s.right - s.left;
    return s;
}

FringeReport fringe_analysis(const SampledDensity& rho, double a, const OscillatorParams& osc,
                             const FringeOptions& options)
{
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw ParameterError("fringe analysis needs a positive packet separation");
    }
    if (options.window_periods < 5.0) {
        throw ParameterError("fringe analysis window must cover at least five predicted periods");
    }
    const double hbar = osc.constants.hbar();
    FringeReport r;
    r.separation = a;
    r.predicted_lambda = 2.0 * kPi * hbar / (osc.mass * osc.omega0 * a);
    const double identity = r.predicted_lambda * a / (2.0 * kPi * hbar / (osc.mass * osc.omega0));
    if (std::abs(identity - 1.0) > 1e-12) {
        throw NumericalError("fringe-period identity violated");
    }
    r.window_half_width = 0.5 * options.window_periods * r.predicted_lambda;

    const double lo = options.centre - r.window_half_width;
    const double hi = options.centre + r.window_half_width;
    const double first = rho.x(0);
    const double last = rho.x(rho.values.size() - 1);
    if (lo < first - 0.5 * rho.dx || hi > last + 0.5 * rho.dx) {
        throw DataError("density does not cover the fringe analysis window");
    }

    std::vector<double> xs, wr;  // centred positions, weighted density
    double wsq = 0.0;            // sum w^2 rho dx, for the shot-noise floor
    double vmax = 0.0, vmin = 0.0;
    bool any = false;
    for (std::size_t i = 0; i < rho.values.size(); ++i) {
        const double u = rho.x(i) - options.centre;
        if (std::abs(u) > r.window_half_width) {
            continue;
        }
        const double w = 0.5 * (1.0 + std::cos(kPi * u / r.window_half_width));
        xs.push_back(u);
        wr.push_back(w * rho.values[i] * rho.dx);
        wsq += w * w * rho.values[i] * rho.dx;
        if (!any) {
            vmax = vmin = rho.values[i];
            any = true;
        }
        vmax = std::max(vmax, rho.values[i]);
        vmin = std::min(vmin, rho.values[i]);
    }
    if (xs.size() < 10) {
        throw DataError("fringe analysis window holds fewer than ten samples");
    }
    r.extrema_contrast = vmax + vmin > 0.0 ? (vmax - vmin) / (vmax + vmin) : 0.0;

    auto transform = [&](double k) {
        std::complex<double> c = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            c += wr[i] * std::polar(1.0, -k * xs[i]);
        }
        return c;
    };
    auto power = [&](double k) { return std::norm(transform(k)); };

    double c0 = 0.0;
    for (double v : wr) {
        c0 += v;
    }
    const double k_pred = 2.0 * kPi / r.predicted_lambda;

    // Dense scan of the band, then golden-section refinement.
    constexpr int kScan = 600;
    const double ka = options.band_low * k_pred;
    const double kb = options.band_high * k_pred;
    const double dk = (kb - ka) / kScan;
    int best = 0;
    double best_p = -1.0;
    for (int s = 0; s <= kScan; ++s) {
        const double p = power(ka + s * dk);
        if (p > best_p) {
            best_p = p;
            best = s;
        }
    }
    double k_peak = ka + best * dk;
    const bool interior = best > 0 && best < kScan;
    if (interior) {
        double l = k_peak - dk, h = k_peak + dk;
        const double g = 0.5 * (std::sqrt(5.0) - 1.0);
        double m1 = h - g * (h - l), m2 = l + g * (h - l);
        double p1 = power(m1), p2 = power(m2);
        for (int it = 0; it < 60; ++it) {
            if (p1 > p2) {
                h = m2;
                m2 = m1;
                p2 = p1;
                m1 = h - g * (h - l);
                p1 = power(m1);
            } else {
                l = m1;
                m1 = m2;
                p1 = p2;
                m2 = l + g * (h - l);
                p2 = power(m2);
            }
        }
        k_peak = 0.5 * (l + h);
        best_p = power(k_peak);
    }
    r.peak_power = best_p;
    r.noise_power = rho.sample_count && *rho.sample_count > 0.0
                        ? wsq / *rho.sample_count
                        : 1e-12 * c0 * c0;
    const bool detected = interior && best_p > options.detection_factor * r.noise_power;
    if (detected) {
        r.measured_lambda = 2.0 * kPi / k_peak;
        r.wavenumber_used = k_peak;
    } else {
        r.wavenumber_used = k_pred;
    }
    r.contrast = c0 > 0.0 ? std::min(1.0, 2.0 * std::abs(transform(r.wavenumber_used)) / c0) : 0.0;

    double sum_sq = 0.0;
    for (double v : wr) {
        sum_sq += v * v;
    }
    r.spectral_peak_ratio =
        sum_sq > 0.0 ? power(k_pred) / (static_cast<double>(wr.size()) * sum_sq) : 0.0;
    return r;
}

}  // namespace sedcat::analysis
