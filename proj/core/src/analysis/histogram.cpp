#include "sedcat/analysis/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sedcat/errors.hpp"

namespace sedcat::analysis {

namespace {

Histogram empty_histogram(double lo, double hi, std::size_t bins)
{
    if (bins == 0 || !(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw DataError("histogram needs a finite domain with hi > lo and at least one bin");
    }
    Histogram h;
    h.edges.resize(bins + 1);
    const double w = (hi - lo) / static_cast<double>(bins);
    for (std::size_t b = 0; b <= bins; ++b) {
        h.edges[b] = lo + static_cast<double>(b) * w;
    }
    h.edges[bins] = hi;
    h.counts.assign(bins, 0.0);
    h.density.assign(bins, 0.0);
    return h;
}

void finish(Histogram& h)
{
    const double w = h.bin_width();
    for (std::size_t b = 0; b < h.bins(); ++b) {
        h.density[b] = h.in_domain > 0.0 ? h.counts[b] / (h.in_domain * w) : 0.0;
    }
}

}  // namespace

Histogram histogram(std::span<const double> samples, double lo, double hi, std::size_t bins,
                    std::size_t min_samples)
{
    if (samples.empty()) {
        throw DataError("histogram of an empty sample set");
    }
    Histogram h = empty_histogram(lo, hi, bins);
    const double scale = static_cast<double>(bins) / (hi - lo);
    std::size_t inside = 0;
    for (double s : samples) {
        if (!(s >= lo && s <= hi)) {
            ++h.out_of_domain;
            continue;
        }
        auto b = static_cast<std::size_t>((s - lo) * scale);
        b = std::min(b, bins - 1);
        h.counts[b] += 1.0;
        ++inside;
    }
    if (inside < min_samples) {
        std::ostringstream os;
        os << "only " << inside << " of " << samples.size() << " samples fall inside ["
           << lo << ", " << hi << "] (need " << min_samples << ")";
        throw DataError(os.str());
    }
    h.in_domain = static_cast<double>(inside);
    h.sample_count = static_cast<double>(inside);
    finish(h);
    return h;
}

Histogram rebin_density(double x0, double dx, std::span<const double> rho, double lo, double hi,
                        std::size_t bins)
{
    if (rho.empty() || !(dx > 0.0)) {
        throw DataError("rebinning needs a non-empty density on a positive spacing");
    }
    Histogram h = empty_histogram(lo, hi, bins);
    const double w = h.bin_width();
    for (std::size_t j = 0; j < rho.size(); ++j) {
        const double a = x0 + (static_cast<double>(j) - 0.5) * dx;
        const double b = a + dx;
        if (b <= lo || a >= hi) {
            continue;
        }
        const double mass_per_len = rho[j];
        auto first = static_cast<std::ptrdiff_t>(std::floor((std::max(a, lo) - lo) / w));
        first = std::clamp<std::ptrdiff_t>(first, 0, static_cast<std::ptrdiff_t>(bins) - 1);
        for (auto k = static_cast<std::size_t>(first); k < bins; ++k) {
            const double l = std::max(a, h.edges[k]);
            const double r = std::min(b, h.edges[k + 1]);
            if (r <= l) {
                if (h.edges[k] >= b) {
                    break;
                }
                continue;
            }
            h.counts[k] += mass_per_len * (r - l);
        }
    }
    double total = 0.0;
    for (double c : h.counts) {
        total += c;
    }
    h.in_domain = total;
    finish(h);
    return h;
}

SampledDensity sampled(const Histogram& h)
{
    SampledDensity d;
    d.x0 = h.center(0);
    d.dx = h.bin_width();
    d.values = h.density;
    d.sample_count = h.sample_count;
    return d;
}

}  // namespace sedcat::analysis
