#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace sedcat::analysis {

// Uniform-bin histogram over [lo, hi]; a sample equal to hi falls in the
// last bin.
struct Histogram {
    std::vector<double> edges;    // bins + 1 values, m
    std::vector<double> counts;   // samples (or probability mass) per bin
    std::vector<double> density;  // counts / (in_domain * width), 1/m
    double in_domain = 0.0;
    std::size_t out_of_domain = 0;
    std::optional<double> sample_count;  // set for particle histograms

    std::size_t bins() const noexcept { return counts.size(); }
    double bin_width() const noexcept { return edges[1] - edges[0]; }
    double center(std::size_t b) const noexcept { return 0.5 * (edges[b] + edges[b + 1]); }
};

// Throws DataError for empty input, an empty domain, or fewer than
// min_samples samples inside [lo, hi].
Histogram histogram(std::span<const double> samples, double lo, double hi, std::size_t bins,
                    std::size_t min_samples = 100);

// Integrates a density sampled on a uniform grid (spacing dx, first point
// x0, each point standing for the cell [x - dx/2, x + dx/2]) over the bins.
Histogram rebin_density(double x0, double dx, std::span<const double> rho, double lo, double hi,
                        std::size_t bins);

// Density values on a uniform lattice x_i = x0 + i dx.
struct SampledDensity {
    double x0 = 0.0;
    double dx = 0.0;
    std::vector<double> values;
    // Number of particles behind a histogram; enables the shot-noise floor.
    std::optional<double> sample_count;

    double x(std::size_t i) const noexcept { return x0 + static_cast<double>(i) * dx; }
};

SampledDensity sampled(const Histogram& h);

}  // namespace sedcat::analysis
