#include "sedcat/analysis/compare.hpp"

#include <algorithm>
#include <cmath>

#include "sedcat/errors.hpp"

namespace sedcat::analysis {

DistributionDistance compare_distributions(const Histogram& p, const Histogram& q)
{
    if (p.edges.size() != q.edges.size()) {
        throw AlignmentError("histograms have different bin counts");
    }
    const double scale = std::abs(p.edges.back() - p.edges.front());
    for (std::size_t b = 0; b < p.edges.size(); ++b) {
        if (std::abs(p.edges[b] - q.edges[b]) > 1e-12 * scale) {
            throw AlignmentError("histograms have different bin edges");
        }
    }
    DistributionDistance d;
    double cp = 0.0, cq = 0.0;
    for (std::size_t b = 0; b < p.bins(); ++b) {
        const double w = p.edges[b + 1] - p.edges[b];
        d.l1 += std::abs(p.density[b] - q.density[b]) * w;
        cp += p.density[b] * w;
        cq += q.density[b] * w;
        d.ks = std::max(d.ks, std::abs(cp - cq));
    }
    d.l1 = std::min(d.l1, 2.0);
    d.ks = std::min(d.ks, 1.0);
    return d;
}

}  // namespace sedcat::analysis
