#pragma once

#include "sedcat/analysis/histogram.hpp"

namespace sedcat::analysis {

struct DistributionDistance {
    double l1 = 0.0;  // integral |p - q| dx, in [0, 2]
    double ks = 0.0;  // max |P - Q| over the bin edges, in [0, 1]
};

// Both histograms must share their bin edges; throws AlignmentError otherwise.
DistributionDistance compare_distributions(const Histogram& p, const Histogram& q);

}  // namespace sedcat::analysis
