#pragma once

#include <span>

namespace persist {

/// Distribution summary over replicates. Quartiles use linear interpolation
/// between order statistics (R type 7); sd is the sample standard deviation
/// and is 0 for a single replicate.
struct Summary {
    double mean = 0.0;
    double sd = 0.0;
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
    int n = 0;

    bool operator==(const Summary&) const = default;
};

Summary summarize(std::span<const double> values);

/// Quantile at probability p of already-sorted values.
double sorted_quantile(std::span<const double> sorted, double p);

}  // namespace persist
