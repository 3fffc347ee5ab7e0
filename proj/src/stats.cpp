#include "persist/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace persist {

double sorted_quantile(std::span<const double> sorted, double p)
{
    if (sorted.empty()) {
        throw std::invalid_argument("quantile of an empty sample");
    }
    const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

Summary summarize(std::span<const double> values)
{
    if (values.empty()) {
        throw std::invalid_argument("summary of an empty sample");
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    Summary s;
    s.n = static_cast<int>(sorted.size());
    // Summing in sorted order makes the result independent of input order.
    double sum = 0.0;
    for (double v : sorted) {
        sum += v;
    }
    s.mean = sum / s.n;
    if (s.n > 1) {
        double ss = 0.0;
        for (double v : sorted) {
            ss += (v - s.mean) * (v - s.mean);
        }
        s.sd = std::sqrt(ss / (s.n - 1));
    }
    s.min = sorted.front();
    s.max = sorted.back();
    s.q1 = sorted_quantile(sorted, 0.25);
    s.median = sorted_quantile(sorted, 0.5);
    s.q3 = sorted_quantile(sorted, 0.75);
    return s;
}

}  // namespace persist
