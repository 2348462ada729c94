#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace rstar::stats {

inline double mean(std::span<const double> xs) {
    if (xs.empty()) return 0.0;
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

/// Two-pass variance; ddof = 0 gives the population variance, 1 the sample variance.
inline double variance(std::span<const double> xs, int ddof = 0) {
    const auto n = static_cast<double>(xs.size());
    if (n - ddof <= 0) return 0.0;
    const double m = mean(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return s / (n - ddof);
}

inline double stddev(std::span<const double> xs, int ddof = 0) { return std::sqrt(variance(xs, ddof)); }

} // namespace rstar::stats
