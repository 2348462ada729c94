#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rstar/matrix.hpp"

namespace rstar::learn {

/// Product-moment correlation. Throws on length mismatch, fewer than two points or zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

struct WelchResult {
    double t = 0.0;
    double df = 0.0;
};

/// Welch two-sample t with Welch-Satterthwaite df, using sample (n - 1) variances.
/// Throws when either sample has fewer than two values. With zero variance in both samples
/// t is 0 for equal means and NaN otherwise; df is NaN.
WelchResult welch_t(std::span<const double> a, std::span<const double> b);

/// Most frequent value; the smallest wins ties.
double discrete_mode(std::span<const double> xs);
/// Midpoint of the fullest Freedman-Diaconis bin (lowest bin wins ties). Falls back to
/// discrete_mode when the bin width is zero.
double histogram_mode(std::span<const double> xs);
/// Linear-interpolation quantile of sorted data.
double quantile_sorted(std::span<const double> sorted, double q);

struct GroupStats {
    std::size_t n = 0;
    double mode = 0.0;
    double mean = 0.0;
    double sigma = 0.0; ///< population
    double min = 0.0;
    double max = 0.0;
};

struct GroupRow {
    std::string feature;
    GroupStats cls[2]; ///< index by label
    WelchResult welch; ///< rising stars (1) minus non-rising (0)
    bool welch_defined = true;
};

/// Per-column class-conditional summary. Integer-valued columns use discrete_mode, others
/// histogram_mode. A class without rows gets n = 0 and is written as NA. Throws on no rows.
std::vector<GroupRow> group_comparison(std::span<const std::string> names, const Matrix& values,
                                       std::span<const int> labels);

/// Columns: feature,class,n,mode,mean,sigma,min,max,t,df. Class is "rising" or "non_rising".
std::string group_comparison_csv(std::span<const GroupRow> rows);

/// Square matrix of pearson(col i, col j); undefined cells are empty optionals.
std::vector<std::vector<std::optional<double>>> correlation_matrix(const Matrix& values);
/// Header "feature,<names...>", one row per feature, undefined cells written as NA.
std::string correlation_csv(std::span<const std::string> names,
                            const std::vector<std::vector<std::optional<double>>>& m);

} // namespace rstar::learn
