#pragma once

#include <span>
#include <vector>

namespace rstar::learn {

struct Confusion {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
};

/// Throws on length mismatch or empty input.
Confusion confusion(std::span<const int> predictions, std::span<const int> labels);
double precision(const Confusion& c) noexcept;
double recall(const Confusion& c) noexcept;
/// 2PR / (P + R), 0 when P + R == 0.
double f1_score(std::span<const int> predictions, std::span<const int> labels);

/// Mann-Whitney AUC: probability a random positive outscores a random negative, ties counted 1/2.
/// O(n log n) via mid-ranks. Throws unless both classes are present.
double auc(std::span<const double> scores, std::span<const int> labels);

struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;
    double threshold = 0.0; ///< predict positive when score >= threshold
};

/// ROC curve over every distinct score threshold, from (0,0) to (1,1), non-decreasing in fpr.
std::vector<RocPoint> roc_curve(std::span<const double> scores, std::span<const int> labels);
/// Trapezoidal area under a ROC curve.
double trapezoid_area(std::span<const RocPoint> curve);

} // namespace rstar::learn
