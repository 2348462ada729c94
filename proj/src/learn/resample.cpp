#include "rstar/learn/resample.hpp"

#include <algorithm>
#include <numeric>

#include "rstar/rng.hpp"

namespace rstar::learn {

FoldPlan expanding_window_folds(std::span<const int> years, const std::set<int>& test_years) {
    std::set<int> distinct(years.begin(), years.end());
    std::vector<int> train;
    for (int y : distinct)
        if (!test_years.contains(y)) train.push_back(y);
    if (train.size() < 2) throw Error("expanding_window_folds: need at least two non-test years");
    for (int t : test_years)
        if (t <= train.back())
            throw Error("expanding_window_folds: test year " + std::to_string(t) + " lies inside the training range");
    FoldPlan plan;
    plan.test_years.assign(test_years.begin(), test_years.end());
    for (std::size_t v = 1; v < train.size(); ++v)
        plan.folds.push_back({std::vector<int>(train.begin(), train.begin() + static_cast<std::ptrdiff_t>(v)), {train[v]}});
    return plan;
}

bool is_temporally_safe(const FoldPlan& plan) {
    const std::set<int> test(plan.test_years.begin(), plan.test_years.end());
    const std::vector<int>* previous = nullptr;
    for (const auto& fold : plan.folds) {
        if (fold.train_years.empty() || fold.validation_years.empty()) return false;
        const int max_train = *std::max_element(fold.train_years.begin(), fold.train_years.end());
        for (int v : fold.validation_years)
            if (v <= max_train || test.contains(v)) return false;
        for (int t : plan.test_years)
            if (t <= max_train) return false;
        for (int y : fold.train_years)
            if (test.contains(y)) return false;
        // Training sets grow by nesting.
        if (previous) {
            if (previous->size() >= fold.train_years.size()) return false;
            if (!std::equal(previous->begin(), previous->end(), fold.train_years.begin())) return false;
        }
        previous = &fold.train_years;
    }
    return true;
}

SmoteResult smote(const Dataset& ds, int k, std::uint64_t seed) {
    ds.validate();
    if (k < 1) throw Error("smote: k must be at least 1");
    const std::size_t pos = ds.count(1);
    const std::size_t neg = ds.size() - pos;
    const int minority_label = pos <= neg ? 1 : 0;
    const std::size_t minority_n = std::min(pos, neg);
    const std::size_t majority_n = std::max(pos, neg);

    SmoteResult out;
    out.data = ds;
    out.data.years.resize(ds.size(), 0);
    out.data.ids.resize(ds.size());
    if (minority_n == majority_n) return out;
    if (minority_n < 2) throw Error("smote: minority class needs at least two rows");
    if (static_cast<std::size_t>(k) >= minority_n) {
        out.warnings.push_back("smote: k=" + std::to_string(k) + " clamped to " + std::to_string(minority_n - 1));
        k = static_cast<int>(minority_n - 1);
    }

    std::vector<std::size_t> minority;
    for (std::size_t r = 0; r < ds.size(); ++r)
        if (ds.labels[r] == minority_label) minority.push_back(r);

    const Standardizer scaler(ds.features);
    const Matrix z = scaler.transform(ds.features);
    const std::size_t d = ds.dimensionality();

    // k nearest minority neighbours of each minority row; ties broken by row order.
    std::vector<std::vector<std::size_t>> neighbours(minority.size());
    std::vector<std::pair<double, std::size_t>> dist;
    for (std::size_t i = 0; i < minority.size(); ++i) {
        dist.clear();
        for (std::size_t j = 0; j < minority.size(); ++j) {
            if (i == j) continue;
            double s = 0.0;
            for (std::size_t c = 0; c < d; ++c) {
                const double diff = z(minority[i], c) - z(minority[j], c);
                s += diff * diff;
            }
            dist.emplace_back(s, j);
        }
        std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
        for (int n = 0; n < k; ++n) neighbours[i].push_back(dist[static_cast<std::size_t>(n)].second);
    }

    Rng rng(seed);
    const std::size_t needed = majority_n - minority_n;
    std::vector<double> point(d);
    for (std::size_t s = 0; s < needed; ++s) {
        // Cycle through minority rows so every row seeds a near-equal share.
        const std::size_t i = s % minority.size();
        const std::size_t nn = neighbours[i][uniform_index(rng, static_cast<std::uint64_t>(k))];
        const double u = uniform01(rng);
        const auto x = ds.features.row(minority[i]);
        const auto y = ds.features.row(minority[nn]);
        for (std::size_t c = 0; c < d; ++c) point[c] = x[c] + u * (y[c] - x[c]);
        out.data.add_row(point, minority_label, out.data.years[minority[i]], "smote");
        out.parents.emplace_back(minority[i], minority[nn]);
    }
    out.synthetic = needed;
    return out;
}

} // namespace rstar::learn
