#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "rstar/learn/dataset.hpp"

namespace rstar::learn {

// ---------------------------------------------------------------------------
// Expanding-window cross-validation

struct Fold {
    std::vector<int> train_years;
    std::vector<int> validation_years;
};

struct FoldPlan {
    std::vector<Fold> folds;
    std::vector<int> test_years;
};

/// Non-test years w1..wm (ascending, distinct) give folds ({w1},{w2}), ({w1,w2},{w3}), ...,
/// ({w1..w(m-1)},{wm}). Throws with fewer than two non-test years or when a test year does not
/// come after every non-test year.
FoldPlan expanding_window_folds(std::span<const int> years, const std::set<int>& test_years);

/// True when every fold's validation years and the test years come strictly after its training years,
/// and test years never appear in any fold.
bool is_temporally_safe(const FoldPlan& plan);

// ---------------------------------------------------------------------------
// SMOTE

struct SmoteResult {
    Dataset data; ///< original rows first, synthetic rows appended
    std::size_t synthetic = 0;
    /// For each synthetic row, the two minority rows (indices into the input) it interpolates.
    std::vector<std::pair<std::size_t, std::size_t>> parents;
    std::vector<std::string> warnings;
};

/// Oversamples the minority class up to the majority count. Each synthetic point is
/// x + u (n - x) for a minority row x, one of its k nearest minority neighbours n and u ~ U[0, 1].
/// Neighbour distances are Euclidean on standardized columns. Throws when the minority class has
/// fewer than two rows or k < 1; k is clamped to minority - 1 with a warning.
SmoteResult smote(const Dataset& ds, int k, std::uint64_t seed);

} // namespace rstar::learn
