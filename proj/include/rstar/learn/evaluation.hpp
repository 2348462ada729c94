#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rstar/learn/dataset.hpp"
#include "rstar/learn/metrics.hpp"
#include "rstar/learn/models.hpp"
#include "rstar/learn/resample.hpp"

namespace rstar::learn {

struct EvalOptions {
    Hyperparams hp;
    int smote_k = 5;
    std::size_t rfe_k = 8;
    std::vector<ModelKind> models{std::begin(kAllModels), std::end(kAllModels)};
    std::uint64_t seed = 0;
    /// Models are evaluated concurrently; each fit inside is sequential.
    unsigned threads = 1;
};

/// Training rows are oversampled with SMOTE; evaluation rows are left untouched.
struct FoldData {
    Dataset train;
    Dataset evaluation;
    std::size_t synthetic = 0;
    std::vector<std::string> warnings;
};

FoldData prepare_fold(const Dataset& ds, std::span<const int> train_years, std::span<const int> eval_years,
                      int smote_k, std::uint64_t seed);

struct Scores {
    std::optional<double> auc; ///< absent when the evaluation rows hold a single class
    double f1 = 0.0;
    double precision = 0.0;
    double recall = 0.0;
};

Scores score_predictions(const TrainedModel& model, const Dataset& eval);

struct FoldScore {
    std::vector<int> train_years;
    std::vector<int> validation_years;
    std::size_t train_rows = 0;
    std::size_t synthetic_rows = 0;
    std::size_t validation_rows = 0;
    bool fitted = true; ///< false when the training years hold fewer than two rows of a class
    Scores scores;
};

struct ModelReport {
    ModelKind kind = ModelKind::LR;
    std::vector<std::size_t> selected;
    std::vector<std::size_t> elimination_order;
    std::vector<FoldScore> folds;
    std::size_t test_rows = 0;
    Scores test;
    std::vector<RocPoint> roc;
    std::vector<RankedFeature> importance;
};

struct EvaluationReport {
    std::vector<std::string> feature_names;
    std::vector<int> test_years;
    std::vector<ModelReport> models;
    std::vector<std::string> warnings;
    /// Set when the non-test rows cannot support training; `models` is then empty.
    std::optional<std::string> skipped;

    [[nodiscard]] const ModelReport* find(ModelKind kind) const;
    [[nodiscard]] nlohmann::ordered_json to_json() const;
};

/// For each model: RFE on the oversampled non-test rows, then per-fold validation scores and a
/// final fit on every non-test row scored on the test years. Training sets with fewer than two
/// rows of either class are not fitted: such folds are flagged, and if the full non-test set is
/// affected the report is marked skipped.
EvaluationReport evaluate(const Dataset& ds, const FoldPlan& plan, const EvalOptions& options);

} // namespace rstar::learn
