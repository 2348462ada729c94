#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rstar/learn/dataset.hpp"

namespace rstar::learn {

enum class ModelKind { LR, SVM, GNB, RF };
inline constexpr ModelKind kAllModels[] = {ModelKind::LR, ModelKind::SVM, ModelKind::GNB, ModelKind::RF};

std::string_view to_string(ModelKind kind) noexcept;
std::optional<ModelKind> parse_model_kind(std::string_view s) noexcept;

struct LogisticParams {
    double learning_rate = 0.1;
    double l2 = 1e-4;
    int epochs = 2000;
    /// Stop early once the largest gradient component falls below this value.
    double tolerance = 1e-7;
};

struct SvmParams {
    double lambda = 1e-3;
    int epochs = 2000;
    double learning_rate = 0.1; ///< step at epoch t is learning_rate / sqrt(t)
};

struct GnbParams {
    double var_floor = 1e-9;
};

struct ForestParams {
    int trees = 200;
    int max_features = 0; ///< 0 selects floor(sqrt(d))
    int max_depth = 0;    ///< 0 means unlimited
    int min_samples_split = 2;
    bool bootstrap = true;
};

struct Hyperparams {
    LogisticParams lr;
    SvmParams svm;
    GnbParams gnb;
    ForestParams rf;
    double threshold = 0.5; ///< probability cut for LR/GNB/RF; SVM uses margin >= 0
    unsigned threads = 1;
};

// ---------------------------------------------------------------------------
// Logistic regression on already-standardized inputs

struct LinearModel {
    std::vector<double> weights;
    double bias = 0.0;
};

/// Mean log-loss plus (l2 / 2) * ||w||^2; the bias is not penalized.
double logistic_objective(const Matrix& x, std::span<const int> y, const LinearModel& m, double l2);
/// Gradient of logistic_objective; returns (d/dw, d/db).
std::pair<std::vector<double>, double> logistic_gradient(const Matrix& x, std::span<const int> y,
                                                         const LinearModel& m, double l2);
LinearModel fit_logistic(const Matrix& x, std::span<const int> y, const LogisticParams& p);

/// (lambda / 2) ||w||^2 + mean hinge loss with labels mapped to -1/+1.
double svm_objective(const Matrix& x, std::span<const int> y, const LinearModel& m, double lambda);
/// Full-batch subgradient descent; returns the iterate with the lowest objective.
LinearModel fit_svm(const Matrix& x, std::span<const int> y, const SvmParams& p);

// ---------------------------------------------------------------------------

struct GaussianNb {
    double log_prior[2] = {0.0, 0.0};
    std::vector<double> mean[2];
    std::vector<double> var[2];
    std::size_t count[2] = {0, 0};

    [[nodiscard]] double predict_proba(std::span<const double> row) const;
};

GaussianNb fit_gnb(const Matrix& x, std::span<const int> y, const GnbParams& p);

// ---------------------------------------------------------------------------

struct TreeNode {
    int feature = -1; ///< -1 marks a leaf
    double threshold = 0.0; ///< rows with value <= threshold go left
    std::int32_t left = -1;
    std::int32_t right = -1;
    double value = 0.0; ///< fraction of class 1 in the node
};

struct DecisionTree {
    std::vector<TreeNode> nodes;
    [[nodiscard]] double predict(std::span<const double> row) const;
    [[nodiscard]] std::size_t depth() const;
};

struct RandomForest {
    std::vector<DecisionTree> trees;
    std::vector<double> importance; ///< mean impurity decrease, sums to 1

    [[nodiscard]] double predict_proba(std::span<const double> row) const;
};

/// Bootstrap + Gini trees; tree t uses a seed derived from (seed, t) so the forest is
/// identical for any thread count.
RandomForest fit_forest(const Matrix& x, std::span<const int> y, const ForestParams& p, std::uint64_t seed,
                        unsigned threads = 1);

// ---------------------------------------------------------------------------

class TrainedModel {
public:
    ModelKind kind = ModelKind::LR;
    std::vector<std::size_t> selected_features; ///< indices into the training dataset's columns
    std::uint64_t seed = 0;
    double threshold = 0.5;
    Standardizer scaler; ///< fitted for LR and SVM only
    std::variant<LinearModel, GaussianNb, RandomForest> params;

    /// Probability of class 1 for LR/GNB/RF, signed margin for SVM. `row` has the full width.
    [[nodiscard]] double score(std::span<const double> row) const;
    [[nodiscard]] std::vector<double> scores(const Matrix& x) const;
    [[nodiscard]] int predict(std::span<const double> row) const;
    [[nodiscard]] std::vector<int> predict_all(const Matrix& x) const;
    [[nodiscard]] bool has_probability() const noexcept { return kind != ModelKind::SVM; }
    /// Importance per selected feature, same order as selected_features.
    [[nodiscard]] std::vector<double> raw_importance() const;
};

/// Throws when the dataset lacks one of the classes. An empty feature list selects every column.
TrainedModel train(const Dataset& ds, ModelKind kind, const Hyperparams& hp, std::uint64_t seed,
                   std::span<const std::size_t> features = {});

struct RankedFeature {
    std::size_t index = 0; ///< column in the training dataset
    double importance = 0.0;
};

/// RF: normalized mean impurity decrease. LR/SVM: |standardized coefficient|.
/// GNB: |class-mean gap| / pooled sigma. Descending, ties by index.
std::vector<RankedFeature> feature_importance(const TrainedModel& model);

// ---------------------------------------------------------------------------

struct RfeResult {
    std::vector<std::size_t> selected;          ///< ascending
    std::vector<std::size_t> elimination_order; ///< first eliminated first
};

/// Recursive feature elimination: refit on the remaining columns and drop the least important
/// one until target_k remain.
RfeResult rfe(const Dataset& ds, ModelKind kind, std::size_t target_k, const Hyperparams& hp, std::uint64_t seed);

} // namespace rstar::learn
