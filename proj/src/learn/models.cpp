#include "rstar/learn/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rstar/parallel.hpp"
#include "rstar/rng.hpp"

namespace rstar::learn {

std::string_view to_string(ModelKind kind) noexcept {
    switch (kind) {
    case ModelKind::LR: return "LR";
    case ModelKind::SVM: return "SVM";
    case ModelKind::GNB: return "GNB";
    case ModelKind::RF: return "RF";
    }
    return "?";
}

std::optional<ModelKind> parse_model_kind(std::string_view s) noexcept {
    for (ModelKind k : kAllModels)
        if (to_string(k) == s) return k;
    return std::nullopt;
}

namespace {

double sigmoid(double z) noexcept {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double dot(std::span<const double> a, std::span<const double> b) noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void check_xy(const Matrix& x, std::span<const int> y, const char* what) {
    if (x.rows() != y.size()) throw Error(std::string(what) + ": row/label count mismatch");
    if (x.rows() == 0) throw Error(std::string(what) + ": empty training set");
}

} // namespace

// ---------------------------------------------------------------------------

double logistic_objective(const Matrix& x, std::span<const int> y, const LinearModel& m, double l2) {
    check_xy(x, y, "logistic_objective");
    double loss = 0.0;
    for (std::size_t r = 0; r < x.rows(); ++r) {
        const double z = dot(x.row(r), m.weights) + m.bias;
        // log(1 + e^z) - y z, evaluated stably
        const double softplus = z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
        loss += softplus - (y[r] == 1 ? z : 0.0);
    }
    loss /= static_cast<double>(x.rows());
    return loss + 0.5 * l2 * dot(m.weights, m.weights);
}

std::pair<std::vector<double>, double> logistic_gradient(const Matrix& x, std::span<const int> y,
                                                         const LinearModel& m, double l2) {
    check_xy(x, y, "logistic_gradient");
    const std::size_t d = x.cols();
    std::vector<double> gw(d, 0.0);
    double gb = 0.0;
    for (std::size_t r = 0; r < x.rows(); ++r) {
        const auto row = x.row(r);
        const double err = sigmoid(dot(row, m.weights) + m.bias) - (y[r] == 1 ? 1.0 : 0.0);
        for (std::size_t c = 0; c < d; ++c) gw[c] += err * row[c];
        gb += err;
    }
    const double n = static_cast<double>(x.rows());
    for (std::size_t c = 0; c < d; ++c) gw[c] = gw[c] / n + l2 * m.weights[c];
    return {std::move(gw), gb / n};
}

LinearModel fit_logistic(const Matrix& x, std::span<const int> y, const LogisticParams& p) {
    check_xy(x, y, "fit_logistic");
    LinearModel m{std::vector<double>(x.cols(), 0.0), 0.0};
    for (int epoch = 0; epoch < p.epochs; ++epoch) {
        auto [gw, gb] = logistic_gradient(x, y, m, p.l2);
        double largest = std::abs(gb);
        for (std::size_t c = 0; c < gw.size(); ++c) {
            m.weights[c] -= p.learning_rate * gw[c];
            largest = std::max(largest, std::abs(gw[c]));
        }
        m.bias -= p.learning_rate * gb;
        if (largest < p.tolerance) break;
    }
    return m;
}

double svm_objective(const Matrix& x, std::span<const int> y, const LinearModel& m, double lambda) {
    check_xy(x, y, "svm_objective");
    double hinge = 0.0;
    for (std::size_t r = 0; r < x.rows(); ++r) {
        const double t = y[r] == 1 ? 1.0 : -1.0;
        hinge += std::max(0.0, 1.0 - t * (dot(x.row(r), m.weights) + m.bias));
    }
    return 0.5 * lambda * dot(m.weights, m.weights) + hinge / static_cast<double>(x.rows());
}

LinearModel fit_svm(const Matrix& x, std::span<const int> y, const SvmParams& p) {
    check_xy(x, y, "fit_svm");
    const std::size_t d = x.cols();
    const double n = static_cast<double>(x.rows());
    LinearModel m{std::vector<double>(d, 0.0), 0.0};
    LinearModel best = m;
    double best_obj = svm_objective(x, y, m, p.lambda);
    std::vector<double> gw(d);
    for (int epoch = 1; epoch <= p.epochs; ++epoch) {
        for (std::size_t c = 0; c < d; ++c) gw[c] = p.lambda * m.weights[c];
        double gb = 0.0;
        for (std::size_t r = 0; r < x.rows(); ++r) {
            const auto row = x.row(r);
            const double t = y[r] == 1 ? 1.0 : -1.0;
            if (t * (dot(row, m.weights) + m.bias) < 1.0) {
                for (std::size_t c = 0; c < d; ++c) gw[c] -= t * row[c] / n;
                gb -= t / n;
            }
        }
        const double step = p.learning_rate / std::sqrt(static_cast<double>(epoch));
        for (std::size_t c = 0; c < d; ++c) m.weights[c] -= step * gw[c];
        m.bias -= step * gb;
        const double obj = svm_objective(x, y, m, p.lambda);
        if (obj < best_obj) {
            best_obj = obj;
            best = m;
        }
    }
    return best;
}

// ---------------------------------------------------------------------------

double GaussianNb::predict_proba(std::span<const double> row) const {
    double logp[2];
    for (int k = 0; k < 2; ++k) {
        double s = log_prior[k];
        for (std::size_t c = 0; c < row.size(); ++c) {
            const double diff = row[c] - mean[k][c];
            s -= 0.5 * (std::log(2.0 * M_PI * var[k][c]) + diff * diff / var[k][c]);
        }
        logp[k] = s;
    }
    // P(1) = 1 / (1 + exp(logp0 - logp1))
    return sigmoid(logp[1] - logp[0]);
}

GaussianNb fit_gnb(const Matrix& x, std::span<const int> y, const GnbParams& p) {
    check_xy(x, y, "fit_gnb");
    const std::size_t d = x.cols();
    GaussianNb m;
    for (int k = 0; k < 2; ++k) {
        m.mean[k].assign(d, 0.0);
        m.var[k].assign(d, 0.0);
    }
    for (std::size_t r = 0; r < x.rows(); ++r) {
        const int k = y[r] == 1 ? 1 : 0;
        ++m.count[k];
        for (std::size_t c = 0; c < d; ++c) m.mean[k][c] += x(r, c);
    }
    if (m.count[0] == 0 || m.count[1] == 0) throw Error("fit_gnb: both classes must be present");
    for (int k = 0; k < 2; ++k)
        for (auto& v : m.mean[k]) v /= static_cast<double>(m.count[k]);
    for (std::size_t r = 0; r < x.rows(); ++r) {
        const int k = y[r] == 1 ? 1 : 0;
        for (std::size_t c = 0; c < d; ++c) {
            const double diff = x(r, c) - m.mean[k][c];
            m.var[k][c] += diff * diff;
        }
    }
    const double total = static_cast<double>(x.rows());
    for (int k = 0; k < 2; ++k) {
        for (auto& v : m.var[k]) v = std::max(v / static_cast<double>(m.count[k]), p.var_floor);
        m.log_prior[k] = std::log(static_cast<double>(m.count[k]) / total);
    }
    return m;
}

// ---------------------------------------------------------------------------

double DecisionTree::predict(std::span<const double> row) const {
    std::size_t i = 0;
    while (nodes[i].feature >= 0) {
        const auto& n = nodes[i];
        i = static_cast<std::size_t>(row[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
    }
    return nodes[i].value;
}

std::size_t DecisionTree::depth() const {
    if (nodes.empty()) return 0;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
    std::size_t deepest = 0;
    while (!stack.empty()) {
        auto [i, dpt] = stack.back();
        stack.pop_back();
        deepest = std::max(deepest, dpt);
        if (nodes[i].feature >= 0) {
            stack.emplace_back(static_cast<std::size_t>(nodes[i].left), dpt + 1);
            stack.emplace_back(static_cast<std::size_t>(nodes[i].right), dpt + 1);
        }
    }
    return deepest;
}

double RandomForest::predict_proba(std::span<const double> row) const {
    if (trees.empty()) throw Error("RandomForest: no trees");
    double s = 0.0;
    for (const auto& t : trees) s += t.predict(row);
    return s / static_cast<double>(trees.size());
}

namespace {

// n * gini for a node with n rows of which n1 are positive.
inline double weighted_gini(double n, double n1) noexcept {
    if (n <= 0) return 0.0;
    const double n0 = n - n1;
    return n - (n1 * n1 + n0 * n0) / n;
}

// Each column is replaced by ranks into its sorted distinct values so that a node's split
// search can count instead of sort when the node is large.
struct RankedColumns {
    std::vector<std::vector<double>> values;         // distinct, ascending
    std::vector<std::vector<std::uint32_t>> codes;   // per row
    std::size_t max_distinct = 0;
};

RankedColumns rank_columns(const Matrix& x) {
    RankedColumns rc;
    rc.values.resize(x.cols());
    rc.codes.resize(x.cols());
    for (std::size_t c = 0; c < x.cols(); ++c) {
        auto& v = rc.values[c];
        v.reserve(x.rows());
        for (std::size_t r = 0; r < x.rows(); ++r) v.push_back(x(r, c));
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        auto& code = rc.codes[c];
        code.resize(x.rows());
        for (std::size_t r = 0; r < x.rows(); ++r)
            code[r] = static_cast<std::uint32_t>(std::lower_bound(v.begin(), v.end(), x(r, c)) - v.begin());
        rc.max_distinct = std::max(rc.max_distinct, v.size());
    }
    return rc;
}

struct TreeBuilder {
    const RankedColumns& columns;
    std::span<const int> y;
    const ForestParams& p;
    std::size_t mtry;
    Rng rng;
    std::vector<double> importance;
    std::vector<std::size_t> features;
    std::vector<std::uint32_t> count0, count1;      // indexed by code, kept zeroed between uses
    std::vector<std::uint64_t> sorted;              // code << 1 | label
    struct Bucket {
        std::uint32_t code, n, n1;
    };
    std::vector<Bucket> buckets;

    struct Split {
        int feature = -1;
        double threshold = 0.0;
        double score = std::numeric_limits<double>::infinity();
    };

    // Distinct codes present in the node with their class counts, ascending.
    void fill_buckets(std::span<const std::size_t> rows, const std::vector<std::uint32_t>& code, std::size_t distinct) {
        buckets.clear();
        if (rows.size() * 1024 >= distinct) {
            for (std::size_t r : rows) {
                if (y[r] == 1) ++count1[code[r]];
                else ++count0[code[r]];
            }
            for (std::uint32_t c = 0; c < distinct; ++c) {
                if (count0[c] + count1[c] == 0) continue;
                buckets.push_back({c, count0[c] + count1[c], count1[c]});
                count0[c] = count1[c] = 0;
            }
            return;
        }
        sorted.clear();
        for (std::size_t r : rows) sorted.push_back((static_cast<std::uint64_t>(code[r]) << 1) | (y[r] == 1 ? 1u : 0u));
        std::sort(sorted.begin(), sorted.end());
        for (std::uint64_t v : sorted) {
            const auto c = static_cast<std::uint32_t>(v >> 1);
            if (buckets.empty() || buckets.back().code != c) buckets.push_back({c, 0, 0});
            ++buckets.back().n;
            buckets.back().n1 += static_cast<std::uint32_t>(v & 1u);
        }
    }

    Split best_split(std::span<const std::size_t> rows, double total1) {
        const std::size_t d = columns.values.size();
        // Partial Fisher-Yates: the first k entries of `features` are a uniform random subset.
        std::iota(features.begin(), features.end(), 0);
        Split best;
        const double n = static_cast<double>(rows.size());
        for (std::size_t k = 0; k < d; ++k) {
            const std::size_t j = k + static_cast<std::size_t>(uniform_index(rng, d - k));
            std::swap(features[k], features[j]);
            // Past mtry, only keep looking while no usable split has turned up.
            if (k >= mtry && best.feature >= 0) break;
            const std::size_t f = features[k];
            const auto& values = columns.values[f];
            fill_buckets(rows, columns.codes[f], values.size());
            if (buckets.size() < 2) continue;
            double nl = 0.0, left1 = 0.0;
            for (std::size_t i = 0; i + 1 < buckets.size(); ++i) {
                nl += buckets[i].n;
                left1 += buckets[i].n1;
                const double score = weighted_gini(nl, left1) + weighted_gini(n - nl, total1 - left1);
                if (score < best.score) {
                    best.score = score;
                    best.feature = static_cast<int>(f);
                    const double a = values[buckets[i].code], b = values[buckets[i + 1].code];
                    double mid = a + (b - a) / 2.0;
                    if (!(mid < b)) mid = a;
                    best.threshold = mid;
                }
            }
        }
        return best;
    }

    DecisionTree build(std::vector<std::size_t>& sample) {
        DecisionTree tree;
        struct Task {
            std::size_t begin, end, depth;
            std::int32_t node;
        };
        tree.nodes.emplace_back();
        std::vector<Task> stack{{0, sample.size(), 0, 0}};
        while (!stack.empty()) {
            const Task t = stack.back();
            stack.pop_back();
            const std::span<std::size_t> rows(sample.data() + t.begin, t.end - t.begin);
            double n1 = 0.0;
            for (std::size_t r : rows) n1 += y[r];
            const double n = static_cast<double>(rows.size());
            tree.nodes[static_cast<std::size_t>(t.node)].value = n1 / n;
            const bool pure = n1 == 0.0 || n1 == n;
            const bool depth_cap = p.max_depth > 0 && t.depth >= static_cast<std::size_t>(p.max_depth);
            if (pure || depth_cap || rows.size() < static_cast<std::size_t>(std::max(2, p.min_samples_split))) continue;
            const double parent = weighted_gini(n, n1);
            const Split s = best_split(rows, n1);
            if (s.feature < 0) continue;
            const auto& col = columns.codes[static_cast<std::size_t>(s.feature)];
            const auto& vals = columns.values[static_cast<std::size_t>(s.feature)];
            // Split search ignores row order, so an unstable partition is fine.
            const auto mid = std::partition(rows.begin(), rows.end(),
                                                   [&](std::size_t r) { return vals[col[r]] <= s.threshold; });
            const std::size_t split_at = t.begin + static_cast<std::size_t>(mid - rows.begin());
            importance[static_cast<std::size_t>(s.feature)] += parent - s.score;
            const auto left = static_cast<std::int32_t>(tree.nodes.size());
            tree.nodes.emplace_back();
            tree.nodes.emplace_back();
            auto& node = tree.nodes[static_cast<std::size_t>(t.node)];
            node.feature = s.feature;
            node.threshold = s.threshold;
            node.left = left;
            node.right = left + 1;
            stack.push_back({split_at, t.end, t.depth + 1, left + 1});
            stack.push_back({t.begin, split_at, t.depth + 1, left});
        }
        return tree;
    }
};

} // namespace

RandomForest fit_forest(const Matrix& x, std::span<const int> y, const ForestParams& p, std::uint64_t seed,
                        unsigned threads) {
    check_xy(x, y, "fit_forest");
    if (p.trees < 1) throw Error("fit_forest: need at least one tree");
    const std::size_t d = x.cols();
    if (d == 0) throw Error("fit_forest: no features");
    const RankedColumns columns = rank_columns(x);
    std::size_t mtry = p.max_features > 0 ? static_cast<std::size_t>(p.max_features)
                                          : static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(d))));
    mtry = std::clamp<std::size_t>(mtry, 1, d);

    const auto trees = static_cast<std::size_t>(p.trees);
    RandomForest forest;
    forest.trees.resize(trees);
    std::vector<std::vector<double>> per_tree(trees);
    parallel_for(trees, threads, [&](std::size_t t) {
        TreeBuilder b{columns, y, p, mtry, Rng(derive_seed(seed, static_cast<std::uint64_t>(t))),
                      std::vector<double>(d, 0.0), std::vector<std::size_t>(d),
                      std::vector<std::uint32_t>(columns.max_distinct, 0), std::vector<std::uint32_t>(columns.max_distinct, 0),
                      {}, {}};
        b.sorted.reserve(x.rows());
        b.buckets.reserve(columns.max_distinct);
        std::vector<std::size_t> sample(x.rows());
        if (p.bootstrap)
            for (auto& s : sample) s = static_cast<std::size_t>(uniform_index(b.rng, x.rows()));
        else
            std::iota(sample.begin(), sample.end(), 0);
        forest.trees[t] = b.build(sample);
        per_tree[t] = std::move(b.importance);
    });
    // Per-tree importances are normalized, averaged, then renormalized.
    forest.importance.assign(d, 0.0);
    for (const auto& imp : per_tree) {
        const double total = std::accumulate(imp.begin(), imp.end(), 0.0);
        if (total <= 0) continue;
        for (std::size_t c = 0; c < d; ++c) forest.importance[c] += imp[c] / total;
    }
    const double total = std::accumulate(forest.importance.begin(), forest.importance.end(), 0.0);
    if (total > 0)
        for (auto& v : forest.importance) v /= total;
    return forest;
}

// ---------------------------------------------------------------------------

double TrainedModel::score(std::span<const double> row) const {
    std::vector<double> sel(selected_features.size());
    for (std::size_t i = 0; i < sel.size(); ++i) {
        const std::size_t f = selected_features[i];
        if (f >= row.size()) throw Error("TrainedModel::score: row is narrower than the training data");
        sel[i] = row[f];
    }
    switch (kind) {
    case ModelKind::LR:
    case ModelKind::SVM: {
        std::vector<double> z(sel.size());
        scaler.transform_row(sel, z);
        const auto& m = std::get<LinearModel>(params);
        const double margin = dot(z, m.weights) + m.bias;
        return kind == ModelKind::LR ? sigmoid(margin) : margin;
    }
    case ModelKind::GNB: return std::get<GaussianNb>(params).predict_proba(sel);
    case ModelKind::RF: return std::get<RandomForest>(params).predict_proba(sel);
    }
    return 0.0;
}

std::vector<double> TrainedModel::scores(const Matrix& x) const {
    std::vector<double> out(x.rows());
    for (std::size_t r = 0; r < x.rows(); ++r) out[r] = score(x.row(r));
    return out;
}

int TrainedModel::predict(std::span<const double> row) const {
    const double s = score(row);
    return (kind == ModelKind::SVM ? s >= 0.0 : s >= threshold) ? 1 : 0;
}

std::vector<int> TrainedModel::predict_all(const Matrix& x) const {
    std::vector<int> out(x.rows());
    for (std::size_t r = 0; r < x.rows(); ++r) out[r] = predict(x.row(r));
    return out;
}

std::vector<double> TrainedModel::raw_importance() const {
    const std::size_t d = selected_features.size();
    std::vector<double> out(d, 0.0);
    switch (kind) {
    case ModelKind::LR:
    case ModelKind::SVM: {
        const auto& m = std::get<LinearModel>(params);
        for (std::size_t c = 0; c < d; ++c) out[c] = std::abs(m.weights[c]);
        break;
    }
    case ModelKind::GNB: {
        const auto& m = std::get<GaussianNb>(params);
        const double n0 = static_cast<double>(m.count[0]), n1 = static_cast<double>(m.count[1]);
        for (std::size_t c = 0; c < d; ++c) {
            const double pooled = std::sqrt((n0 * m.var[0][c] + n1 * m.var[1][c]) / (n0 + n1));
            out[c] = std::abs(m.mean[1][c] - m.mean[0][c]) / pooled;
        }
        break;
    }
    case ModelKind::RF: out = std::get<RandomForest>(params).importance; break;
    }
    return out;
}

TrainedModel train(const Dataset& ds, ModelKind kind, const Hyperparams& hp, std::uint64_t seed,
                   std::span<const std::size_t> features) {
    ds.validate();
    const std::size_t pos = ds.count(1);
    if (pos == 0 || pos == ds.size())
        throw Error(std::string("train ") + std::string(to_string(kind)) + ": training data contains a single class");
    TrainedModel m;
    m.kind = kind;
    m.seed = seed;
    m.threshold = hp.threshold;
    if (features.empty()) {
        m.selected_features.resize(ds.dimensionality());
        std::iota(m.selected_features.begin(), m.selected_features.end(), 0);
    } else {
        m.selected_features.assign(features.begin(), features.end());
        for (std::size_t f : m.selected_features)
            if (f >= ds.dimensionality()) throw Error("train: feature index out of range");
    }
    const Dataset sub = ds.select_features(m.selected_features);
    switch (kind) {
    case ModelKind::LR:
        m.scaler = Standardizer(sub.features);
        m.params = fit_logistic(m.scaler.transform(sub.features), sub.labels, hp.lr);
        break;
    case ModelKind::SVM:
        m.scaler = Standardizer(sub.features);
        m.params = fit_svm(m.scaler.transform(sub.features), sub.labels, hp.svm);
        break;
    case ModelKind::GNB: m.params = fit_gnb(sub.features, sub.labels, hp.gnb); break;
    case ModelKind::RF: m.params = fit_forest(sub.features, sub.labels, hp.rf, seed, hp.threads); break;
    }
    return m;
}

std::vector<RankedFeature> feature_importance(const TrainedModel& model) {
    const auto raw = model.raw_importance();
    std::vector<RankedFeature> out;
    for (std::size_t i = 0; i < raw.size(); ++i) out.push_back({model.selected_features[i], raw[i]});
    std::stable_sort(out.begin(), out.end(), [](const RankedFeature& a, const RankedFeature& b) {
        if (a.importance != b.importance) return a.importance > b.importance;
        return a.index < b.index;
    });
    return out;
}

RfeResult rfe(const Dataset& ds, ModelKind kind, std::size_t target_k, const Hyperparams& hp, std::uint64_t seed) {
    const std::size_t d = ds.dimensionality();
    if (target_k < 1 || target_k > d) throw Error("rfe: target_k must lie in [1, " + std::to_string(d) + "]");
    RfeResult res;
    std::vector<std::size_t> remaining(d);
    std::iota(remaining.begin(), remaining.end(), 0);
    while (remaining.size() > target_k) {
        const TrainedModel m = train(ds, kind, hp, seed, remaining);
        const auto imp = m.raw_importance();
        // Lowest importance goes; among ties the higher column index goes first.
        std::size_t worst = 0;
        for (std::size_t i = 1; i < imp.size(); ++i)
            if (imp[i] <= imp[worst]) worst = i;
        res.elimination_order.push_back(remaining[worst]);
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(worst));
    }
    res.selected = remaining;
    return res;
}

} // namespace rstar::learn
