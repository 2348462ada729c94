#include "rstar/learn/evaluation.hpp"

#include <algorithm>
#include <cmath>

#include "rstar/parallel.hpp"
#include "rstar/rng.hpp"

namespace rstar::learn {

FoldData prepare_fold(const Dataset& ds, std::span<const int> train_years, std::span<const int> eval_years,
                      int smote_k, std::uint64_t seed) {
    FoldData fd;
    const auto train_rows = ds.rows_in_years(train_years);
    const auto eval_rows = ds.rows_in_years(eval_years);
    auto res = smote(ds.subset(train_rows), smote_k, seed);
    fd.train = std::move(res.data);
    fd.synthetic = res.synthetic;
    fd.warnings = std::move(res.warnings);
    fd.evaluation = ds.subset(eval_rows);
    return fd;
}

Scores score_predictions(const TrainedModel& model, const Dataset& eval) {
    Scores s;
    if (eval.size() == 0) return s;
    const auto scores = model.scores(eval.features);
    std::vector<int> predicted(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i)
        predicted[i] = (model.has_probability() ? scores[i] >= model.threshold : scores[i] >= 0.0) ? 1 : 0;
    const auto pos = eval.count(1);
    if (pos > 0 && pos < eval.size()) s.auc = auc(scores, eval.labels);
    const auto c = confusion(predicted, eval.labels);
    s.precision = precision(c);
    s.recall = recall(c);
    s.f1 = f1_score(predicted, eval.labels);
    return s;
}

const ModelReport* EvaluationReport::find(ModelKind kind) const {
    for (const auto& m : models)
        if (m.kind == kind) return &m;
    return nullptr;
}

namespace {

// SMOTE and every model need two rows of each class.
std::optional<std::string> untrainable(const Dataset& ds, std::span<const int> years) {
    const auto sub = ds.subset(ds.rows_in_years(years));
    const auto pos = sub.count(1), neg = sub.size() - pos;
    if (pos >= 2 && neg >= 2) return std::nullopt;
    std::string ys;
    for (int y : years) ys += (ys.empty() ? "" : ",") + std::to_string(y);
    return "training years " + ys + " hold " + std::to_string(pos) + " positive and " + std::to_string(neg) +
           " negative rows";
}

nlohmann::ordered_json opt(const std::optional<double>& v) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

nlohmann::ordered_json scores_json(const Scores& s) {
    nlohmann::ordered_json j;
    j["auc"] = opt(s.auc);
    j["f1"] = s.f1;
    j["precision"] = s.precision;
    j["recall"] = s.recall;
    return j;
}

} // namespace

nlohmann::ordered_json EvaluationReport::to_json() const {
    nlohmann::ordered_json j;
    j["feature_names"] = feature_names;
    j["test_years"] = test_years;
    j["warnings"] = warnings;
    j["skipped"] = skipped ? nlohmann::ordered_json(*skipped) : nlohmann::ordered_json(nullptr);
    auto& ms = j["models"] = nlohmann::ordered_json::array();
    for (const auto& m : models) {
        nlohmann::ordered_json mj;
        mj["model"] = std::string(to_string(m.kind));
        auto names = [&](const std::vector<std::size_t>& idx) {
            std::vector<std::string> out;
            for (auto i : idx) out.push_back(i < feature_names.size() ? feature_names[i] : std::to_string(i));
            return out;
        };
        mj["selected_features"] = names(m.selected);
        mj["elimination_order"] = names(m.elimination_order);
        mj["test"] = scores_json(m.test);
        mj["test"]["rows"] = m.test_rows;
        auto& folds = mj["folds"] = nlohmann::ordered_json::array();
        for (const auto& f : m.folds) {
            nlohmann::ordered_json fj;
            fj["train_years"] = f.train_years;
            fj["validation_years"] = f.validation_years;
            fj["train_rows"] = f.train_rows;
            fj["synthetic_rows"] = f.synthetic_rows;
            fj["validation_rows"] = f.validation_rows;
            fj["fitted"] = f.fitted;
            fj["scores"] = f.fitted ? scores_json(f.scores) : nlohmann::ordered_json(nullptr);
            folds.push_back(std::move(fj));
        }
        auto& roc = mj["roc"] = nlohmann::ordered_json::array();
        for (const auto& p : m.roc) {
            // The opening point has an infinite threshold, which JSON cannot hold.
            roc.push_back({{"fpr", p.fpr}, {"tpr", p.tpr},
                           {"threshold", std::isfinite(p.threshold) ? nlohmann::ordered_json(p.threshold)
                                                                    : nlohmann::ordered_json(nullptr)}});
        }
        auto& imp = mj["importance"] = nlohmann::ordered_json::array();
        for (const auto& r : m.importance)
            imp.push_back({{"feature", r.index < feature_names.size() ? feature_names[r.index] : std::to_string(r.index)},
                           {"importance", r.importance}});
        ms.push_back(std::move(mj));
    }
    return j;
}

EvaluationReport evaluate(const Dataset& ds, const FoldPlan& plan, const EvalOptions& options) {
    ds.validate();
    if (!is_temporally_safe(plan)) throw Error("evaluate: fold plan is not temporally safe");
    if (plan.folds.empty()) throw Error("evaluate: fold plan has no folds");
    std::vector<int> all_train = plan.folds.back().train_years;
    all_train.insert(all_train.end(), plan.folds.back().validation_years.begin(),
                     plan.folds.back().validation_years.end());

    EvaluationReport report;
    report.feature_names = ds.feature_names;
    report.test_years = plan.test_years;
    if (auto why = untrainable(ds, all_train)) {
        report.skipped = "no models fitted: " + *why;
        return report;
    }

    // Oversampled sets are shared by every model so they see identical rows.
    const FoldData full = prepare_fold(ds, all_train, plan.test_years, options.smote_k,
                                       derive_seed(options.seed, "smote/final"));
    report.warnings = full.warnings;
    std::vector<std::optional<FoldData>> folds;
    for (std::size_t f = 0; f < plan.folds.size(); ++f) {
        if (auto why = untrainable(ds, plan.folds[f].train_years)) {
            report.warnings.push_back("fold " + std::to_string(f) + " not fitted: " + *why);
            folds.emplace_back();
            continue;
        }
        folds.push_back(prepare_fold(ds, plan.folds[f].train_years, plan.folds[f].validation_years, options.smote_k,
                                     derive_seed(options.seed, "smote/fold" + std::to_string(f))));
        report.warnings.insert(report.warnings.end(), folds.back()->warnings.begin(), folds.back()->warnings.end());
    }

    Hyperparams hp = options.hp;
    hp.threads = 1;
    const std::size_t rfe_k = std::min(options.rfe_k, ds.dimensionality());
    report.models.resize(options.models.size());
    parallel_for(options.models.size(), options.threads, [&](std::size_t mi) {
        const ModelKind kind = options.models[mi];
        const std::uint64_t seed = derive_seed(options.seed, to_string(kind));
        ModelReport& mr = report.models[mi];
        mr.kind = kind;
        const auto sel = rfe(full.train, kind, rfe_k, hp, derive_seed(seed, "rfe"));
        mr.selected = sel.selected;
        mr.elimination_order = sel.elimination_order;
        for (std::size_t f = 0; f < folds.size(); ++f) {
            FoldScore fs;
            fs.train_years = plan.folds[f].train_years;
            fs.validation_years = plan.folds[f].validation_years;
            if (!folds[f]) {
                fs.fitted = false;
                fs.train_rows = ds.rows_in_years(fs.train_years).size();
                fs.validation_rows = ds.rows_in_years(fs.validation_years).size();
                mr.folds.push_back(std::move(fs));
                continue;
            }
            fs.train_rows = folds[f]->train.size();
            fs.synthetic_rows = folds[f]->synthetic;
            fs.validation_rows = folds[f]->evaluation.size();
            const auto m = train(folds[f]->train, kind, hp, derive_seed(seed, "fold" + std::to_string(f)), mr.selected);
            fs.scores = score_predictions(m, folds[f]->evaluation);
            mr.folds.push_back(std::move(fs));
        }
        const auto final_model = train(full.train, kind, hp, derive_seed(seed, "final"), mr.selected);
        mr.test_rows = full.evaluation.size();
        mr.test = score_predictions(final_model, full.evaluation);
        if (mr.test.auc) mr.roc = roc_curve(final_model.scores(full.evaluation.features), full.evaluation.labels);
        mr.importance = feature_importance(final_model);
    });
    return report;
}

} // namespace rstar::learn
