#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "rstar/learn/analysis.hpp"
#include "rstar/learn/evaluation.hpp"

using namespace rstar;
using namespace rstar::learn;

namespace {

Dataset make_dataset(const std::vector<std::vector<double>>& rows, const std::vector<int>& labels,
                     const std::vector<int>& years = {}) {
    Dataset ds;
    for (std::size_t i = 0; i < rows.size(); ++i)
        ds.add_row(rows[i], labels[i], years.empty() ? 0 : years[i], "r" + std::to_string(i));
    for (std::size_t c = 0; c < ds.dimensionality(); ++c) ds.feature_names.push_back("f" + std::to_string(c));
    return ds;
}

// One column equal to the label plus small noise, the rest pure noise.
Dataset planted(std::mt19937_64& rng, std::size_t n, std::size_t noise_cols, int signal_col = 0) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    for (std::size_t i = 0; i < n; ++i) {
        const int y = static_cast<int>(i % 2);
        std::vector<double> r;
        for (std::size_t c = 0; c <= noise_cols; ++c)
            r.push_back(static_cast<int>(c) == signal_col ? y + 0.05 * g(rng) : g(rng));
        rows.push_back(r);
        labels.push_back(y);
    }
    return make_dataset(rows, labels);
}

double accuracy(const TrainedModel& m, const Dataset& ds) {
    const auto p = m.predict_all(ds.features);
    std::size_t ok = 0;
    for (std::size_t i = 0; i < p.size(); ++i) ok += p[i] == ds.labels[i] ? 1 : 0;
    return static_cast<double>(ok) / static_cast<double>(p.size());
}

} // namespace

// ---------------------------------------------------------------------------
// metrics

TEST(F1, Examples) {
    const std::vector<int> y{1, 0, 1, 0};
    EXPECT_DOUBLE_EQ(f1_score(y, y), 1.0);
    const std::vector<int> pred{1, 1, 0, 0};
    const std::vector<int> truth{1, 0, 1, 0};
    EXPECT_DOUBLE_EQ(f1_score(pred, truth), 0.5);
    const std::vector<int> none{0, 0, 0, 0};
    EXPECT_DOUBLE_EQ(f1_score(none, truth), 0.0);
    const std::vector<int> short_one{1};
    EXPECT_THROW(f1_score(short_one, truth), Error);
}

TEST(Auc, Examples) {
    EXPECT_DOUBLE_EQ(auc(std::vector<double>{0.9, 0.8, 0.7, 0.1}, std::vector<int>{1, 1, 0, 0}), 1.0);
    EXPECT_DOUBLE_EQ(auc(std::vector<double>{0.3, 0.7}, std::vector<int>{1, 0}), 0.0);
    EXPECT_DOUBLE_EQ(auc(std::vector<double>{0.4, 0.4, 0.4}, std::vector<int>{1, 0, 1}), 0.5);
    EXPECT_THROW(auc(std::vector<double>{0.1, 0.2}, std::vector<int>{1, 1}), Error);
}

TEST(Auc, MatchesPairwiseOracleAndTrapezoid) {
    std::mt19937_64 rng(12);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = 2 + rng() % 60;
        std::vector<double> s(n);
        std::vector<int> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = static_cast<double>(rng() % 10) / 10.0; // coarse grid forces ties
            y[i] = static_cast<int>(rng() % 2);
        }
        y[0] = 0;
        y[1] = 1;
        const double a = auc(s, y);
        EXPECT_NEAR(a, oracle::pairwise_auc(s, y), 1e-12);
        const auto curve = roc_curve(s, y);
        EXPECT_NEAR(trapezoid_area(curve), a, 1e-12);
        for (std::size_t i = 1; i < curve.size(); ++i) EXPECT_GE(curve[i].fpr, curve[i - 1].fpr);
        EXPECT_DOUBLE_EQ(curve.front().fpr, 0.0);
        EXPECT_DOUBLE_EQ(curve.back().tpr, 1.0);
    }
}

TEST(Auc, InvariantUnderMonotoneTransform) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int rep = 0; rep < 30; ++rep) {
        std::vector<double> s(40), t(40);
        std::vector<int> y(40);
        for (std::size_t i = 0; i < 40; ++i) {
            s[i] = u(rng);
            t[i] = std::exp(3.0 * s[i]) + 1.0;
            y[i] = static_cast<int>(i % 3 == 0);
        }
        EXPECT_DOUBLE_EQ(auc(s, y), auc(t, y));
    }
}

TEST(Metrics, PermutationConsistent) {
    std::mt19937_64 rng(8);
    std::vector<double> s(30);
    std::vector<int> y(30), p(30);
    for (std::size_t i = 0; i < 30; ++i) {
        s[i] = static_cast<double>(rng() % 100);
        y[i] = static_cast<int>(i % 2);
        p[i] = static_cast<int>(rng() % 2);
    }
    std::vector<std::size_t> perm(30);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<double> s2;
    std::vector<int> y2, p2;
    for (auto i : perm) {
        s2.push_back(s[i]);
        y2.push_back(y[i]);
        p2.push_back(p[i]);
    }
    EXPECT_EQ(auc(s, y), auc(s2, y2));
    EXPECT_EQ(f1_score(p, y), f1_score(p2, y2));
}

// ---------------------------------------------------------------------------
// models

TEST(Gnb, HandPosterior) {
    const auto ds = make_dataset({{-1}, {-2}, {1}, {2}}, {0, 0, 1, 1});
    const auto m = train(ds, ModelKind::GNB, {}, 1);
    const std::vector<double> row{1.5};
    EXPECT_EQ(m.predict(row), 1);
    const auto& g = std::get<GaussianNb>(m.params);
    EXPECT_DOUBLE_EQ(g.mean[1][0], 1.5);
    EXPECT_DOUBLE_EQ(g.mean[0][0], -1.5);
    EXPECT_NEAR(g.var[1][0], 0.25, 1e-9);
    // equal priors and variances: posterior odds are exp(2 * 1.5 * 1.5 / 0.25)
    EXPECT_NEAR(m.score(row), 1.0 / (1.0 + std::exp(-18.0)), 1e-12);
}

TEST(Logistic, SeparableToyIsFit) {
    const auto ds = make_dataset({{0, 0}, {0, 1}, {1, 0}, {3, 3}, {3, 4}, {4, 3}}, {0, 0, 0, 1, 1, 1});
    EXPECT_DOUBLE_EQ(accuracy(train(ds, ModelKind::LR, {}, 1), ds), 1.0);
    EXPECT_DOUBLE_EQ(accuracy(train(ds, ModelKind::SVM, {}, 1), ds), 1.0);
}

TEST(Logistic, GradientMatchesFiniteDifferences) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int set = 0; set < 3; ++set) {
        Matrix x(30, 4);
        std::vector<int> y(30);
        for (std::size_t i = 0; i < 30; ++i) {
            for (std::size_t c = 0; c < 4; ++c) x(i, c) = g(rng);
            y[i] = static_cast<int>(rng() % 2);
        }
        for (int pt = 0; pt < 20; ++pt) {
            LinearModel m{{g(rng), g(rng), g(rng), g(rng)}, g(rng)};
            const auto [gw, gb] = logistic_gradient(x, y, m, 0.01);
            const double h = 1e-6;
            for (std::size_t c = 0; c <= 4; ++c) {
                auto plus = m, minus = m;
                double& p = c < 4 ? plus.weights[c] : plus.bias;
                double& q = c < 4 ? minus.weights[c] : minus.bias;
                p += h;
                q -= h;
                const double fd = (logistic_objective(x, y, plus, 0.01) - logistic_objective(x, y, minus, 0.01)) / (2 * h);
                const double an = c < 4 ? gw[c] : gb;
                EXPECT_LT(std::abs(fd - an) / std::max(1e-8, std::max(std::abs(fd), std::abs(an))), 1e-4);
            }
        }
    }
}

TEST(Forest, SingleTreeMemorizes) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    for (int i = 0; i < 60; ++i) {
        rows.push_back({u(rng), u(rng), u(rng)});
        labels.push_back(static_cast<int>(rng() % 2));
    }
    const auto ds = make_dataset(rows, labels);
    Hyperparams hp;
    hp.rf.trees = 1;
    hp.rf.bootstrap = false;
    hp.rf.max_features = 3;
    EXPECT_DOUBLE_EQ(accuracy(train(ds, ModelKind::RF, hp, 4), ds), 1.0);
}

TEST(Forest, ImportancesSumToOneAndThreadsAgree) {
    std::mt19937_64 rng(9);
    const auto ds = planted(rng, 80, 3);
    Hyperparams hp;
    hp.rf.trees = 30;
    const auto a = fit_forest(ds.features, ds.labels, hp.rf, 11, 1);
    const auto b = fit_forest(ds.features, ds.labels, hp.rf, 11, 3);
    EXPECT_NEAR(std::accumulate(a.importance.begin(), a.importance.end(), 0.0), 1.0, 1e-12);
    EXPECT_EQ(a.importance, b.importance);
    for (std::size_t r = 0; r < ds.size(); ++r) EXPECT_EQ(a.predict_proba(ds.features.row(r)), b.predict_proba(ds.features.row(r)));
}

TEST(Importance, PlantedSignalRanksFirstForEveryModel) {
    std::mt19937_64 rng(14);
    const auto ds = planted(rng, 100, 1, 1);
    Hyperparams hp;
    hp.rf.trees = 50;
    for (auto kind : kAllModels) {
        const auto ranked = feature_importance(train(ds, kind, hp, 3));
        ASSERT_EQ(ranked.size(), 2u);
        EXPECT_EQ(ranked[0].index, 1u) << to_string(kind);
    }
    const auto single = feature_importance(train(ds, ModelKind::LR, hp, 3, std::vector<std::size_t>{0}));
    ASSERT_EQ(single.size(), 1u);
    EXPECT_EQ(single[0].index, 0u);
}

TEST(Logistic, StandardizationMakesScaleIrrelevant) {
    std::mt19937_64 rng(21);
    const auto ds = planted(rng, 60, 2);
    auto scaled = ds;
    for (std::size_t r = 0; r < scaled.size(); ++r) {
        scaled.features(r, 1) = scaled.features(r, 1) * 1000.0 + 7.0;
    }
    const auto a = train(ds, ModelKind::LR, {}, 1).scores(ds.features);
    const auto b = train(scaled, ModelKind::LR, {}, 1).scores(scaled.features);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-9);
}

TEST(Train, SingleClassThrowsAndSeedIsDeterministic) {
    const auto one = make_dataset({{1}, {2}}, {1, 1});
    EXPECT_THROW(train(one, ModelKind::LR, {}, 1), Error);
    std::mt19937_64 rng(6);
    const auto ds = planted(rng, 50, 2);
    Hyperparams hp;
    hp.rf.trees = 20;
    EXPECT_EQ(train(ds, ModelKind::RF, hp, 5).scores(ds.features), train(ds, ModelKind::RF, hp, 5).scores(ds.features));
}

// ---------------------------------------------------------------------------
// resampling and folds

TEST(Smote, SegmentExample) {
    std::vector<std::vector<double>> rows{{0, 0}, {1, 1}};
    std::vector<int> labels{1, 1};
    for (int i = 0; i < 8; ++i) {
        rows.push_back({5.0 + i, -3.0 * i});
        labels.push_back(0);
    }
    const auto r = smote(make_dataset(rows, labels), 1, 3);
    EXPECT_EQ(r.synthetic, 6u);
    EXPECT_EQ(r.data.count(0), r.data.count(1));
    for (std::size_t i = rows.size(); i < r.data.size(); ++i) {
        EXPECT_DOUBLE_EQ(r.data.features(i, 0), r.data.features(i, 1));
        EXPECT_GE(r.data.features(i, 0), 0.0);
        EXPECT_LE(r.data.features(i, 0), 1.0);
    }
}

TEST(Smote, BalancedInputUnchanged) {
    const auto ds = make_dataset({{0}, {1}, {2}, {3}}, {0, 1, 0, 1});
    const auto r = smote(ds, 5, 1);
    EXPECT_EQ(r.synthetic, 0u);
    EXPECT_EQ(r.data.features, ds.features);
    EXPECT_EQ(r.data.labels, ds.labels);
}

TEST(Smote, CountsConvexAndBoundingBox) {
    std::mt19937_64 rng(30);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    for (int i = 0; i < 10; ++i) {
        rows.push_back({g(rng), g(rng), g(rng)});
        labels.push_back(0);
    }
    for (int i = 0; i < 3; ++i) {
        rows.push_back({g(rng) + 3, g(rng) * 5, g(rng)});
        labels.push_back(1);
    }
    const auto ds = make_dataset(rows, labels);
    const auto r = smote(ds, 5, 8);
    EXPECT_EQ(r.data.count(0), 10u);
    EXPECT_EQ(r.data.count(1), 10u);
    EXPECT_FALSE(r.warnings.empty()); // k clamped to 2
    for (std::size_t i = 0; i < ds.size(); ++i)
        for (std::size_t c = 0; c < 3; ++c) EXPECT_EQ(r.data.features(i, c), ds.features(i, c));
    for (std::size_t s = 0; s < r.synthetic; ++s) {
        const auto row = r.data.features.row(ds.size() + s);
        const auto [a, b] = r.parents[s];
        const auto xa = ds.features.row(a), xb = ds.features.row(b);
        // recover the interpolation weight by least squares and check the residual
        double num = 0, den = 0;
        for (std::size_t c = 0; c < 3; ++c) {
            num += (row[c] - xa[c]) * (xb[c] - xa[c]);
            den += (xb[c] - xa[c]) * (xb[c] - xa[c]);
        }
        const double lambda = den > 0 ? num / den : 0.0;
        EXPECT_GE(lambda, -1e-12);
        EXPECT_LE(lambda, 1.0 + 1e-12);
        for (std::size_t c = 0; c < 3; ++c) {
            EXPECT_LT(std::abs(xa[c] + lambda * (xb[c] - xa[c]) - row[c]), 1e-9);
            double lo = 1e300, hi = -1e300;
            for (std::size_t i = 10; i < 13; ++i) {
                lo = std::min(lo, ds.features(i, c));
                hi = std::max(hi, ds.features(i, c));
            }
            EXPECT_GE(row[c], lo - 1e-12);
            EXPECT_LE(row[c], hi + 1e-12);
        }
    }
}

TEST(Smote, Errors) {
    const auto ds = make_dataset({{0}, {1}, {2}}, {0, 0, 1});
    EXPECT_THROW(smote(ds, 5, 1), Error);
    const auto ok = make_dataset({{0}, {1}, {2}, {3}}, {0, 0, 0, 1});
    EXPECT_THROW(smote(make_dataset({{0}, {1}, {2}, {3}, {4}}, {0, 0, 0, 1, 1}), 0, 1), Error);
    EXPECT_THROW(smote(ok, 1, 1), Error);
}

TEST(Folds, FiveYearExample) {
    const std::vector<int> years{2006, 2007, 2008, 2009, 2010};
    const auto plan = expanding_window_folds(years, {2010});
    ASSERT_EQ(plan.folds.size(), 3u);
    EXPECT_EQ(plan.folds[0].train_years, (std::vector<int>{2006}));
    EXPECT_EQ(plan.folds[0].validation_years, (std::vector<int>{2007}));
    EXPECT_EQ(plan.folds[2].train_years, (std::vector<int>{2006, 2007, 2008}));
    EXPECT_EQ(plan.folds[2].validation_years, (std::vector<int>{2009}));
    EXPECT_EQ(plan.test_years, (std::vector<int>{2010}));
}

TEST(Folds, TwoNonTestYearsAndErrors) {
    const std::vector<int> three{2001, 2002, 2003};
    EXPECT_EQ(expanding_window_folds(three, {2003}).folds.size(), 1u);
    EXPECT_THROW(expanding_window_folds(three, {2002}), Error);
    const std::vector<int> two{2001, 2002};
    EXPECT_THROW(expanding_window_folds(two, {2002}), Error);
}

TEST(Folds, TemporallySafeForEveryRange) {
    for (int len = 3; len <= 10; ++len) {
        std::vector<int> years(static_cast<std::size_t>(len));
        std::iota(years.begin(), years.end(), 2000);
        for (int tests = 1; tests <= len - 2; ++tests) {
            std::set<int> test(years.end() - tests, years.end());
            const auto plan = expanding_window_folds(years, test);
            EXPECT_TRUE(is_temporally_safe(plan));
            EXPECT_EQ(plan.folds.size(), static_cast<std::size_t>(len - tests - 1));
            for (const auto& f : plan.folds)
                for (int v : f.validation_years)
                    for (int t : f.train_years) EXPECT_GT(v, t);
        }
    }
}

TEST(Rfe, NoiseEliminatedFirst) {
    std::mt19937_64 rng(17);
    const auto ds = planted(rng, 80, 1);
    const auto r = rfe(ds, ModelKind::LR, 1, {}, 2);
    EXPECT_EQ(r.selected, (std::vector<std::size_t>{0}));
    EXPECT_EQ(r.elimination_order, (std::vector<std::size_t>{1}));
}

TEST(Rfe, IdentityAndSingleSurvivor) {
    std::mt19937_64 rng(18);
    const auto ds = planted(rng, 60, 4);
    const auto all = rfe(ds, ModelKind::GNB, 5, {}, 1);
    EXPECT_EQ(all.selected, (std::vector<std::size_t>{0, 1, 2, 3, 4}));
    EXPECT_TRUE(all.elimination_order.empty());
    const auto one = rfe(ds, ModelKind::GNB, 1, {}, 1);
    EXPECT_EQ(one.selected.size(), 1u);
    EXPECT_EQ(one.elimination_order.size(), 4u);
    EXPECT_THROW(rfe(ds, ModelKind::GNB, 0, {}, 1), Error);
}

TEST(Evaluate, SyntheticRowsStayInTraining) {
    std::mt19937_64 rng(40);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<std::vector<double>> rows;
    std::vector<int> labels, years;
    for (int y = 2006; y <= 2009; ++y)
        for (int i = 0; i < 30; ++i) {
            const int label = i < 6 ? 1 : 0;
            rows.push_back({label + g(rng), g(rng), g(rng)});
            labels.push_back(label);
            years.push_back(y);
        }
    const auto ds = make_dataset(rows, labels, years);
    const std::vector<int> train_years{2006, 2007}, eval_years{2008};
    const auto fd = prepare_fold(ds, train_years, eval_years, 5, 3);
    EXPECT_EQ(fd.evaluation.size(), 30u);
    EXPECT_GT(fd.synthetic, 0u);
    EXPECT_EQ(fd.train.count(0), fd.train.count(1));
    for (const auto& id : fd.evaluation.ids) EXPECT_EQ(std::count(ds.ids.begin(), ds.ids.end(), id), 1);

    EvalOptions opt;
    opt.hp.rf.trees = 20;
    opt.rfe_k = 2;
    opt.models = {ModelKind::LR, ModelKind::RF};
    const std::vector<int> all_years{2006, 2007, 2008, 2009};
    const auto report = evaluate(ds, expanding_window_folds(all_years, {2009}), opt);
    ASSERT_FALSE(report.skipped);
    ASSERT_EQ(report.models.size(), 2u);
    for (const auto& m : report.models) {
        EXPECT_EQ(m.test_rows, 30u);
        EXPECT_EQ(m.selected.size(), 2u);
        ASSERT_TRUE(m.test.auc);
        EXPECT_GE(*m.test.auc, 0.0);
        EXPECT_LE(*m.test.auc, 1.0);
        for (const auto& f : m.folds) EXPECT_EQ(f.validation_rows, 30u);
    }
    EXPECT_EQ(report.to_json().dump(), evaluate(ds, expanding_window_folds(all_years, {2009}), opt).to_json().dump());
}

TEST(Evaluate, NoPositivesIsSkipped) {
    std::vector<std::vector<double>> rows;
    std::vector<int> labels, years;
    for (int y = 2006; y <= 2008; ++y)
        for (int i = 0; i < 5; ++i) {
            rows.push_back({static_cast<double>(i)});
            labels.push_back(0);
            years.push_back(y);
        }
    const auto ds = make_dataset(rows, labels, years);
    const std::vector<int> all_years{2006, 2007, 2008};
    const auto report = evaluate(ds, expanding_window_folds(all_years, {2008}), EvalOptions{});
    ASSERT_TRUE(report.skipped);
    EXPECT_TRUE(report.models.empty());
    EXPECT_TRUE(report.to_json()["skipped"].is_string());
}

// ---------------------------------------------------------------------------
// analysis

TEST(Pearson, Examples) {
    const std::vector<double> x{1, 2, 3};
    EXPECT_NEAR(pearson(x, std::vector<double>{2, 4, 6}), 1.0, 1e-12);
    EXPECT_NEAR(pearson(x, std::vector<double>{-1, -2, -3}), -1.0, 1e-12);
    EXPECT_NEAR(pearson(x, std::vector<double>{1, 2, 4}), 3.0 / std::sqrt(2.0 * (14.0 / 3.0)), 1e-12);
    EXPECT_NEAR(pearson(x, std::vector<double>{1, 2, 4}), 0.982, 1e-3);
    EXPECT_THROW(pearson(x, std::vector<double>{5, 5, 5}), Error);
    EXPECT_THROW(pearson(std::vector<double>{1}, std::vector<double>{2}), Error);
}

TEST(Welch, Examples) {
    const std::vector<double> a{1, 2, 3}, b{2, 4, 6};
    const auto w = welch_t(a, b);
    EXPECT_NEAR(w.t, -2.0 / std::sqrt(5.0 / 3.0), 1e-12);
    EXPECT_NEAR(w.df, (25.0 / 9.0) / ((1.0 / 9.0) / 2.0 + (16.0 / 9.0) / 2.0), 1e-12);
    EXPECT_NEAR(w.t, -1.549, 1e-3);
    EXPECT_NEAR(w.df, 2.941, 1e-3);
    EXPECT_DOUBLE_EQ(welch_t(a, a).t, 0.0);
    const std::vector<double> shifted{4, 5, 6};
    EXPECT_GT(welch_t(shifted, a).t, 0.0);
    EXPECT_LT(welch_t(a, shifted).t, 0.0);
    EXPECT_THROW(welch_t(std::vector<double>{1}, a), Error);
}

TEST(Analysis, PermutationConsistent) {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> x(25), y(25);
    for (std::size_t i = 0; i < 25; ++i) {
        x[i] = g(rng);
        y[i] = x[i] + g(rng);
    }
    auto px = x, py = y;
    std::vector<std::size_t> perm(25);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t i = 0; i < 25; ++i) {
        px[i] = x[perm[i]];
        py[i] = y[perm[i]];
    }
    EXPECT_NEAR(pearson(x, y), pearson(px, py), 1e-12);
    EXPECT_NEAR(welch_t(x, y).t, welch_t(px, py).t, 1e-12);
}

TEST(Modes, DiscreteAndHistogram) {
    EXPECT_DOUBLE_EQ(discrete_mode(std::vector<double>{1, 1, 3}), 1.0);
    EXPECT_DOUBLE_EQ(discrete_mode(std::vector<double>{3, 1}), 1.0);
    EXPECT_DOUBLE_EQ(histogram_mode(std::vector<double>{2.5, 2.5, 2.5}), 2.5);
    const std::vector<double> sorted{1, 2, 3, 4};
    EXPECT_DOUBLE_EQ(quantile_sorted(sorted, 0.5), 2.5);
}

TEST(GroupComparison, ConstantFeatureAndModes) {
    Matrix m(6, 2);
    const double ints[6] = {1, 1, 3, 2, 2, 7};
    for (std::size_t r = 0; r < 6; ++r) {
        m(r, 0) = 4.0;
        m(r, 1) = ints[r];
    }
    const std::vector<std::string> names{"const", "count"};
    const std::vector<int> labels{1, 1, 1, 0, 0, 0};
    const auto rows = group_comparison(names, m, labels);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_DOUBLE_EQ(rows[0].cls[1].sigma, 0.0);
    EXPECT_DOUBLE_EQ(rows[0].cls[1].min, rows[0].cls[1].max);
    EXPECT_DOUBLE_EQ(rows[1].cls[1].mode, 1.0);
    EXPECT_DOUBLE_EQ(rows[1].cls[0].mode, 2.0);
    EXPECT_EQ(rows[1].cls[1].n, 3u);
    const auto csv = group_comparison_csv(rows);
    EXPECT_EQ(csv.rfind("feature,class,n,mode,mean,sigma,min,max,t,df\n", 0), 0u);
}

TEST(GroupComparison, EmptyClassWrittenAsNa) {
    Matrix m(3, 1);
    for (std::size_t r = 0; r < 3; ++r) m(r, 0) = static_cast<double>(r);
    const std::vector<std::string> names{"x"};
    const std::vector<int> labels{0, 0, 0};
    const auto rows = group_comparison(names, m, labels);
    EXPECT_EQ(rows[0].cls[1].n, 0u);
    EXPECT_NE(group_comparison_csv(rows).find("NA"), std::string::npos);
    EXPECT_THROW(group_comparison(names, Matrix(0, 1), std::vector<int>{}), Error);
}

TEST(Correlation, UndefinedCellsAreNa) {
    Matrix m(4, 2);
    for (std::size_t r = 0; r < 4; ++r) {
        m(r, 0) = static_cast<double>(r);
        m(r, 1) = 1.0;
    }
    const auto c = correlation_matrix(m);
    ASSERT_TRUE(c[0][0]);
    EXPECT_NEAR(*c[0][0], 1.0, 1e-12);
    EXPECT_FALSE(c[0][1]);
    const std::vector<std::string> names{"a", "b"};
    EXPECT_NE(correlation_csv(names, c).find("NA"), std::string::npos);
}
