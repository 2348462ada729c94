#include "rstar/pipeline.hpp"

#include <algorithm>
#include <iostream>
#include <map>
#include <set>

#include "rstar/io.hpp"
#include "rstar/learn/analysis.hpp"
#include "rstar/network.hpp"
#include "rstar/parallel.hpp"
#include "rstar/rng.hpp"
#include "rstar/textprep.hpp"

namespace rstar::pipeline {

using nlohmann::json;
using nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Configuration

namespace {

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [key, _] : obj.items())
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ConfigError(where + ": unknown key '" + key + "'");
}

template <typename T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return;
    try {
        out = it->get<T>();
    } catch (const json::exception&) {
        throw ConfigError(where + "." + key + ": wrong type");
    }
}

YearRange read_range(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer())
        throw ConfigError(where + ": expected [first, last]");
    return {v[0].get<int>(), v[1].get<int>()};
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() || base.empty() ? path : base / path;
}

} // namespace

std::set<int> PipelineConfig::effective_test_years() const {
    if (!test_years.empty()) return test_years;
    return {cohort.first_pub_years.last};
}

void PipelineConfig::validate() const {
    if (corpus_path.empty()) throw ConfigError("inputs.corpus is required");
    if (sjr_path.empty()) throw ConfigError("inputs.sjr is required");
    if (study_period.empty()) throw ConfigError("study_period is empty");
    try {
        cohort.validate();
    } catch (const Error& e) {
        throw ConfigError(std::string("cohort: ") + e.what());
    }
    for (int y : effective_test_years())
        if (!cohort.first_pub_years.contains(y)) throw ConfigError("test_years must lie inside cohort.first_pub_years");
    if (effective_test_years().size() >= static_cast<std::size_t>(cohort.first_pub_years.length()) - 1)
        throw ConfigError("at least two cohort years must remain for training");
    if (text.min_df < 1) throw ConfigError("text.min_df must be at least 1");
    if (!(text.max_df_ratio > 0.0 && text.max_df_ratio <= 1.0)) throw ConfigError("text.max_df_ratio must lie in (0, 1]");
    if (text.max_ngram != 1 && text.max_ngram != 2) throw ConfigError("text.max_ngram must be 1 or 2");
    if (lda.topics < 1 || lda.iterations < 1 || lda.beta <= 0.0) throw ConfigError("lda: topics, iterations and beta must be positive");
    if (ml.models.empty()) throw ConfigError("ml.models is empty");
    if (ml.smote_k < 1) throw ConfigError("ml.smote_k must be at least 1");
    if (ml.rfe_k < 1 || ml.rfe_k > features::kNumFeatures) throw ConfigError("ml.rfe_k must lie in [1, 16]");
    if (!(ml.hp.threshold > 0.0 && ml.hp.threshold < 1.0)) throw ConfigError("ml.threshold must lie in (0, 1)");
    if (ml.hp.rf.trees < 1) throw ConfigError("ml.rf.trees must be positive");
    if (ml.hp.lr.epochs < 1 || ml.hp.svm.epochs < 1) throw ConfigError("ml epochs must be positive");
    if (threads < 1) throw ConfigError("threads must be at least 1");
}

PipelineConfig config_from_json(const json& j, const std::filesystem::path& base_dir) {
    PipelineConfig c;
    check_keys(j, {"inputs", "study_period", "cohort", "test_years", "tiers", "text", "lda", "features", "ml",
                   "output_dir", "seed", "threads", "cache"},
               "config");
    if (auto it = j.find("inputs"); it != j.end()) {
        check_keys(*it, {"corpus", "sjr", "stoplist"}, "inputs");
        std::string s;
        read(*it, "corpus", s, "inputs");
        if (!s.empty()) c.corpus_path = resolve(base_dir, s);
        s.clear();
        read(*it, "sjr", s, "inputs");
        if (!s.empty()) c.sjr_path = resolve(base_dir, s);
        s.clear();
        read(*it, "stoplist", s, "inputs");
        if (!s.empty()) c.text.stoplist = resolve(base_dir, s);
    }
    if (auto it = j.find("study_period"); it != j.end()) c.study_period = read_range(*it, "study_period");
    if (auto it = j.find("cohort"); it != j.end()) {
        check_keys(*it, {"first_pub_years", "min_collaborations", "feature_window_years", "label_window_years"}, "cohort");
        if (auto r = it->find("first_pub_years"); r != it->end()) c.cohort.first_pub_years = read_range(*r, "cohort.first_pub_years");
        read(*it, "min_collaborations", c.cohort.min_collaborations, "cohort");
        read(*it, "feature_window_years", c.cohort.feature_window_years, "cohort");
        read(*it, "label_window_years", c.cohort.label_window_years, "cohort");
    }
    if (auto it = j.find("test_years"); it != j.end() && !it->is_null()) {
        std::vector<int> years;
        read(j, "test_years", years, "config");
        c.test_years = {years.begin(), years.end()};
    }
    if (auto it = j.find("tiers"); it != j.end()) {
        check_keys(*it, {"sigma", "fallback_to_earlier_year"}, "tiers");
        std::string sigma = "population";
        read(*it, "sigma", sigma, "tiers");
        if (sigma == "population") c.tiers.sigma = corpus::SigmaKind::Population;
        else if (sigma == "sample") c.tiers.sigma = corpus::SigmaKind::Sample;
        else throw ConfigError("tiers.sigma must be 'population' or 'sample'");
        read(*it, "fallback_to_earlier_year", c.tiers.fallback_to_earlier_year, "tiers");
    }
    if (auto it = j.find("text"); it != j.end()) {
        check_keys(*it, {"min_df", "max_df_ratio", "max_ngram"}, "text");
        read(*it, "min_df", c.text.min_df, "text");
        read(*it, "max_df_ratio", c.text.max_df_ratio, "text");
        read(*it, "max_ngram", c.text.max_ngram, "text");
    }
    if (auto it = j.find("lda"); it != j.end()) {
        check_keys(*it, {"topics", "alpha", "beta", "iterations"}, "lda");
        read(*it, "topics", c.lda.topics, "lda");
        read(*it, "alpha", c.lda.alpha, "lda");
        read(*it, "beta", c.lda.beta, "lda");
        read(*it, "iterations", c.lda.iterations, "lda");
    }
    if (auto it = j.find("features"); it != j.end()) {
        check_keys(*it, {"diversity_normalization", "diversity_scope", "weighted_degree", "network_aggregation"}, "features");
        std::string s = "normalized";
        read(*it, "diversity_normalization", s, "features");
        if (s == "normalized") c.features.normalization = features::DiversityNormalization::Normalized;
        else if (s == "raw") c.features.normalization = features::DiversityNormalization::Raw;
        else throw ConfigError("features.diversity_normalization must be 'normalized' or 'raw'");
        s = "window";
        read(*it, "diversity_scope", s, "features");
        if (s == "window") c.features.scope = features::DiversityScope::Window;
        else if (s == "per_paper_mean") c.features.scope = features::DiversityScope::PerPaperMean;
        else throw ConfigError("features.diversity_scope must be 'window' or 'per_paper_mean'");
        s = "plain";
        read(*it, "weighted_degree", s, "features");
        if (s == "plain") c.features.weighted_degree = features::WeightedDegreeMode::Plain;
        else if (s == "normalized") c.features.weighted_degree = features::WeightedDegreeMode::Normalized;
        else throw ConfigError("features.weighted_degree must be 'plain' or 'normalized'");
        s = "window";
        read(*it, "network_aggregation", s, "features");
        if (s == "window") c.network = NetworkAggregation::Window;
        else if (s == "yearly_mean") c.network = NetworkAggregation::YearlyMean;
        else throw ConfigError("features.network_aggregation must be 'window' or 'yearly_mean'");
    }
    if (auto it = j.find("ml"); it != j.end()) {
        check_keys(*it, {"models", "smote_k", "rfe_k", "threshold", "lr", "svm", "gnb", "rf"}, "ml");
        if (auto m = it->find("models"); m != it->end()) {
            std::vector<std::string> names;
            read(*it, "models", names, "ml");
            c.ml.models.clear();
            for (const auto& n : names) {
                auto k = learn::parse_model_kind(n);
                if (!k) throw ConfigError("ml.models: unknown model '" + n + "'");
                c.ml.models.push_back(*k);
            }
        }
        read(*it, "smote_k", c.ml.smote_k, "ml");
        read(*it, "rfe_k", c.ml.rfe_k, "ml");
        read(*it, "threshold", c.ml.hp.threshold, "ml");
        if (auto s = it->find("lr"); s != it->end()) {
            check_keys(*s, {"learning_rate", "l2", "epochs", "tolerance"}, "ml.lr");
            read(*s, "learning_rate", c.ml.hp.lr.learning_rate, "ml.lr");
            read(*s, "l2", c.ml.hp.lr.l2, "ml.lr");
            read(*s, "epochs", c.ml.hp.lr.epochs, "ml.lr");
            read(*s, "tolerance", c.ml.hp.lr.tolerance, "ml.lr");
        }
        if (auto s = it->find("svm"); s != it->end()) {
            check_keys(*s, {"lambda", "epochs", "learning_rate"}, "ml.svm");
            read(*s, "lambda", c.ml.hp.svm.lambda, "ml.svm");
            read(*s, "epochs", c.ml.hp.svm.epochs, "ml.svm");
            read(*s, "learning_rate", c.ml.hp.svm.learning_rate, "ml.svm");
        }
        if (auto s = it->find("gnb"); s != it->end()) {
            check_keys(*s, {"var_floor"}, "ml.gnb");
            read(*s, "var_floor", c.ml.hp.gnb.var_floor, "ml.gnb");
        }
        if (auto s = it->find("rf"); s != it->end()) {
            check_keys(*s, {"trees", "max_features", "max_depth", "min_samples_split", "bootstrap"}, "ml.rf");
            read(*s, "trees", c.ml.hp.rf.trees, "ml.rf");
            read(*s, "max_features", c.ml.hp.rf.max_features, "ml.rf");
            read(*s, "max_depth", c.ml.hp.rf.max_depth, "ml.rf");
            read(*s, "min_samples_split", c.ml.hp.rf.min_samples_split, "ml.rf");
            read(*s, "bootstrap", c.ml.hp.rf.bootstrap, "ml.rf");
        }
    }
    std::string out;
    read(j, "output_dir", out, "config");
    if (!out.empty()) c.output_dir = resolve(base_dir, out);
    read(j, "seed", c.seed, "config");
    read(j, "threads", c.threads, "config");
    read(j, "cache", c.cache, "config");
    return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
    std::string content;
    try {
        content = io::read_file(path);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("cannot read config: ") + e.what());
    }
    json j;
    try {
        j = json::parse(content);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    auto cfg = config_from_json(j, path.parent_path());
    cfg.validate();
    return cfg;
}

ordered_json config_to_json(const PipelineConfig& c) {
    ordered_json j;
    j["inputs"] = {{"corpus", c.corpus_path.string()},
                   {"sjr", c.sjr_path.string()},
                   {"stoplist", c.text.stoplist ? ordered_json(c.text.stoplist->string()) : ordered_json(nullptr)}};
    j["study_period"] = {c.study_period.first, c.study_period.last};
    j["cohort"] = {{"first_pub_years", {c.cohort.first_pub_years.first, c.cohort.first_pub_years.last}},
                   {"min_collaborations", c.cohort.min_collaborations},
                   {"feature_window_years", c.cohort.feature_window_years},
                   {"label_window_years", c.cohort.label_window_years}};
    const auto test = c.effective_test_years();
    j["test_years"] = std::vector<int>(test.begin(), test.end());
    j["tiers"] = {{"sigma", c.tiers.sigma == corpus::SigmaKind::Population ? "population" : "sample"},
                  {"fallback_to_earlier_year", c.tiers.fallback_to_earlier_year}};
    j["text"] = {{"min_df", c.text.min_df}, {"max_df_ratio", c.text.max_df_ratio}, {"max_ngram", c.text.max_ngram}};
    j["lda"] = {{"topics", c.lda.topics}, {"alpha", c.lda.effective_alpha()}, {"beta", c.lda.beta}, {"iterations", c.lda.iterations}};
    j["features"] = {
        {"diversity_normalization", c.features.normalization == features::DiversityNormalization::Normalized ? "normalized" : "raw"},
        {"diversity_scope", c.features.scope == features::DiversityScope::Window ? "window" : "per_paper_mean"},
        {"weighted_degree", c.features.weighted_degree == features::WeightedDegreeMode::Plain ? "plain" : "normalized"},
        {"network_aggregation", c.network == NetworkAggregation::Window ? "window" : "yearly_mean"}};
    std::vector<std::string> models;
    for (auto m : c.ml.models) models.emplace_back(learn::to_string(m));
    const auto& hp = c.ml.hp;
    j["ml"] = {{"models", models},
               {"smote_k", c.ml.smote_k},
               {"rfe_k", c.ml.rfe_k},
               {"threshold", hp.threshold},
               {"lr", {{"learning_rate", hp.lr.learning_rate}, {"l2", hp.lr.l2}, {"epochs", hp.lr.epochs}, {"tolerance", hp.lr.tolerance}}},
               {"svm", {{"lambda", hp.svm.lambda}, {"epochs", hp.svm.epochs}, {"learning_rate", hp.svm.learning_rate}}},
               {"gnb", {{"var_floor", hp.gnb.var_floor}}},
               {"rf", {{"trees", hp.rf.trees}, {"max_features", hp.rf.max_features}, {"max_depth", hp.rf.max_depth},
                       {"min_samples_split", hp.rf.min_samples_split}, {"bootstrap", hp.rf.bootstrap}}}};
    j["output_dir"] = c.output_dir.string();
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    j["cache"] = c.cache;
    return j;
}

std::string config_hash(const PipelineConfig& cfg) {
    auto j = config_to_json(cfg);
    j.erase("output_dir");
    j.erase("threads");
    j.erase("cache");
    return io::sha256_hex(j.dump());
}

// ---------------------------------------------------------------------------
// Distribution report

std::vector<DistributionRow> report_distributions(const corpus::Corpus& corpus) {
    if (corpus.empty()) throw Error("report_distributions: corpus is empty");
    struct Acc {
        std::size_t papers = 0;
        std::size_t authorships = 0;
        std::set<std::string_view> authors;
    };
    std::map<int, Acc> by_year;
    for (const auto& r : corpus.records()) {
        auto& a = by_year[r.year];
        ++a.papers;
        a.authorships += r.authorships.size();
        for (const auto& au : r.authorships) a.authors.insert(au.author_id);
    }
    std::vector<DistributionRow> rows;
    for (const auto& [year, a] : by_year)
        rows.push_back({year, a.papers, a.authors.size(), static_cast<double>(a.authorships) / static_cast<double>(a.papers)});
    return rows;
}

std::string distributions_csv(std::span<const DistributionRow> rows) {
    std::string out = "year,papers,authors,mean_authors_per_paper\n";
    for (const auto& r : rows)
        out += std::to_string(r.year) + ',' + std::to_string(r.papers) + ',' + std::to_string(r.authors) + ',' +
               io::format_double(r.mean_authors_per_paper) + '\n';
    return out;
}

std::string_view to_string(Stage s) noexcept {
    switch (s) {
    case Stage::Ingest: return "ingest";
    case Stage::Tier: return "tier";
    case Stage::Text: return "text";
    case Stage::Topics: return "topics";
    case Stage::Network: return "network";
    case Stage::Features: return "features";
    case Stage::Label: return "label";
    case Stage::Train: return "train";
    case Stage::Evaluate: return "evaluate";
    case Stage::Report: return "report";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Run

namespace {

// The spec module each stage belongs to, recorded next to a failure.
std::string_view module_of(Stage s) noexcept {
    switch (s) {
    case Stage::Ingest:
    case Stage::Tier: return "corpus";
    case Stage::Text: return "textprep";
    case Stage::Topics: return "topics";
    case Stage::Network: return "network";
    case Stage::Features:
    case Stage::Label: return "features";
    default: return "learn";
    }
}

class Runner {
public:
    explicit Runner(const PipelineConfig& cfg) : cfg_(cfg) {}

    RunResult run(Stage last) {
        RunResult result;
        const Stage order[] = {Stage::Ingest, Stage::Tier, Stage::Text, Stage::Topics, Stage::Network,
                               Stage::Features, Stage::Label, Stage::Train, Stage::Evaluate, Stage::Report};
        last_ = last;
        for (Stage s : order) {
            try {
                execute(s);
                completed_.emplace_back(to_string(s));
            } catch (const std::exception& e) {
                result.exit_code = 3;
                result.failed_stage = std::string(to_string(s));
                failed_module_ = std::string(module_of(s));
                result.message = e.what();
                break;
            }
            if (s == last) break;
        }
        result.files = files_;
        result.manifest = write_manifest(result);
        return result;
    }

private:
    const PipelineConfig& cfg_;
    Stage last_ = Stage::Report;
    std::string failed_module_;
    std::vector<std::string> completed_;
    std::vector<std::string> files_;
    std::vector<std::string> warnings_;

    corpus::Corpus corpus_;
    corpus::SjrTable sjr_;
    std::optional<corpus::VenueTiering> tiering_;
    std::vector<std::string> cohort_;
    text::DocTermMatrix dtm_;
    topics::LdaModel lda_;
    std::map<std::string, features::AuthorNetworkFeatures> network_;
    features::AssembledFeatures assembled_;
    learn::Dataset dataset_;
    learn::EvaluationReport evaluation_;

    [[nodiscard]] std::uint64_t lda_seed() const { return derive_seed(cfg_.seed, "lda"); }
    [[nodiscard]] std::uint64_t learn_seed() const { return derive_seed(cfg_.seed, "learn"); }

    void emit(const std::string& name, std::string_view content) {
        io::write_file(cfg_.output_dir / name, content);
        if (std::find(files_.begin(), files_.end(), name) == files_.end()) files_.push_back(name);
    }

    void execute(Stage s) {
        switch (s) {
        case Stage::Ingest: ingest(); break;
        case Stage::Tier: tier(); break;
        case Stage::Text: textprep(); break;
        case Stage::Topics: topics(); break;
        case Stage::Network: network(); break;
        case Stage::Features: assemble(); break;
        case Stage::Label: label(); break;
        case Stage::Train: build_dataset(); break;
        case Stage::Evaluate: evaluate(); break;
        case Stage::Report: report(); break;
        }
    }

    void ingest() {
        if (!std::filesystem::exists(cfg_.corpus_path)) throw Error("corpus file not found: " + cfg_.corpus_path.string());
        if (!std::filesystem::exists(cfg_.sjr_path)) throw Error("SJR table not found: " + cfg_.sjr_path.string());
        auto res = corpus::ingest(cfg_.corpus_path, corpus::InputFormat::JsonLines, cfg_.study_period);
        corpus_ = std::move(res.corpus);
        warnings_.insert(warnings_.end(), res.warnings.begin(), res.warnings.end());
        emit("rejects.jsonl", corpus::rejects_to_jsonl(res.rejects));
        if (!res.rejects.empty()) warnings_.push_back(std::to_string(res.rejects.size()) + " input records rejected");
        if (corpus_.empty()) throw Error("corpus is empty after ingest");
        sjr_ = corpus::SjrTable::load_csv(cfg_.sjr_path);
        cohort_ = corpus::select_cohort(corpus_, cfg_.cohort);
        if (cohort_.empty()) throw Error("no authors satisfy the cohort specification");
    }

    void tier() {
        tiering_.emplace(sjr_, cfg_.study_period, cfg_.tiers);
        warnings_.insert(warnings_.end(), tiering_->warnings().begin(), tiering_->warnings().end());
        if (last_ == Stage::Tier) {
            std::string out = "venue_id,year,tier\n";
            for (const auto& v : sjr_.venues())
                for (int y = cfg_.study_period.first; y <= cfg_.study_period.last; ++y)
                    out += io::csv_escape(v) + ',' + std::to_string(y) + ',' + std::string(corpus::to_string(tiering_->tier(v, y))) + '\n';
            emit("venue_tiers.csv", out);
        }
    }

    void textprep() {
        text::StopList stop = text::default_stoplist();
        if (cfg_.text.stoplist) {
            const auto extra = text::load_stoplist(*cfg_.text.stoplist);
            stop.insert(extra.begin(), extra.end());
        }
        const auto records = corpus_.records();
        std::vector<text::TokenizedDoc> docs(records.size());
        parallel_for(records.size(), cfg_.threads, [&](std::size_t i) {
            const auto& r = records[i];
            docs[i] = text::extract_ngrams(text::preprocess(r.title, r.abstract, stop, r.pub_id), cfg_.text.max_ngram);
        });
        dtm_ = text::build_dtm(docs, cfg_.text.min_df, cfg_.text.max_df_ratio);
        if (last_ == Stage::Text) {
            emit("dtm.csv", text::dtm_triplets_csv(dtm_));
            emit("vocabulary.txt", text::dtm_vocabulary(dtm_));
        }
    }

    void topics() {
        topics::LdaParams p = cfg_.lda;
        p.seed = lda_seed();
        const auto key = io::sha256_hex(text::dtm_triplets_csv(dtm_) + "|" + std::to_string(p.topics) + "|" +
                                        io::format_double(p.effective_alpha()) + "|" + io::format_double(p.beta) + "|" +
                                        std::to_string(p.iterations) + "|" + std::to_string(p.seed));
        const auto cache_file = cfg_.output_dir / "cache" / ("lda-" + key.substr(0, 32) + ".json");
        bool loaded = false;
        if (cfg_.cache && std::filesystem::exists(cache_file)) {
            try {
                lda_ = topics::model_from_json(io::read_file(cache_file));
                loaded = true;
            } catch (const std::exception&) {
                loaded = false; // unreadable cache entries are refitted
            }
        }
        if (!loaded) {
            lda_ = topics::fit_lda(dtm_, p);
            if (cfg_.cache) io::write_file(cache_file, topics::model_to_json(lda_));
        }
        lda_.rebuild_index();
        if (last_ == Stage::Topics) {
            emit("lda_model.json", topics::model_to_json(lda_));
            std::vector<topics::DisciplinaryProfile> profiles;
            const features::TopicProfiles tp(lda_, corpus_);
            for (const auto& id : cohort_) {
                const int f = corpus::first_pub_year(corpus_, id);
                if (auto prof = tp.profile(id, cfg_.cohort.feature_window(f))) profiles.push_back(*prof);
            }
            emit("topic_profiles.csv", topics::profiles_csv(profiles, lda_.topics));
        }
    }

    static features::AuthorNetworkFeatures from_metrics(const network::NodeMetrics& m) {
        return {m.degree, m.degree_centrality, m.weighted_degree, m.weighted_degree_normalized, m.clustering_coefficient,
                m.betweenness_centrality};
    }

    void network() {
        std::map<int, std::vector<std::string>> by_year;
        for (const auto& id : cohort_) by_year[corpus::first_pub_year(corpus_, id)].push_back(id);
        std::string metrics_out;
        for (const auto& [first, ids] : by_year) {
            const auto window = cfg_.cohort.feature_window(first);
            if (cfg_.network == NetworkAggregation::Window) {
                const auto g = network::build_graph(corpus_, window);
                const auto metrics = network::compute_metrics(g, cfg_.threads);
                std::map<std::string_view, const network::NodeMetrics*> index;
                for (const auto& m : metrics) index.emplace(m.author_id, &m);
                for (const auto& id : ids) {
                    auto it = index.find(id);
                    if (it == index.end()) throw Error("author " + id + " is missing from the " + std::to_string(first) + " window graph");
                    network_[id] = from_metrics(*it->second);
                }
                if (last_ == Stage::Network) emit("network_" + std::to_string(first) + "_edges.csv", network::edges_csv(g));
            } else {
                std::map<std::string, std::pair<features::AuthorNetworkFeatures, int>> acc;
                for (int y = window.first; y <= window.last; ++y) {
                    const auto g = network::build_graph(corpus_, {y, y});
                    const auto metrics = network::compute_metrics(g, cfg_.threads);
                    std::map<std::string_view, const network::NodeMetrics*> index;
                    for (const auto& m : metrics) index.emplace(m.author_id, &m);
                    for (const auto& id : ids) {
                        auto it = index.find(id);
                        if (it == index.end()) continue;
                        auto& [sum, n] = acc[id];
                        const auto f = from_metrics(*it->second);
                        sum.degree += f.degree;
                        sum.degree_centrality += f.degree_centrality;
                        sum.weighted_degree += f.weighted_degree;
                        sum.weighted_degree_normalized += f.weighted_degree_normalized;
                        sum.clustering_coefficient += f.clustering_coefficient;
                        sum.betweenness += f.betweenness;
                        ++n;
                    }
                }
                for (const auto& id : ids) {
                    auto it = acc.find(id);
                    if (it == acc.end()) throw Error("author " + id + " appears in no yearly graph of the feature window");
                    auto [sum, n] = it->second;
                    const double k = n;
                    network_[id] = {static_cast<std::size_t>(std::llround(static_cast<double>(sum.degree) / k)),
                                    sum.degree_centrality / k, sum.weighted_degree / k, sum.weighted_degree_normalized / k,
                                    sum.clustering_coefficient / k, sum.betweenness / k};
                }
            }
        }
        if (last_ == Stage::Network) {
            std::string out = "author_id,degree_centrality,weighted_degree,weighted_degree_normalized,clustering_coefficient,betweenness\n";
            for (const auto& [id, f] : network_)
                out += io::csv_escape(id) + ',' + io::format_double(f.degree_centrality) + ',' + io::format_double(f.weighted_degree) +
                       ',' + io::format_double(f.weighted_degree_normalized) + ',' + io::format_double(f.clustering_coefficient) +
                       ',' + io::format_double(f.betweenness) + '\n';
            emit("network_metrics.csv", out);
        }
    }

    void assemble() {
        const features::TopicProfiles profiles(lda_, corpus_);
        features::AssemblyInputs in;
        in.corpus = &corpus_;
        in.spec = &cfg_.cohort;
        in.tiers = &*tiering_;
        in.profiles = &profiles;
        in.network = &network_;
        in.cohort = cohort_;
        const auto test = cfg_.effective_test_years();
        for (int y = cfg_.cohort.first_pub_years.first; y <= cfg_.cohort.first_pub_years.last; ++y)
            if (!test.contains(y)) in.label_reference_years.insert(y);
        in.options = cfg_.features;
        assembled_ = features::assemble_features(in);
        if (assembled_.threshold.degenerate) warnings_.push_back("growth rates have zero spread; nobody is labelled");
        emit("feature_matrix.csv", features::feature_matrix_csv(assembled_.vectors));
    }

    void label() { emit("labels.csv", features::label_report_csv(assembled_.vectors)); }

    void build_dataset() {
        dataset_ = learn::Dataset{};
        for (auto n : features::kFeatureNames) dataset_.feature_names.emplace_back(n);
        dataset_.features = Matrix(0, features::kNumFeatures);
        for (const auto& fv : assembled_.vectors) {
            const auto v = fv.values();
            dataset_.add_row(v, fv.label, fv.first_year, fv.author_id);
        }
        const auto test = cfg_.effective_test_years();
        const std::vector<int> test_years(test.begin(), test.end());
        if (dataset_.rows_in_years(test_years).size() == dataset_.size())
            throw Error("no training rows outside the test years");
    }

    void evaluate() {
        const auto plan = learn::expanding_window_folds(dataset_.years, cfg_.effective_test_years());
        learn::EvalOptions opt;
        opt.hp = cfg_.ml.hp;
        opt.smote_k = cfg_.ml.smote_k;
        opt.rfe_k = cfg_.ml.rfe_k;
        opt.models = cfg_.ml.models;
        opt.seed = learn_seed();
        opt.threads = cfg_.threads;
        evaluation_ = learn::evaluate(dataset_, plan, opt);
        if (evaluation_.skipped) warnings_.push_back("evaluation: " + *evaluation_.skipped);
        emit("evaluation.json", evaluation_.to_json().dump(2) + "\n");
    }

    void report() {
        const auto& vs = assembled_.vectors;
        std::vector<std::string> names(features::kFeatureNames.begin(), features::kFeatureNames.end());

        auto corr_names = names;
        corr_names.emplace_back("growth_rate");
        Matrix corr(0, corr_names.size());
        for (const auto& fv : vs) {
            const auto v = fv.values();
            std::vector<double> row(v.begin(), v.end());
            row.push_back(fv.growth);
            corr.append_row(row);
        }
        emit("correlation.csv", learn::correlation_csv(corr_names, learn::correlation_matrix(corr)));

        auto group_names = names;
        group_names.emplace_back("degree");
        group_names.emplace_back("growth_rate");
        Matrix group(0, group_names.size());
        std::vector<int> labels;
        for (const auto& fv : vs) {
            const auto v = fv.values();
            std::vector<double> row(v.begin(), v.end());
            row.push_back(static_cast<double>(fv.degree));
            row.push_back(fv.growth);
            group.append_row(row);
            labels.push_back(fv.label);
        }
        emit("group_comparison.csv", learn::group_comparison_csv(learn::group_comparison(group_names, group, labels)));
        emit("distributions.csv", distributions_csv(report_distributions(corpus_)));
    }

    std::filesystem::path write_manifest(const RunResult& r) {
        ordered_json m;
        m["status"] = r.exit_code == 0 ? "ok" : "failed";
        m["failed_stage"] = r.failed_stage.empty() ? ordered_json(nullptr) : ordered_json(r.failed_stage);
        m["failed_module"] = failed_module_.empty() ? ordered_json(nullptr) : ordered_json(failed_module_);
        m["error"] = r.message.empty() ? ordered_json(nullptr) : ordered_json(r.message);
        m["partial"] = r.exit_code != 0;
        m["config_hash"] = config_hash(cfg_);
        m["seeds"] = {{"global", cfg_.seed}, {"lda", lda_seed()}, {"learn", learn_seed()}};
        m["stages_completed"] = completed_;
        m["warnings"] = warnings_;
        auto& files = m["files"] = ordered_json::array();
        for (const auto& f : files_) {
            const auto path = cfg_.output_dir / f;
            files.push_back({{"path", f}, {"sha256", io::sha256_file(path)}, {"bytes", std::filesystem::file_size(path)}});
        }
        const auto path = cfg_.output_dir / "manifest.json";
        io::write_file(path, m.dump(2) + "\n");
        return path;
    }
};

} // namespace

RunResult run_pipeline(const PipelineConfig& cfg, Stage last) {
    try {
        cfg.validate();
    } catch (const ConfigError& e) {
        RunResult r;
        r.exit_code = 2;
        r.failed_stage = "config";
        r.message = e.what();
        return r;
    }
    return Runner(cfg).run(last);
}

} // namespace rstar::pipeline
