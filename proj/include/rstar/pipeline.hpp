#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rstar/corpus.hpp"
#include "rstar/features.hpp"
#include "rstar/learn/evaluation.hpp"
#include "rstar/topics.hpp"

namespace rstar::pipeline {

/// Raised for unreadable or invalid configuration (exit code 2).
class ConfigError : public Error {
public:
    using Error::Error;
};

enum class NetworkAggregation {
    Window,     ///< one graph over the whole feature window
    YearlyMean, ///< one graph per window year, metrics averaged over the years the author appears in
};

struct TextConfig {
    std::optional<std::filesystem::path> stoplist; ///< extra terms on top of the built-in English list
    int min_df = 2;
    double max_df_ratio = 0.95;
    int max_ngram = 2;
};

struct MlConfig {
    learn::Hyperparams hp;
    std::vector<learn::ModelKind> models{std::begin(learn::kAllModels), std::end(learn::kAllModels)};
    int smote_k = 5;
    std::size_t rfe_k = 8;
};

struct PipelineConfig {
    std::filesystem::path corpus_path;
    std::filesystem::path sjr_path;
    YearRange study_period{2000, 2019};
    corpus::CohortSpec cohort;
    /// First-publication years held out for the final test; empty means the last cohort year.
    std::set<int> test_years;
    corpus::TierOptions tiers;
    TextConfig text;
    topics::LdaParams lda; ///< seed is derived from the global seed
    features::FeatureOptions features;
    NetworkAggregation network = NetworkAggregation::Window;
    MlConfig ml;
    std::filesystem::path output_dir = "out";
    std::uint64_t seed = 42;
    unsigned threads = 1;
    bool cache = true;

    /// Throws ConfigError on inconsistent values; input files are checked by the stages.
    void validate() const;
    [[nodiscard]] std::set<int> effective_test_years() const;
};

/// Relative paths are resolved against `base_dir`. Unknown keys are rejected.
PipelineConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
PipelineConfig load_config(const std::filesystem::path& path);
nlohmann::ordered_json config_to_json(const PipelineConfig& cfg);
/// SHA-256 of the canonical config, leaving out settings that cannot change results
/// (threads, output directory, cache switch).
std::string config_hash(const PipelineConfig& cfg);

struct DistributionRow {
    int year = 0;
    std::size_t papers = 0;
    std::size_t authors = 0;
    double mean_authors_per_paper = 0.0;
};

/// One row per year that has papers, ascending. Throws on an empty corpus.
std::vector<DistributionRow> report_distributions(const corpus::Corpus& corpus);
std::string distributions_csv(std::span<const DistributionRow> rows);

enum class Stage { Ingest, Tier, Text, Topics, Network, Features, Label, Train, Evaluate, Report };
std::string_view to_string(Stage s) noexcept;

struct RunResult {
    int exit_code = 0;
    std::string failed_stage;
    std::string message;
    std::filesystem::path manifest;
    std::vector<std::string> files; ///< emitted files relative to the output directory
};

/// Runs every stage up to and including `last`, writing that prefix's artifacts and a manifest.
/// Stage failures give exit code 3 and are recorded in the manifest.
RunResult run_pipeline(const PipelineConfig& cfg, Stage last = Stage::Report);

} // namespace rstar::pipeline
