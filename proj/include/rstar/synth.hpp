#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rstar/corpus.hpp"

namespace rstar::synth {

/// Class-conditional location, spread and range of one generated quantity.
struct FeatureParams {
    double mean = 0.0;
    double sigma = 0.0;
    double min = 0.0;
    double max = 0.0;
};

struct ClassParams {
    FeatureParams articles;        ///< feature-window publications
    FeatureParams citations;       ///< citations summed over those publications
    FeatureParams degree;          ///< distinct co-authors
    FeatureParams weighted_degree; ///< co-authorship slots summed over publications
    FeatureParams growth;          ///< h-index growth rate
    double level_a = 0.0;          ///< mean count of A/B/C-tier articles; normalized into tier odds
    double level_b = 0.0;
    double level_c = 0.0;
};

/// Rising-star column of the paper's class comparison table.
ClassParams table1_rising();
/// Non-rising column of the same table.
ClassParams table1_non_rising();

struct SynthSpec {
    std::size_t cohort_size = 2000;
    double rising_fraction = 0.05;
    ClassParams rising = table1_rising();
    ClassParams non_rising = table1_non_rising();
    YearRange cohort_years{2006, 2010};
    YearRange study_period{2000, 2019};
    /// Cohort years whose growth rates set the label threshold (the pipeline's training years).
    /// Empty means every cohort year but the last.
    std::vector<int> label_reference_years;
    int feature_window_years = 5;
    int label_window_years = 10;
    std::size_t authors_per_lab = 25;
    std::size_t seniors_per_lab = 80;
    int topics = 8;
    int words_per_topic = 40;
    int title_words = 6;
    int abstract_words = 16;
    std::uint64_t seed = 1;

    /// Throws on an infeasible spec.
    void validate() const;
};

struct TruthRow {
    std::string author_id;
    int first_year = 0;
    int label = 0;
    int articles = 0;
    std::int64_t citations = 0;
    int degree = 0;
    int weighted_degree = 0;
    int h1 = 0;
    int h2 = 0;
};

struct SynthCorpus {
    std::vector<corpus::PublicationRecord> records;
    corpus::SjrTable sjr;
    std::vector<TruthRow> truth; ///< cohort authors, ascending id
    std::vector<std::string> warnings;
};

SynthCorpus synthesize_corpus(const SynthSpec& spec);

/// author_id,first_year,label,articles,citations,degree,weighted_degree,h1,h2
std::string truth_csv(const std::vector<TruthRow>& truth);

struct SynthPaths {
    std::filesystem::path corpus;
    std::filesystem::path sjr;
    std::filesystem::path truth;
};

/// Writes corpus.jsonl, sjr.csv and truth.csv into `dir`.
SynthPaths write_synth(const SynthCorpus& synth, const std::filesystem::path& dir);

} // namespace rstar::synth
