#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rstar/corpus.hpp"
#include "rstar/topics.hpp"

namespace rstar::features {

// ---------------------------------------------------------------------------
// Diversity

enum class DiversityNormalization {
    Normalized, ///< -sum p ln p / ln C, in [0, 1]
    Raw,        ///< -sum p ln p in nats
};

enum class DiversityScope {
    Window,       ///< one entropy over the distinct collaborators of the whole feature window
    PerPaperMean, ///< entropy per publication's author team, averaged over publications
};

/// Entropy of the category proportions in `counts` (zero counts ignored).
/// Throws when every count is zero, num_categories < 1, or more categories are observed than allowed.
double shannon_from_counts(std::span<const std::size_t> counts, int num_categories,
                           DiversityNormalization mode = DiversityNormalization::Normalized);

/// Shannon diversity of a list of categorical values.
template <typename T>
double shannon_diversity(std::span<const T> values, int num_categories,
                         DiversityNormalization mode = DiversityNormalization::Normalized) {
    if (values.empty()) throw Error("shannon_diversity: empty value list");
    std::map<T, std::size_t> tally;
    for (const auto& v : values) ++tally[v];
    std::vector<std::size_t> counts;
    counts.reserve(tally.size());
    for (const auto& [_, c] : tally) counts.push_back(c);
    return shannon_from_counts(counts, num_categories, mode);
}

/// Entropy of a probability vector, divided by ln(size) when normalized; 0 for a single category.
double distribution_entropy(std::span<const double> distribution,
                            DiversityNormalization mode = DiversityNormalization::Normalized);

struct PersonAttributes {
    std::string author_id;
    corpus::Gender gender = corpus::Gender::Unknown;
    corpus::Ethnicity ethnicity = corpus::Ethnicity::Unknown;
    corpus::AgeGroup age_group = corpus::AgeGroup::G1;
    std::string country{corpus::kUnknownCountry};
    std::optional<std::size_t> dominant_topic; ///< unused for the focal author
};

struct DiversityInputs {
    PersonAttributes focal;
    std::vector<PersonAttributes> collaborators; ///< distinct, focal excluded
    std::vector<double> own_topics;              ///< focal disciplinary profile
    int topics = 8;
    /// Distinct countries in the corpus; capped at 200.
    int country_categories = 200;
};

struct Diversities {
    double indiv_disc = 0.0;
    double group_disc = 0.0;
    double ethnic = 0.0;
    double gender = 0.0;
    double affiliation = 0.0;
    double age = 0.0;
};

inline constexpr int kMaxCountryCategories = 200;

/// Ethnic, gender, affiliation and age diversity over focal + collaborators; group disciplinary
/// diversity over the collaborators' dominant topics; individual disciplinary diversity from the
/// focal profile. With no collaborators every group diversity is 0.
Diversities compute_diversities(const DiversityInputs& inputs,
                                DiversityNormalization mode = DiversityNormalization::Normalized);

// ---------------------------------------------------------------------------
// Performance and label

/// Largest h such that h entries are >= h. Throws on a negative count.
int h_index(std::span<const std::int64_t> citation_counts);

struct CareerSnapshot {
    std::string author_id;
    int h1 = 0;
    int h2 = 0;
    int t1 = 5;
    int t2 = 10;
};

/// (h2 - h1) / (t2 - t1). Throws when t2 <= t1.
double growth_rate(const CareerSnapshot& s);

struct LabelThreshold {
    double mean = 0.0;
    double sigma = 0.0; ///< population
    double threshold = 0.0;
    bool degenerate = false; ///< sigma == 0: nobody is labelled
};

/// mean + 3 sigma over the reference rates. Throws for fewer than two rates.
LabelThreshold rising_star_threshold(std::span<const double> reference_rates);
int apply_label(const LabelThreshold& t, double rate) noexcept;

/// Label 1 iff rate >= mean + 3 sigma of all rates; no stars when sigma == 0.
std::map<std::string, int> label_rising_stars(const std::map<std::string, double>& rates);

// ---------------------------------------------------------------------------
// Feature assembly

inline constexpr std::size_t kNumFeatures = 16;
inline constexpr std::array<std::string_view, kNumFeatures> kFeatureNames{
    "articles",       "articles_a",      "articles_b",    "articles_c",   "citations",
    "h_index",        "indiv_disc_div",  "group_disc_div", "ethnic_div",  "gender_div",
    "affiliation_div", "age_div",        "degree_centrality", "weighted_degree",
    "clustering_coefficient", "betweenness"};

struct FeatureVector {
    std::string author_id;
    int first_year = 0;
    int articles = 0;
    int articles_a = 0;
    int articles_b = 0;
    int articles_c = 0;
    std::int64_t citations = 0;
    int h_index = 0;
    double indiv_disc_div = 0.0;
    double group_disc_div = 0.0;
    double ethnic_div = 0.0;
    double gender_div = 0.0;
    double affiliation_div = 0.0;
    double age_div = 0.0;
    double degree_centrality = 0.0;
    double weighted_degree = 0.0;
    double clustering_coefficient = 0.0;
    double betweenness = 0.0;
    int label = 0;

    // Reported alongside the model features.
    std::size_t degree = 0;
    double weighted_degree_normalized = 0.0;
    CareerSnapshot snapshot;
    double growth = 0.0;

    [[nodiscard]] std::array<double, kNumFeatures> values() const;
};

/// Per-author structural measures read from the author's feature-window graph.
struct AuthorNetworkFeatures {
    std::size_t degree = 0;
    double degree_centrality = 0.0;
    double weighted_degree = 0.0;
    double weighted_degree_normalized = 0.0;
    double clustering_coefficient = 0.0;
    double betweenness = 0.0;
};

/// Disciplinary profiles computed on demand from a fitted topic model.
class TopicProfiles {
public:
    TopicProfiles(const topics::LdaModel& model, const corpus::Corpus& corpus) : model_(&model), corpus_(&corpus) {}
    [[nodiscard]] int topics() const noexcept { return model_->topics; }
    /// Mean topic row over the author's publications inside `window`; nullopt when there are none.
    [[nodiscard]] std::optional<topics::DisciplinaryProfile> profile(std::string_view author_id, YearRange window) const;
    [[nodiscard]] std::optional<std::size_t> dominant_topic(std::string_view author_id, YearRange window) const;

private:
    const topics::LdaModel* model_;
    const corpus::Corpus* corpus_;
};

enum class WeightedDegreeMode { Plain, Normalized };

struct FeatureOptions {
    DiversityNormalization normalization = DiversityNormalization::Normalized;
    DiversityScope scope = DiversityScope::Window;
    WeightedDegreeMode weighted_degree = WeightedDegreeMode::Plain;
};

struct AssemblyInputs {
    const corpus::Corpus* corpus = nullptr;
    const corpus::CohortSpec* spec = nullptr;
    const corpus::VenueTiering* tiers = nullptr;
    const TopicProfiles* profiles = nullptr;
    const std::map<std::string, AuthorNetworkFeatures>* network = nullptr;
    std::span<const std::string> cohort;
    /// First-publication years whose authors define the label mean and sigma; empty means all.
    std::set<int> label_reference_years;
    FeatureOptions options;
};

struct AssembledFeatures {
    std::vector<FeatureVector> vectors; ///< ascending author_id
    LabelThreshold threshold;
};

/// Number of distinct country values in the corpus, "unknown" included, clamped to [1, 200].
int country_categories(const corpus::Corpus& corpus);

/// One vector per cohort author. Throws naming the author and stage when upstream data is missing.
AssembledFeatures assemble_features(const AssemblyInputs& inputs);

/// author_id, the 16 feature columns, label.
std::string feature_matrix_csv(std::span<const FeatureVector> vectors);
/// author_id,h1,h2,growth_rate,label.
std::string label_report_csv(std::span<const FeatureVector> vectors);

} // namespace rstar::features
