#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rstar/common.hpp"

namespace rstar::corpus {

enum class Gender : std::uint8_t { Female, Male, Unknown };
inline constexpr int kGenderCategories = 3;

/// The 13 name-based ethnic groups plus Unknown.
enum class Ethnicity : std::uint8_t {
    EastAsian,
    Japanese,
    IndianSubContinent,
    African,
    Muslim,
    British,
    EastEuropean,
    Jewish,
    French,
    Germanic,
    Hispanic,
    Italian,
    Nordic,
    Unknown,
};
inline constexpr int kEthnicityCategories = 14;

std::string_view to_string(Gender g) noexcept;
std::string_view to_string(Ethnicity e) noexcept;
std::optional<Gender> parse_gender(std::string_view s) noexcept;
/// Accepts the snake_case slug ("east_asian") or the grouped label ("Asian,GreaterEastAsian,EastAsian").
std::optional<Ethnicity> parse_ethnicity(std::string_view s) noexcept;

inline constexpr std::string_view kUnknownCountry = "unknown";

struct AuthorRef {
    std::string author_id;
    std::string name;
    Gender gender = Gender::Unknown;
    Ethnicity ethnicity = Ethnicity::Unknown;
    std::string country{kUnknownCountry}; ///< ISO-3166 alpha-2, upper case, or "unknown"
};

struct PublicationRecord {
    std::string pub_id;
    int year = 0;
    std::string title;
    std::string abstract;
    std::string venue_id;
    std::vector<AuthorRef> authorships;
    std::int64_t citation_count = 0;
};

/// Immutable publication collection with an author index.
class Corpus {
public:
    Corpus() = default;
    /// Throws Error on duplicate pub_id or a record with no authors.
    explicit Corpus(std::vector<PublicationRecord> records);

    [[nodiscard]] std::span<const PublicationRecord> records() const noexcept { return records_; }
    [[nodiscard]] const PublicationRecord& record(std::size_t i) const { return records_.at(i); }
    [[nodiscard]] std::size_t size() const noexcept { return records_.size(); }
    [[nodiscard]] bool empty() const noexcept { return records_.empty(); }

    [[nodiscard]] std::optional<std::size_t> index_of(std::string_view pub_id) const;
    [[nodiscard]] bool has_author(std::string_view author_id) const;
    /// Record indices of an author's publications, ordered by (year, record index).
    [[nodiscard]] std::span<const std::size_t> publications_of(std::string_view author_id) const;
    /// Attributes from the author's first appearance in input order.
    [[nodiscard]] const AuthorRef& author(std::string_view author_id) const;
    /// All author ids in ascending order.
    [[nodiscard]] const std::vector<std::string>& author_ids() const noexcept { return author_ids_; }

private:
    struct AuthorEntry {
        AuthorRef ref;
        std::vector<std::size_t> pubs;
    };
    const AuthorEntry& entry(std::string_view author_id) const;

    std::vector<PublicationRecord> records_;
    std::unordered_map<std::string, std::size_t> pub_index_;
    std::map<std::string, AuthorEntry, std::less<>> authors_;
    std::vector<std::string> author_ids_;
};

struct Reject {
    std::size_t line = 0; ///< 1-based input line number
    std::string reason;
};

struct IngestResult {
    Corpus corpus;
    std::vector<Reject> rejects;
    std::vector<std::string> warnings;
};

enum class InputFormat { JsonLines };

/// Parses JSON-Lines text. Schema failures become rejects; a duplicate pub_id throws.
/// Records outside `study_period`, when given, are rejected.
IngestResult parse_jsonl(std::string_view content, std::optional<YearRange> study_period = {});
IngestResult ingest(const std::filesystem::path& path, InputFormat format = InputFormat::JsonLines,
                    std::optional<YearRange> study_period = {});

std::string to_jsonl_line(const PublicationRecord& record);
std::string rejects_to_jsonl(std::span<const Reject> rejects);

// ---------------------------------------------------------------------------
// Venue prestige

class SjrTable {
public:
    /// Throws on a negative value or a second entry for the same (venue, year).
    void add(const std::string& venue_id, int year, double sjr);

    [[nodiscard]] std::optional<double> value(std::string_view venue_id, int year) const;
    /// Value for `year`, else the nearest earlier year with an entry.
    [[nodiscard]] std::optional<double> value_at_or_before(std::string_view venue_id, int year) const;
    [[nodiscard]] std::vector<std::pair<std::string, double>> entries_for_year(int year) const;
    [[nodiscard]] std::vector<std::string> venues() const;
    [[nodiscard]] std::size_t size() const noexcept;

    /// CSV with header venue_id,year,sjr.
    static SjrTable parse_csv(std::string_view content);
    static SjrTable load_csv(const std::filesystem::path& path);
    [[nodiscard]] std::string to_csv() const;

private:
    std::map<std::string, std::map<int, double>, std::less<>> entries_;
};

/// Total order A > B > C follows the enumerator values.
enum class VenueTier : std::uint8_t { C = 0, B = 1, A = 2 };
std::string_view to_string(VenueTier t) noexcept;

enum class SigmaKind { Population, Sample };

struct TierThresholds {
    double mean = 0.0;
    double sigma = 0.0;
    [[nodiscard]] double b_cut() const noexcept { return mean + sigma; }
    [[nodiscard]] double a_cut() const noexcept { return mean + 3.0 * sigma; }
    /// A if sjr > mean + 3 sigma, B if mean + sigma < sjr <= mean + 3 sigma, else C.
    [[nodiscard]] VenueTier classify(double sjr) const noexcept;
};

/// Thresholds over the venues with an entry for `year`; throws when fewer than two exist.
TierThresholds tier_thresholds(const SjrTable& sjr, int year, SigmaKind sigma = SigmaKind::Population);

struct TierOptions {
    SigmaKind sigma = SigmaKind::Population;
    /// Venues lacking an entry for the year reuse their nearest earlier value instead of falling to C.
    bool fallback_to_earlier_year = true;
};

/// Tiers every venue known to the table for one year. Venues without a usable value map to C.
std::map<std::string, VenueTier> tier_venues(const SjrTable& sjr, int year, const TierOptions& options = {});

/// Per-publication tier lookup used by the pipeline. Thresholds for a year with fewer than two
/// entries come from the nearest earlier year that has enough.
class VenueTiering {
public:
    VenueTiering(const SjrTable& sjr, YearRange years, const TierOptions& options = {});
    [[nodiscard]] VenueTier tier(std::string_view venue_id, int year) const;
    [[nodiscard]] const std::vector<std::string>& warnings() const noexcept { return warnings_; }

private:
    const SjrTable* sjr_;
    TierOptions options_;
    std::map<int, TierThresholds> thresholds_;
    std::vector<std::string> warnings_;
};

// ---------------------------------------------------------------------------
// Careers and cohorts

/// Minimum publication year of the author; throws for an unknown author.
int first_pub_year(const Corpus& corpus, std::string_view author_id);

enum class AgeGroup : std::uint8_t { G1, G2, G3, G4 };
inline constexpr int kAgeGroupCategories = 4;

/// Half-open buckets [0,5), [5,10), [10,15), [15, inf). Negative ages clamp to G1.
AgeGroup academic_age_group(int career_age) noexcept;

struct CohortSpec {
    YearRange first_pub_years{2006, 2010};
    int min_collaborations = 1;
    int feature_window_years = 5;
    int label_window_years = 10;

    void validate() const;
    [[nodiscard]] YearRange feature_window(int first_year) const noexcept {
        return {first_year, first_year + feature_window_years - 1};
    }
    [[nodiscard]] YearRange label_window(int first_year) const noexcept {
        return {first_year, first_year + label_window_years - 1};
    }
};

/// Distinct co-authors of `author_id` on publications inside `window`, ascending.
std::vector<std::string> coauthors_in_window(const Corpus& corpus, std::string_view author_id, YearRange window);

/// Authors whose first publication falls in spec.first_pub_years and who have at least
/// spec.min_collaborations distinct co-authors in their feature window; ascending by id.
std::vector<std::string> select_cohort(const Corpus& corpus, const CohortSpec& spec);

} // namespace rstar::corpus
