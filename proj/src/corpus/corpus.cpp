#include "rstar/corpus.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>

#include <nlohmann/json.hpp>

#include "rstar/io.hpp"

namespace rstar::corpus {

namespace {

struct EthnicityName {
    Ethnicity value;
    std::string_view slug;
    std::string_view label;
};

constexpr std::array<EthnicityName, kEthnicityCategories> kEthnicities{{
    {Ethnicity::EastAsian, "east_asian", "Asian,GreaterEastAsian,EastAsian"},
    {Ethnicity::Japanese, "japanese", "Asian,GreaterEastAsian,Japanese"},
    {Ethnicity::IndianSubContinent, "indian_subcontinent", "Asian,IndianSubContinent"},
    {Ethnicity::African, "african", "GreaterAfrican,Africans"},
    {Ethnicity::Muslim, "muslim", "GreaterAfrican,Muslim"},
    {Ethnicity::British, "british", "GreaterEuropean,British"},
    {Ethnicity::EastEuropean, "east_european", "GreaterEuropean,EastEuropean"},
    {Ethnicity::Jewish, "jewish", "GreaterEuropean,Jewish"},
    {Ethnicity::French, "french", "GreaterEuropean,WestEuropean,French"},
    {Ethnicity::Germanic, "germanic", "GreaterEuropean,WestEuropean,Germanic"},
    {Ethnicity::Hispanic, "hispanic", "GreaterEuropean,WestEuropean,Hispanic"},
    {Ethnicity::Italian, "italian", "GreaterEuropean,WestEuropean,Italian"},
    {Ethnicity::Nordic, "nordic", "GreaterEuropean,WestEuropean,Nordic"},
    {Ethnicity::Unknown, "unknown", "unknown"},
}};

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

// Drops spaces so "Asian, GreaterEastAsian, EastAsian" matches the compact label.
std::string compact_lower(std::string_view s) {
    std::string out;
    for (char c : s)
        if (c != ' ') out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    return out;
}

std::optional<std::string> normalize_country(std::string_view s) {
    if (lower(s) == kUnknownCountry || s.empty()) return std::string(kUnknownCountry);
    if (s.size() != 2 || !std::isalpha(static_cast<unsigned char>(s[0])) ||
        !std::isalpha(static_cast<unsigned char>(s[1])))
        return std::nullopt;
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

using nlohmann::json;

const json& require(const json& obj, const char* key, json::value_t type, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) throw Error(where + "missing field '" + key + "'");
    const bool ok = type == json::value_t::number_integer
                        ? it->is_number_integer()
                        : it->type() == type;
    if (!ok) throw Error(where + "field '" + key + "' has wrong type");
    return *it;
}

PublicationRecord parse_record(const json& j) {
    if (!j.is_object()) throw Error("line is not a JSON object");
    PublicationRecord r;
    r.pub_id = require(j, "pub_id", json::value_t::string, "").get<std::string>();
    if (r.pub_id.empty()) throw Error("empty pub_id");
    r.year = require(j, "year", json::value_t::number_integer, "").get<int>();
    r.title = require(j, "title", json::value_t::string, "").get<std::string>();
    r.abstract = require(j, "abstract", json::value_t::string, "").get<std::string>();
    r.venue_id = require(j, "venue_id", json::value_t::string, "").get<std::string>();
    const auto cites = require(j, "citation_count", json::value_t::number_integer, "").get<std::int64_t>();
    if (cites < 0) throw Error("negative citation_count");
    r.citation_count = cites;
    const auto& authors = require(j, "authors", json::value_t::array, "");
    if (authors.empty()) throw Error("authors list is empty");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < authors.size(); ++i) {
        const auto& a = authors[i];
        const std::string where = "authors[" + std::to_string(i) + "]: ";
        if (!a.is_object()) throw Error(where + "not an object");
        AuthorRef ref;
        ref.author_id = require(a, "author_id", json::value_t::string, where).get<std::string>();
        if (ref.author_id.empty()) throw Error(where + "empty author_id");
        if (!seen.insert(ref.author_id).second) throw Error(where + "author listed twice");
        ref.name = require(a, "name", json::value_t::string, where).get<std::string>();
        const auto g = parse_gender(require(a, "gender", json::value_t::string, where).get<std::string>());
        if (!g) throw Error(where + "invalid gender");
        ref.gender = *g;
        const auto e = parse_ethnicity(require(a, "ethnicity", json::value_t::string, where).get<std::string>());
        if (!e) throw Error(where + "invalid ethnicity");
        ref.ethnicity = *e;
        const auto c = normalize_country(require(a, "country", json::value_t::string, where).get<std::string>());
        if (!c) throw Error(where + "invalid country code");
        ref.country = *c;
        r.authorships.push_back(std::move(ref));
    }
    return r;
}

} // namespace

std::string_view to_string(Gender g) noexcept {
    switch (g) {
    case Gender::Female: return "female";
    case Gender::Male: return "male";
    default: return "unknown";
    }
}

std::string_view to_string(Ethnicity e) noexcept { return kEthnicities[static_cast<std::size_t>(e)].slug; }

std::optional<Gender> parse_gender(std::string_view s) noexcept {
    const auto l = lower(s);
    if (l == "female") return Gender::Female;
    if (l == "male") return Gender::Male;
    if (l == "unknown") return Gender::Unknown;
    return std::nullopt;
}

std::optional<Ethnicity> parse_ethnicity(std::string_view s) noexcept {
    const auto l = compact_lower(s);
    for (const auto& e : kEthnicities)
        if (l == e.slug || l == compact_lower(e.label)) return e.value;
    return std::nullopt;
}

// ---------------------------------------------------------------------------

Corpus::Corpus(std::vector<PublicationRecord> records) : records_(std::move(records)) {
    for (std::size_t i = 0; i < records_.size(); ++i) {
        const auto& r = records_[i];
        if (r.authorships.empty()) throw Error("publication " + r.pub_id + " has no authors");
        if (!pub_index_.emplace(r.pub_id, i).second) throw Error("duplicate pub_id: " + r.pub_id);
        for (const auto& a : r.authorships) {
            auto [it, inserted] = authors_.try_emplace(a.author_id);
            if (inserted) it->second.ref = a;
            it->second.pubs.push_back(i);
        }
    }
    author_ids_.reserve(authors_.size());
    for (auto& [id, entry] : authors_) {
        std::stable_sort(entry.pubs.begin(), entry.pubs.end(),
                         [&](std::size_t a, std::size_t b) { return records_[a].year < records_[b].year; });
        author_ids_.push_back(id);
    }
}

std::optional<std::size_t> Corpus::index_of(std::string_view pub_id) const {
    auto it = pub_index_.find(std::string(pub_id));
    if (it == pub_index_.end()) return std::nullopt;
    return it->second;
}

bool Corpus::has_author(std::string_view author_id) const { return authors_.find(author_id) != authors_.end(); }

const Corpus::AuthorEntry& Corpus::entry(std::string_view author_id) const {
    auto it = authors_.find(author_id);
    if (it == authors_.end()) throw Error("unknown author: " + std::string(author_id));
    return it->second;
}

std::span<const std::size_t> Corpus::publications_of(std::string_view author_id) const {
    return entry(author_id).pubs;
}

const AuthorRef& Corpus::author(std::string_view author_id) const { return entry(author_id).ref; }

// ---------------------------------------------------------------------------

IngestResult parse_jsonl(std::string_view content, std::optional<YearRange> study_period) {
    IngestResult result;
    std::vector<PublicationRecord> records;
    std::unordered_map<std::string, std::size_t> first_line;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < content.size()) {
        auto nl = content.find('\n', pos);
        if (nl == std::string_view::npos) nl = content.size();
        const auto line = io::trim(content.substr(pos, nl - pos));
        pos = nl + 1;
        ++line_no;
        if (line.empty()) continue;
        PublicationRecord rec;
        try {
            rec = parse_record(nlohmann::json::parse(line));
        } catch (const nlohmann::json::exception& e) {
            result.rejects.push_back({line_no, std::string("malformed JSON: ") + e.what()});
            continue;
        } catch (const Error& e) {
            result.rejects.push_back({line_no, e.what()});
            continue;
        }
        if (study_period && !study_period->contains(rec.year)) {
            result.rejects.push_back({line_no, "year " + std::to_string(rec.year) + " outside study period"});
            continue;
        }
        auto [it, inserted] = first_line.emplace(rec.pub_id, line_no);
        if (!inserted)
            throw Error("duplicate pub_id '" + rec.pub_id + "' on line " + std::to_string(line_no) +
                        " (first seen on line " + std::to_string(it->second) + ")");
        records.push_back(std::move(rec));
    }
    if (records.empty()) result.warnings.emplace_back("corpus is empty");
    result.corpus = Corpus(std::move(records));
    return result;
}

IngestResult ingest(const std::filesystem::path& path, InputFormat format, std::optional<YearRange> study_period) {
    if (format != InputFormat::JsonLines) throw Error("unsupported input format");
    return parse_jsonl(io::read_file(path), study_period);
}

std::string to_jsonl_line(const PublicationRecord& r) {
    nlohmann::ordered_json j;
    j["pub_id"] = r.pub_id;
    j["year"] = r.year;
    j["title"] = r.title;
    j["abstract"] = r.abstract;
    j["venue_id"] = r.venue_id;
    j["citation_count"] = r.citation_count;
    auto& authors = j["authors"] = nlohmann::ordered_json::array();
    for (const auto& a : r.authorships) {
        nlohmann::ordered_json aj;
        aj["author_id"] = a.author_id;
        aj["name"] = a.name;
        aj["gender"] = to_string(a.gender);
        aj["ethnicity"] = to_string(a.ethnicity);
        aj["country"] = a.country;
        authors.push_back(std::move(aj));
    }
    return j.dump();
}

std::string rejects_to_jsonl(std::span<const Reject> rejects) {
    std::string out;
    for (const auto& r : rejects) {
        nlohmann::ordered_json j;
        j["line"] = r.line;
        j["reason"] = r.reason;
        out += j.dump();
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------

int first_pub_year(const Corpus& corpus, std::string_view author_id) {
    const auto pubs = corpus.publications_of(author_id);
    int best = corpus.record(pubs.front()).year;
    for (auto i : pubs) best = std::min(best, corpus.record(i).year);
    return best;
}

AgeGroup academic_age_group(int career_age) noexcept {
    if (career_age < 5) return AgeGroup::G1;
    if (career_age < 10) return AgeGroup::G2;
    if (career_age < 15) return AgeGroup::G3;
    return AgeGroup::G4;
}

void CohortSpec::validate() const {
    if (first_pub_years.empty()) throw Error("cohort: first_pub_years range is empty");
    if (min_collaborations < 0) throw Error("cohort: min_collaborations must be non-negative");
    if (feature_window_years <= 0) throw Error("cohort: feature_window_years must be positive");
    if (label_window_years <= feature_window_years)
        throw Error("cohort: label_window_years must exceed feature_window_years");
}

std::vector<std::string> coauthors_in_window(const Corpus& corpus, std::string_view author_id, YearRange window) {
    std::set<std::string, std::less<>> out;
    for (auto i : corpus.publications_of(author_id)) {
        const auto& r = corpus.record(i);
        if (!window.contains(r.year)) continue;
        for (const auto& a : r.authorships)
            if (a.author_id != author_id) out.insert(a.author_id);
    }
    return {out.begin(), out.end()};
}

std::vector<std::string> select_cohort(const Corpus& corpus, const CohortSpec& spec) {
    spec.validate();
    if (corpus.empty()) throw Error("select_cohort: corpus is empty");
    std::vector<std::string> out;
    for (const auto& id : corpus.author_ids()) {
        const int first = first_pub_year(corpus, id);
        if (!spec.first_pub_years.contains(first)) continue;
        const auto co = coauthors_in_window(corpus, id, spec.feature_window(first));
        if (static_cast<int>(co.size()) >= spec.min_collaborations) out.push_back(id);
    }
    return out;
}

} // namespace rstar::corpus
