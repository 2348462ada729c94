#include <charconv>
#include <cmath>
#include <string>
#include <vector>

#include "rstar/corpus.hpp"
#include "rstar/io.hpp"
#include "rstar/stats.hpp"

namespace rstar::corpus {

void SjrTable::add(const std::string& venue_id, int year, double sjr) {
    if (venue_id.empty()) throw Error("sjr: empty venue_id");
    if (!(sjr >= 0.0) || !std::isfinite(sjr))
        throw Error("sjr: negative or non-finite value for " + venue_id + " in " + std::to_string(year));
    auto& years = entries_[venue_id];
    if (!years.emplace(year, sjr).second)
        throw Error("sjr: duplicate entry for " + venue_id + " in " + std::to_string(year));
}

std::optional<double> SjrTable::value(std::string_view venue_id, int year) const {
    auto v = entries_.find(venue_id);
    if (v == entries_.end()) return std::nullopt;
    auto y = v->second.find(year);
    if (y == v->second.end()) return std::nullopt;
    return y->second;
}

std::optional<double> SjrTable::value_at_or_before(std::string_view venue_id, int year) const {
    auto v = entries_.find(venue_id);
    if (v == entries_.end()) return std::nullopt;
    auto y = v->second.upper_bound(year);
    if (y == v->second.begin()) return std::nullopt;
    return std::prev(y)->second;
}

std::vector<std::pair<std::string, double>> SjrTable::entries_for_year(int year) const {
    std::vector<std::pair<std::string, double>> out;
    for (const auto& [venue, years] : entries_) {
        auto y = years.find(year);
        if (y != years.end()) out.emplace_back(venue, y->second);
    }
    return out;
}

std::vector<std::string> SjrTable::venues() const {
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (const auto& [venue, _] : entries_) out.push_back(venue);
    return out;
}

std::size_t SjrTable::size() const noexcept {
    std::size_t n = 0;
    for (const auto& [_, years] : entries_) n += years.size();
    return n;
}

SjrTable SjrTable::parse_csv(std::string_view content) {
    SjrTable table;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (pos < content.size()) {
        auto nl = content.find('\n', pos);
        if (nl == std::string_view::npos) nl = content.size();
        const auto line = io::trim(content.substr(pos, nl - pos));
        pos = nl + 1;
        ++line_no;
        if (line.empty()) continue;
        const auto fields = io::split_csv_line(line);
        if (!header_seen) {
            if (fields.size() != 3 || io::trim(fields[0]) != "venue_id" || io::trim(fields[1]) != "year" ||
                io::trim(fields[2]) != "sjr")
                throw Error("sjr csv: expected header venue_id,year,sjr");
            header_seen = true;
            continue;
        }
        if (fields.size() != 3) throw Error("sjr csv: line " + std::to_string(line_no) + " needs 3 fields");
        const auto year_s = io::trim(fields[1]);
        int year = 0;
        if (std::from_chars(year_s.data(), year_s.data() + year_s.size(), year).ec != std::errc{})
            throw Error("sjr csv: bad year on line " + std::to_string(line_no));
        double value = 0.0;
        try {
            std::size_t used = 0;
            const std::string v(io::trim(fields[2]));
            value = std::stod(v, &used);
            if (used != v.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw Error("sjr csv: bad sjr value on line " + std::to_string(line_no));
        }
        table.add(std::string(io::trim(fields[0])), year, value);
    }
    if (!header_seen) throw Error("sjr csv: missing header");
    return table;
}

SjrTable SjrTable::load_csv(const std::filesystem::path& path) { return parse_csv(io::read_file(path)); }

std::string SjrTable::to_csv() const {
    std::string out = "venue_id,year,sjr\n";
    for (const auto& [venue, years] : entries_)
        for (const auto& [year, v] : years)
            out += io::csv_escape(venue) + "," + std::to_string(year) + "," + io::format_double(v) + "\n";
    return out;
}

std::string_view to_string(VenueTier t) noexcept {
    switch (t) {
    case VenueTier::A: return "A";
    case VenueTier::B: return "B";
    default: return "C";
    }
}

VenueTier TierThresholds::classify(double sjr) const noexcept {
    if (sjr > a_cut()) return VenueTier::A;
    if (sjr > b_cut()) return VenueTier::B;
    return VenueTier::C;
}

TierThresholds tier_thresholds(const SjrTable& sjr, int year, SigmaKind sigma) {
    const auto entries = sjr.entries_for_year(year);
    if (entries.size() < 2)
        throw Error("tier_venues: fewer than two venues with an SJR entry for " + std::to_string(year));
    std::vector<double> values;
    values.reserve(entries.size());
    for (const auto& [_, v] : entries) values.push_back(v);
    return {stats::mean(values), stats::stddev(values, sigma == SigmaKind::Sample ? 1 : 0)};
}

std::map<std::string, VenueTier> tier_venues(const SjrTable& sjr, int year, const TierOptions& options) {
    const auto thresholds = tier_thresholds(sjr, year, options.sigma);
    std::map<std::string, VenueTier> out;
    for (const auto& venue : sjr.venues()) {
        const auto v = options.fallback_to_earlier_year ? sjr.value_at_or_before(venue, year) : sjr.value(venue, year);
        out.emplace(venue, v ? thresholds.classify(*v) : VenueTier::C);
    }
    return out;
}

VenueTiering::VenueTiering(const SjrTable& sjr, YearRange years, const TierOptions& options)
    : sjr_(&sjr), options_(options) {
    std::optional<TierThresholds> carry;
    for (int y = years.first; y <= years.last; ++y) {
        if (sjr.entries_for_year(y).size() >= 2) {
            carry = tier_thresholds(sjr, y, options.sigma);
        } else if (carry) {
            warnings_.push_back("SJR year " + std::to_string(y) + " has fewer than two venues; reusing earlier thresholds");
        } else {
            warnings_.push_back("SJR year " + std::to_string(y) + " has no usable thresholds; its venues are tier C");
            continue;
        }
        thresholds_.emplace(y, *carry);
    }
}

VenueTier VenueTiering::tier(std::string_view venue_id, int year) const {
    auto t = thresholds_.find(year);
    if (t == thresholds_.end()) return VenueTier::C;
    const auto v = options_.fallback_to_earlier_year ? sjr_->value_at_or_before(venue_id, year)
                                                     : sjr_->value(venue_id, year);
    return v ? t->second.classify(*v) : VenueTier::C;
}

} // namespace rstar::corpus
