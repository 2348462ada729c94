#include "rstar/features.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "rstar/io.hpp"
#include "rstar/stats.hpp"

namespace rstar::features {

double shannon_from_counts(std::span<const std::size_t> counts, int num_categories, DiversityNormalization mode) {
    if (num_categories < 1) throw Error("shannon_diversity: num_categories must be at least 1");
    std::size_t total = 0;
    int observed = 0;
    for (auto c : counts) {
        total += c;
        if (c > 0) ++observed;
    }
    if (total == 0) throw Error("shannon_diversity: empty value list");
    if (observed > num_categories)
        throw Error("shannon_diversity: " + std::to_string(observed) + " observed categories exceed " +
                    std::to_string(num_categories));
    double h = 0.0;
    for (auto c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / static_cast<double>(total);
        h -= p * std::log(p);
    }
    if (mode == DiversityNormalization::Raw) return h;
    if (num_categories == 1) return 0.0;
    return h / std::log(static_cast<double>(num_categories));
}

double distribution_entropy(std::span<const double> distribution, DiversityNormalization mode) {
    if (distribution.size() <= 1) return 0.0;
    double h = 0.0;
    for (double p : distribution)
        if (p > 0.0) h -= p * std::log(p);
    if (mode == DiversityNormalization::Raw) return h;
    return std::clamp(h / std::log(static_cast<double>(distribution.size())), 0.0, 1.0);
}

Diversities compute_diversities(const DiversityInputs& in, DiversityNormalization mode) {
    Diversities d;
    d.indiv_disc = distribution_entropy(in.own_topics, mode);
    if (in.collaborators.empty()) return d;

    std::vector<int> gender, ethnicity, age;
    std::vector<std::string> country;
    auto add = [&](const PersonAttributes& p) {
        gender.push_back(static_cast<int>(p.gender));
        ethnicity.push_back(static_cast<int>(p.ethnicity));
        age.push_back(static_cast<int>(p.age_group));
        country.push_back(p.country);
    };
    add(in.focal);
    std::vector<std::size_t> topics;
    for (const auto& c : in.collaborators) {
        add(c);
        if (c.dominant_topic) topics.push_back(*c.dominant_topic);
    }
    d.gender = shannon_diversity<int>(gender, corpus::kGenderCategories, mode);
    d.ethnic = shannon_diversity<int>(ethnicity, corpus::kEthnicityCategories, mode);
    d.age = shannon_diversity<int>(age, corpus::kAgeGroupCategories, mode);
    {
        std::set<std::string> distinct(country.begin(), country.end());
        const int c = std::max<int>(std::min(in.country_categories, kMaxCountryCategories), static_cast<int>(distinct.size()));
        d.affiliation = shannon_diversity<std::string>(country, c, mode);
    }
    if (!topics.empty()) d.group_disc = shannon_diversity<std::size_t>(topics, std::max(in.topics, 1), mode);
    return d;
}

int h_index(std::span<const std::int64_t> citation_counts) {
    std::vector<std::int64_t> sorted(citation_counts.begin(), citation_counts.end());
    for (auto c : sorted)
        if (c < 0) throw Error("h_index: negative citation count");
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    int h = 0;
    while (h < static_cast<int>(sorted.size()) && sorted[static_cast<std::size_t>(h)] >= h + 1) ++h;
    return h;
}

double growth_rate(const CareerSnapshot& s) {
    if (s.t2 <= s.t1) throw Error("growth_rate: t2 must exceed t1 for author '" + s.author_id + "'");
    return static_cast<double>(s.h2 - s.h1) / static_cast<double>(s.t2 - s.t1);
}

LabelThreshold rising_star_threshold(std::span<const double> rates) {
    if (rates.size() < 2) throw Error("label_rising_stars: need at least two authors");
    LabelThreshold t;
    t.mean = stats::mean(rates);
    t.sigma = stats::stddev(rates);
    t.threshold = t.mean + 3.0 * t.sigma;
    t.degenerate = t.sigma == 0.0;
    return t;
}

int apply_label(const LabelThreshold& t, double rate) noexcept {
    return (!t.degenerate && rate >= t.threshold) ? 1 : 0;
}

std::map<std::string, int> label_rising_stars(const std::map<std::string, double>& rates) {
    std::vector<double> values;
    values.reserve(rates.size());
    for (const auto& [_, r] : rates) values.push_back(r);
    const auto t = rising_star_threshold(values);
    std::map<std::string, int> out;
    for (const auto& [id, r] : rates) out.emplace(id, apply_label(t, r));
    return out;
}

std::array<double, kNumFeatures> FeatureVector::values() const {
    return {static_cast<double>(articles),
            static_cast<double>(articles_a),
            static_cast<double>(articles_b),
            static_cast<double>(articles_c),
            static_cast<double>(citations),
            static_cast<double>(h_index),
            indiv_disc_div,
            group_disc_div,
            ethnic_div,
            gender_div,
            affiliation_div,
            age_div,
            degree_centrality,
            weighted_degree,
            clustering_coefficient,
            betweenness};
}

std::optional<topics::DisciplinaryProfile> TopicProfiles::profile(std::string_view author_id, YearRange window) const {
    std::vector<std::string> pubs;
    for (auto i : corpus_->publications_of(author_id)) {
        const auto& r = corpus_->record(i);
        if (window.contains(r.year) && model_->doc_index(r.pub_id)) pubs.push_back(r.pub_id);
    }
    if (pubs.empty()) return std::nullopt;
    return topics::author_profile(*model_, pubs, std::string(author_id));
}

std::optional<std::size_t> TopicProfiles::dominant_topic(std::string_view author_id, YearRange window) const {
    const auto p = profile(author_id, window);
    if (!p) return std::nullopt;
    return topics::dominant_topic(*p);
}

int country_categories(const corpus::Corpus& corpus) {
    std::set<std::string, std::less<>> distinct;
    for (const auto& r : corpus.records())
        for (const auto& a : r.authorships) distinct.insert(a.country);
    return std::clamp(static_cast<int>(distinct.size()), 1, kMaxCountryCategories);
}

namespace {

PersonAttributes person(const corpus::Corpus& corpus, const std::string& id, int at_year) {
    const auto& ref = corpus.author(id);
    PersonAttributes p;
    p.author_id = id;
    p.gender = ref.gender;
    p.ethnicity = ref.ethnicity;
    p.country = ref.country;
    p.age_group = corpus::academic_age_group(at_year - corpus::first_pub_year(corpus, id));
    return p;
}

[[noreturn]] void missing(const std::string& author, const char* stage) {
    throw Error("assemble_features: author '" + author + "' has no " + stage + " data");
}

} // namespace

AssembledFeatures assemble_features(const AssemblyInputs& in) {
    if (!in.corpus || !in.spec || !in.tiers || !in.profiles || !in.network)
        throw Error("assemble_features: missing upstream artifact");
    const auto& corpus = *in.corpus;
    const int topics = in.profiles->topics();
    const int countries = country_categories(corpus);
    const auto mode = in.options.normalization;

    AssembledFeatures out;
    std::vector<std::string> cohort(in.cohort.begin(), in.cohort.end());
    std::sort(cohort.begin(), cohort.end());
    out.vectors.reserve(cohort.size());

    for (const auto& id : cohort) {
        if (!corpus.has_author(id)) missing(id, "corpus");
        FeatureVector fv;
        fv.author_id = id;
        fv.first_year = corpus::first_pub_year(corpus, id);
        const auto fwin = in.spec->feature_window(fv.first_year);
        const auto lwin = in.spec->label_window(fv.first_year);

        std::vector<std::int64_t> cites_feature, cites_label;
        std::vector<std::size_t> window_pubs;
        for (auto i : corpus.publications_of(id)) {
            const auto& r = corpus.record(i);
            if (lwin.contains(r.year)) cites_label.push_back(r.citation_count);
            if (!fwin.contains(r.year)) continue;
            window_pubs.push_back(i);
            cites_feature.push_back(r.citation_count);
            ++fv.articles;
            fv.citations += r.citation_count;
            switch (in.tiers->tier(r.venue_id, r.year)) {
            case corpus::VenueTier::A: ++fv.articles_a; break;
            case corpus::VenueTier::B: ++fv.articles_b; break;
            case corpus::VenueTier::C: ++fv.articles_c; break;
            }
        }
        fv.h_index = h_index(cites_feature);
        fv.snapshot = {id, fv.h_index, h_index(cites_label), in.spec->feature_window_years, in.spec->label_window_years};
        fv.growth = growth_rate(fv.snapshot);

        const auto own = in.profiles->profile(id, fwin);
        if (!own) missing(id, "topic profile");

        Diversities div;
        if (in.options.scope == DiversityScope::Window) {
            // Each collaborator is described at the year of the first joint publication.
            std::map<std::string, int> first_joint;
            for (auto i : window_pubs) {
                const auto& r = corpus.record(i);
                for (const auto& a : r.authorships) {
                    if (a.author_id == id) continue;
                    auto [it, inserted] = first_joint.emplace(a.author_id, r.year);
                    if (!inserted) it->second = std::min(it->second, r.year);
                }
            }
            DiversityInputs di;
            di.focal = person(corpus, id, fwin.first);
            di.own_topics = own->distribution;
            di.topics = topics;
            di.country_categories = countries;
            for (const auto& [cid, year] : first_joint) {
                auto p = person(corpus, cid, year);
                p.dominant_topic = in.profiles->dominant_topic(cid, {corpus::first_pub_year(corpus, cid), fwin.last});
                di.collaborators.push_back(std::move(p));
            }
            div = compute_diversities(di, mode);
        } else {
            div.indiv_disc = distribution_entropy(own->distribution, mode);
            for (auto i : window_pubs) {
                const auto& r = corpus.record(i);
                DiversityInputs di;
                di.focal = person(corpus, id, r.year);
                di.topics = topics;
                di.country_categories = countries;
                for (const auto& a : r.authorships) {
                    if (a.author_id == id) continue;
                    auto p = person(corpus, a.author_id, r.year);
                    p.dominant_topic = in.profiles->dominant_topic(a.author_id, {corpus::first_pub_year(corpus, a.author_id), fwin.last});
                    di.collaborators.push_back(std::move(p));
                }
                const auto d = compute_diversities(di, mode);
                div.group_disc += d.group_disc;
                div.ethnic += d.ethnic;
                div.gender += d.gender;
                div.affiliation += d.affiliation;
                div.age += d.age;
            }
            const double n = window_pubs.empty() ? 1.0 : static_cast<double>(window_pubs.size());
            div.group_disc /= n;
            div.ethnic /= n;
            div.gender /= n;
            div.affiliation /= n;
            div.age /= n;
        }
        fv.indiv_disc_div = div.indiv_disc;
        fv.group_disc_div = div.group_disc;
        fv.ethnic_div = div.ethnic;
        fv.gender_div = div.gender;
        fv.affiliation_div = div.affiliation;
        fv.age_div = div.age;

        auto net = in.network->find(id);
        if (net == in.network->end()) missing(id, "network");
        fv.degree = net->second.degree;
        fv.degree_centrality = net->second.degree_centrality;
        fv.weighted_degree_normalized = net->second.weighted_degree_normalized;
        fv.weighted_degree = in.options.weighted_degree == WeightedDegreeMode::Plain ? net->second.weighted_degree
                                                                                      : net->second.weighted_degree_normalized;
        fv.clustering_coefficient = net->second.clustering_coefficient;
        fv.betweenness = net->second.betweenness;
        out.vectors.push_back(std::move(fv));
    }

    std::vector<double> reference;
    for (const auto& fv : out.vectors)
        if (in.label_reference_years.empty() || in.label_reference_years.contains(fv.first_year))
            reference.push_back(fv.growth);
    out.threshold = rising_star_threshold(reference);
    for (auto& fv : out.vectors) fv.label = apply_label(out.threshold, fv.growth);
    return out;
}

std::string feature_matrix_csv(std::span<const FeatureVector> vectors) {
    std::string out = "author_id";
    for (auto name : kFeatureNames) out += "," + std::string(name);
    out += ",label\n";
    for (const auto& fv : vectors) {
        out += io::csv_escape(fv.author_id);
        for (double v : fv.values()) out += "," + io::format_double(v);
        out += "," + std::to_string(fv.label) + "\n";
    }
    return out;
}

std::string label_report_csv(std::span<const FeatureVector> vectors) {
    std::string out = "author_id,h1,h2,growth_rate,label\n";
    for (const auto& fv : vectors)
        out += io::csv_escape(fv.author_id) + "," + std::to_string(fv.snapshot.h1) + "," +
               std::to_string(fv.snapshot.h2) + "," + io::format_double(fv.growth) + "," + std::to_string(fv.label) + "\n";
    return out;
}

} // namespace rstar::features
