#include "rstar/synth.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "rstar/features.hpp"
#include "rstar/io.hpp"
#include "rstar/rng.hpp"
#include "rstar/stats.hpp"
#include "rstar/textprep.hpp"

namespace rstar::synth {

ClassParams table1_rising() {
    ClassParams p;
    p.articles = {2.82, 1.74, 1, 10};
    p.citations = {42.89, 41.27, 0, 237};
    p.degree = {10.8, 9.56, 1, 63};
    p.weighted_degree = {13.12, 12.02, 1, 76};
    p.growth = {0.74, 0.24, 0.6, 2.2};
    p.level_a = 0.29;
    p.level_b = 1.35;
    p.level_c = 1.18;
    return p;
}

ClassParams table1_non_rising() {
    ClassParams p;
    p.articles = {1.25, 0.67, 1, 13};
    p.citations = {19.63, 35.1, 0, 757};
    p.degree = {5.2, 4.89, 0, 57};
    p.weighted_degree = {5.58, 5.59, 0, 68};
    p.growth = {0.04, 0.09, 0, 0.4};
    p.level_a = 0.1;
    p.level_b = 0.45;
    p.level_c = 0.7;
    return p;
}

namespace {

void check_params(const ClassParams& c, const char* which) {
    for (const FeatureParams* f : {&c.articles, &c.citations, &c.degree, &c.weighted_degree, &c.growth}) {
        if (f->sigma < 0) throw Error(std::string("synth: negative sigma in ") + which + " parameters");
        if (f->max < f->min) throw Error(std::string("synth: empty range in ") + which + " parameters");
    }
    if (c.level_a < 0 || c.level_b < 0 || c.level_c < 0 || c.level_a + c.level_b + c.level_c <= 0)
        throw Error(std::string("synth: tier means in ") + which + " parameters must be non-negative and not all zero");
    if (c.articles.max < 1) throw Error(std::string("synth: ") + which + " articles range excludes 1");
}

} // namespace

void SynthSpec::validate() const {
    if (cohort_size == 0) throw Error("synth: cohort_size must be positive");
    if (!(rising_fraction >= 0.0 && rising_fraction < 1.0)) throw Error("synth: rising_fraction must lie in [0, 1)");
    if (cohort_years.empty() || study_period.empty()) throw Error("synth: year ranges must be non-empty");
    if (cohort_years.first <= study_period.first)
        throw Error("synth: the study period must start before the cohort years (senior collaborators need earlier careers)");
    if (feature_window_years < 1 || label_window_years <= feature_window_years)
        throw Error("synth: label window must be longer than the feature window");
    if (cohort_years.last + label_window_years - 1 > study_period.last)
        throw Error("synth: label windows of the last cohort year run past the study period");
    if (authors_per_lab == 0 || seniors_per_lab < 6) throw Error("synth: labs need authors and at least six seniors");
    if (topics < 1 || words_per_topic < 2 || title_words < 1 || abstract_words < 0)
        throw Error("synth: invalid text parameters");
    check_params(rising, "rising");
    check_params(non_rising, "non_rising");
}

namespace {

constexpr std::string_view kCountries[] = {"US", "CN", "GB", "DE", "FR", "CA", "IN", "JP", "AU", "IT",
                                           "ES", "NL", "KR", "BR", "IR", "SE", "CH", "SG", "IL", "PL"};

int poisson(Rng& rng, double lambda) {
    if (lambda <= 0) return 0;
    return std::poisson_distribution<int>(lambda)(rng);
}

/// Integer draw with the requested mean and spread on [min, max]: a shifted negative binomial
/// when over-dispersed, binomial when under-dispersed, Poisson otherwise. Out-of-range draws
/// are redrawn.
int sample_count(Rng& rng, const FeatureParams& p) {
    const double lo = std::ceil(p.min);
    const double hi = std::floor(p.max);
    const double m = p.mean - lo;
    const double v = p.sigma * p.sigma;
    for (int attempt = 0; attempt < 1000; ++attempt) {
        int x = 0;
        if (m <= 0) {
            x = 0;
        } else if (v > m) {
            const double r = m * m / (v - m);
            const double lambda = std::gamma_distribution<double>(r, m / r)(rng);
            x = poisson(rng, lambda);
        } else if (v < m) {
            const double prob = 1.0 - v / m;
            const int n = std::max(1, static_cast<int>(std::lround(m / prob)));
            x = std::binomial_distribution<int>(n, std::min(1.0, m / n))(rng);
        } else {
            x = poisson(rng, m);
        }
        const double value = lo + x;
        if (value <= hi) return static_cast<int>(value);
    }
    return static_cast<int>(hi);
}

std::size_t pick(Rng& rng, std::size_t n) { return static_cast<std::size_t>(uniform_index(rng, n)); }

int pick_year(Rng& rng, int first, int last) { return first + static_cast<int>(pick(rng, static_cast<std::size_t>(last - first + 1))); }

template <typename T>
void shuffle(Rng& rng, std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[pick(rng, i)]);
}

std::size_t weighted_pick(Rng& rng, std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double u = uniform01(rng) * total;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (u < weights[i]) return i;
        u -= weights[i];
    }
    return weights.size() - 1;
}

std::vector<std::vector<std::string>> make_vocabulary(Rng& rng, int topics, int words_per_topic) {
    static constexpr std::string_view consonants = "bdfgklmnprtvz";
    static constexpr std::string_view vowels = "aeiou";
    const auto& stop = text::default_stoplist();
    std::set<std::string> used;
    std::vector<std::vector<std::string>> vocab(static_cast<std::size_t>(topics));
    for (auto& words : vocab) {
        while (words.size() < static_cast<std::size_t>(words_per_topic)) {
            std::string w;
            const int syllables = 2 + static_cast<int>(pick(rng, 2));
            for (int s = 0; s < syllables; ++s) {
                w += consonants[pick(rng, consonants.size())];
                w += vowels[pick(rng, vowels.size())];
            }
            if (stop.contains(w) || text::lemmatize(w) != w || !used.insert(w).second) continue;
            words.push_back(std::move(w));
        }
    }
    return vocab;
}

corpus::AuthorRef make_person(Rng& rng, std::string id, std::string_view home_country) {
    static constexpr double gender_w[] = {0.3, 0.6, 0.1};
    static constexpr double ethnic_w[] = {0.16, 0.04, 0.12, 0.03, 0.06, 0.14, 0.07, 0.05,
                                          0.06, 0.07, 0.07, 0.05, 0.03, 0.05};
    corpus::AuthorRef a;
    a.name = "Author " + id;
    a.author_id = std::move(id);
    a.gender = static_cast<corpus::Gender>(weighted_pick(rng, gender_w));
    a.ethnicity = static_cast<corpus::Ethnicity>(weighted_pick(rng, ethnic_w));
    const double u = uniform01(rng);
    if (u < 0.7) a.country = std::string(home_country);
    else if (u < 0.97) a.country = std::string(kCountries[pick(rng, std::size(kCountries))]);
    else a.country = std::string(corpus::kUnknownCountry);
    return a;
}

struct Lab {
    int topic = 0;
    std::string country;
    std::vector<corpus::AuthorRef> seniors;
};

struct Planned {
    std::string id;
    std::size_t lab = 0;
    int first_year = 0;
    bool star = false;
    corpus::AuthorRef ref;
    std::vector<std::size_t> window_pubs; // record indices
    int h1 = 0;
    int steps = 0;
    int articles = 0;
    std::int64_t citations = 0;
    int degree = 0;
    int weighted_degree = 0;
};

class Generator {
public:
    explicit Generator(const SynthSpec& spec) : spec_(spec) {}

    SynthCorpus run() {
        SynthCorpus out;
        Rng rng(derive_seed(spec_.seed, "synth"));
        vocab_ = make_vocabulary(rng, spec_.topics, spec_.words_per_topic);
        build_sjr(rng, out);
        build_labs(rng);
        plan_cohort(rng);
        settle_labels(out.warnings);
        add_label_window_papers();
        add_background_papers(rng);

        out.records = std::move(records_);
        for (const auto& a : cohort_) {
            TruthRow t;
            t.author_id = a.id;
            t.first_year = a.first_year;
            t.label = a.star ? 1 : 0;
            t.articles = a.articles;
            t.citations = a.citations;
            t.degree = a.degree;
            t.weighted_degree = a.weighted_degree;
            t.h1 = a.h1;
            t.h2 = a.h1 + a.steps;
            out.truth.push_back(std::move(t));
        }
        std::sort(out.truth.begin(), out.truth.end(),
                  [](const TruthRow& a, const TruthRow& b) { return a.author_id < b.author_id; });
        return out;
    }

private:
    const SynthSpec& spec_;
    std::vector<std::vector<std::string>> vocab_;
    std::map<int, std::array<std::vector<std::string>, 3>> venues_by_tier_; // year -> [C, B, A]
    std::vector<Lab> labs_;
    std::vector<Planned> cohort_;
    std::vector<corpus::PublicationRecord> records_;

    std::string text(Rng& rng, int topic, int words) {
        const auto secondary = static_cast<int>(pick(rng, static_cast<std::size_t>(spec_.topics)));
        std::string s;
        for (int i = 0; i < words; ++i) {
            const int t = uniform01(rng) < 0.8 ? topic : secondary;
            const auto& v = vocab_[static_cast<std::size_t>(t)];
            if (!s.empty()) s += ' ';
            s += v[pick(rng, v.size())];
        }
        return s;
    }

    std::size_t add_record(Rng& rng, int year, int topic, corpus::VenueTier tier, std::vector<corpus::AuthorRef> authors,
                           std::int64_t citations) {
        corpus::PublicationRecord r;
        r.pub_id = "p" + std::to_string(1000000 + records_.size()).substr(1);
        r.year = year;
        r.title = text(rng, topic, spec_.title_words);
        r.abstract = text(rng, topic, spec_.abstract_words);
        const auto& pool = venues_by_tier_.at(year)[static_cast<std::size_t>(tier)];
        r.venue_id = pool[pick(rng, pool.size())];
        r.authorships = std::move(authors);
        r.citation_count = citations;
        records_.push_back(std::move(r));
        return records_.size() - 1;
    }

    void build_sjr(Rng& rng, SynthCorpus& out) {
        // Two dominant venues, ten strong ones and a long tail; tiers come from the library's
        // thresholds so the generator and the pipeline agree.
        const int n_a = 2, n_b = 10, n_c = 60;
        for (int year = spec_.study_period.first; year <= spec_.study_period.last; ++year) {
            for (int v = 0; v < n_a + n_b + n_c; ++v) {
                double value;
                if (v < n_a) value = 28.0 + 4.0 * uniform01(rng);
                else if (v < n_a + n_b) value = 10.0 + 2.0 * uniform01(rng);
                else value = 0.2 + 0.8 * uniform01(rng);
                out.sjr.add("v" + std::to_string(100 + v).substr(1), year, value);
            }
        }
        const corpus::VenueTiering tiering(out.sjr, spec_.study_period);
        for (int year = spec_.study_period.first; year <= spec_.study_period.last; ++year) {
            auto& buckets = venues_by_tier_[year];
            for (const auto& venue : out.sjr.venues())
                buckets[static_cast<std::size_t>(tiering.tier(venue, year))].push_back(venue);
            for (const auto& b : buckets)
                if (b.empty()) throw Error("synth: a venue tier is empty in " + std::to_string(year));
        }
    }

    void build_labs(Rng& rng) {
        const std::size_t n_labs = (spec_.cohort_size + spec_.authors_per_lab - 1) / spec_.authors_per_lab;
        const int senior_last = spec_.cohort_years.first - 1;
        labs_.resize(n_labs);
        for (std::size_t l = 0; l < n_labs; ++l) {
            Lab& lab = labs_[l];
            lab.topic = static_cast<int>(l % static_cast<std::size_t>(spec_.topics));
            lab.country = std::string(kCountries[pick(rng, std::size(kCountries))]);
            for (std::size_t s = 0; s < spec_.seniors_per_lab; ++s) {
                const std::string id = "s" + std::to_string(10000 + l).substr(1) + "_" + std::to_string(1000 + s).substr(1);
                lab.seniors.push_back(make_person(rng, id, lab.country));
            }
            // Debut papers in teams of five fix each senior's first publication year.
            for (std::size_t s = 0; s < lab.seniors.size(); s += 5) {
                const std::size_t end = std::min(lab.seniors.size(), s + 5);
                std::vector<corpus::AuthorRef> team(lab.seniors.begin() + static_cast<std::ptrdiff_t>(s),
                                                    lab.seniors.begin() + static_cast<std::ptrdiff_t>(end));
                const int year = pick_year(rng, spec_.study_period.first, senior_last);
                add_record(rng, year, lab.topic, corpus::VenueTier::C, std::move(team), poisson(rng, 10.0));
            }
        }
    }

    std::array<double, 3> tier_odds(const ClassParams& c) const { return {c.level_c, c.level_b, c.level_a}; }

    void plan_cohort(Rng& rng) {
        const std::size_t n = spec_.cohort_size;
        const auto n_stars = static_cast<std::size_t>(std::llround(spec_.rising_fraction * static_cast<double>(n)));
        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = i;
        shuffle(rng, order);
        cohort_.resize(n);
        for (std::size_t k = 0; k < n_stars; ++k) cohort_[order[k]].star = true;

        for (std::size_t i = 0; i < n; ++i) {
            Planned& a = cohort_[i];
            Rng arng(derive_seed(spec_.seed, static_cast<std::uint64_t>(i)));
            a.id = "c" + std::to_string(100000 + i).substr(1);
            a.lab = i / spec_.authors_per_lab;
            a.first_year = pick_year(arng, spec_.cohort_years.first, spec_.cohort_years.last);
            const Lab& lab = labs_[a.lab];
            a.ref = make_person(arng, a.id, lab.country);
            const ClassParams& cp = a.star ? spec_.rising : spec_.non_rising;

            a.articles = sample_count(arng, cp.articles);
            FeatureParams wd = cp.weighted_degree;
            wd.min = std::max(1.0, wd.min);
            a.weighted_degree = sample_count(arng, wd);

            // Co-author slots spread over the papers, capped by the lab size.
            std::vector<int> slots(static_cast<std::size_t>(a.articles), 0);
            for (int s = 0; s < a.weighted_degree; ++s) ++slots[pick(arng, slots.size())];
            const int cap = static_cast<int>(spec_.seniors_per_lab);
            int kmax = 0;
            a.weighted_degree = 0;
            for (auto& k : slots) {
                k = std::min(k, cap);
                kmax = std::max(kmax, k);
                a.weighted_degree += k;
            }
            // Repeat collaborations turn slots into fewer distinct co-authors.
            const double repeat = std::clamp(1.0 - cp.degree.mean / std::max(cp.weighted_degree.mean, 1e-9), 0.0, 0.99);
            const int repeats = std::binomial_distribution<int>(a.weighted_degree, repeat)(arng);
            a.degree = std::min(cap, std::max(kmax, a.weighted_degree - repeats));

            std::vector<std::size_t> pool(lab.seniors.size());
            for (std::size_t s = 0; s < pool.size(); ++s) pool[s] = s;
            for (int s = 0; s < a.degree; ++s) std::swap(pool[static_cast<std::size_t>(s)], pool[static_cast<std::size_t>(s) + pick(arng, pool.size() - static_cast<std::size_t>(s))]);

            // Citations spread with skewed weights.
            a.citations = sample_count(arng, cp.citations);
            std::vector<double> weights(slots.size());
            for (auto& w : weights) w = std::gamma_distribution<double>(0.7, 1.0)(arng) + 1e-12;
            std::vector<std::int64_t> cites(slots.size(), 0);
            for (std::int64_t c = 0; c < a.citations; ++c) ++cites[weighted_pick(arng, weights)];

            const auto odds = tier_odds(cp);
            std::size_t next = 0;
            const int last_year = a.first_year + spec_.feature_window_years - 1;
            for (std::size_t p = 0; p < slots.size(); ++p) {
                std::vector<corpus::AuthorRef> team{a.ref};
                for (int k = 0; k < slots[p]; ++k) {
                    team.push_back(lab.seniors[pool[next % static_cast<std::size_t>(a.degree)]]);
                    ++next;
                }
                const int year = p == 0 ? a.first_year : pick_year(arng, a.first_year, last_year);
                const auto tier = static_cast<corpus::VenueTier>(weighted_pick(arng, odds));
                a.window_pubs.push_back(add_record(arng, year, lab.topic, tier, std::move(team), cites[p]));
            }
            a.h1 = features::h_index(cites);
            const int dt = spec_.label_window_years - spec_.feature_window_years;
            const FeatureParams g{cp.growth.mean * dt, cp.growth.sigma * dt, std::ceil(cp.growth.min * dt - 1e-9),
                                  std::floor(cp.growth.max * dt + 1e-9)};
            a.steps = sample_count(arng, g);
        }
    }

    // Nudges planned growth so that the pipeline's mean + 3 sigma rule reproduces the planted classes.
    void settle_labels(std::vector<std::string>& warnings) {
        std::set<int> reference(spec_.label_reference_years.begin(), spec_.label_reference_years.end());
        if (reference.empty())
            for (int y = spec_.cohort_years.first; y < spec_.cohort_years.last; ++y) reference.insert(y);
        const double dt = spec_.label_window_years - spec_.feature_window_years;
        for (int iter = 0; iter < 100; ++iter) {
            std::vector<double> rates;
            for (const auto& a : cohort_)
                if (reference.contains(a.first_year)) rates.push_back(a.steps / dt);
            if (rates.size() < 2) return;
            const double thr = stats::mean(rates) + 3.0 * stats::stddev(rates, 0);
            bool changed = false;
            for (auto& a : cohort_) {
                const double g = a.steps / dt;
                if (a.star && !(g >= thr)) {
                    a.steps = static_cast<int>(std::ceil(thr * dt - 1e-9));
                    while (a.steps / dt < thr) ++a.steps;
                    changed = true;
                } else if (!a.star && g >= thr) {
                    while (a.steps > 0 && a.steps / dt >= thr) --a.steps;
                    changed = true;
                }
            }
            if (!changed) return;
        }
        warnings.push_back("synth: planted growth did not settle against the label threshold");
    }

    void add_label_window_papers() {
        for (auto& a : cohort_) {
            Rng arng(derive_seed(spec_.seed, "later/" + a.id));
            const Lab& lab = labs_[a.lab];
            const ClassParams& cp = a.star ? spec_.rising : spec_.non_rising;
            const int h2 = a.h1 + a.steps;
            int q = 0;
            for (auto i : a.window_pubs) q += records_[i].citation_count >= h2 ? 1 : 0;
            const int first = a.first_year + spec_.feature_window_years;
            const int last = a.first_year + spec_.label_window_years - 1;
            // Each added paper carries exactly h2 citations, lifting the h-index to h2 and no further.
            for (int k = q; k < h2; ++k) {
                std::vector<corpus::AuthorRef> team{a.ref};
                const std::size_t extra = 1 + pick(arng, 3);
                std::vector<std::size_t> pool(lab.seniors.size());
                for (std::size_t s = 0; s < pool.size(); ++s) pool[s] = s;
                for (std::size_t s = 0; s < extra; ++s) {
                    std::swap(pool[s], pool[s + pick(arng, pool.size() - s)]);
                    team.push_back(lab.seniors[pool[s]]);
                }
                const auto tier = static_cast<corpus::VenueTier>(weighted_pick(arng, tier_odds(cp)));
                add_record(arng, pick_year(arng, first, last), lab.topic, tier, std::move(team), h2);
            }
        }
    }

    void add_background_papers(Rng& rng) {
        for (std::size_t l = 0; l < labs_.size(); ++l) {
            const Lab& lab = labs_[l];
            for (int year = spec_.cohort_years.first; year <= spec_.study_period.last; ++year) {
                const std::size_t size = 3 + pick(rng, 4);
                std::vector<std::size_t> pool(lab.seniors.size());
                for (std::size_t s = 0; s < pool.size(); ++s) pool[s] = s;
                std::vector<corpus::AuthorRef> team;
                for (std::size_t s = 0; s < size; ++s) {
                    std::swap(pool[s], pool[s + pick(rng, pool.size() - s)]);
                    team.push_back(lab.seniors[pool[s]]);
                }
                const auto tier = static_cast<corpus::VenueTier>(pick(rng, 3));
                add_record(rng, year, lab.topic, tier, std::move(team), poisson(rng, 8.0));
            }
        }
    }
};

} // namespace

SynthCorpus synthesize_corpus(const SynthSpec& spec) {
    spec.validate();
    return Generator(spec).run();
}

std::string truth_csv(const std::vector<TruthRow>& truth) {
    std::string out = "author_id,first_year,label,articles,citations,degree,weighted_degree,h1,h2\n";
    for (const auto& t : truth)
        out += t.author_id + ',' + std::to_string(t.first_year) + ',' + std::to_string(t.label) + ',' +
               std::to_string(t.articles) + ',' + std::to_string(t.citations) + ',' + std::to_string(t.degree) + ',' +
               std::to_string(t.weighted_degree) + ',' + std::to_string(t.h1) + ',' + std::to_string(t.h2) + '\n';
    return out;
}

SynthPaths write_synth(const SynthCorpus& synth, const std::filesystem::path& dir) {
    SynthPaths p{dir / "corpus.jsonl", dir / "sjr.csv", dir / "truth.csv"};
    std::string lines;
    for (const auto& r : synth.records) lines += corpus::to_jsonl_line(r) + '\n';
    io::write_file(p.corpus, lines);
    io::write_file(p.sjr, synth.sjr.to_csv());
    io::write_file(p.truth, truth_csv(synth.truth));
    return p;
}

} // namespace rstar::synth
