#include "rstar/topics.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "rstar/io.hpp"
#include "rstar/parallel.hpp"
#include "rstar/rng.hpp"

namespace rstar::topics {

std::optional<std::size_t> LdaModel::doc_index(std::string_view doc_id) const {
    if (doc_index_.size() != doc_ids.size()) {
        // Hand-assembled model without an index.
        auto it = std::find(doc_ids.begin(), doc_ids.end(), doc_id);
        if (it == doc_ids.end()) return std::nullopt;
        return static_cast<std::size_t>(it - doc_ids.begin());
    }
    auto it = doc_index_.find(std::string(doc_id));
    if (it == doc_index_.end()) return std::nullopt;
    return it->second;
}

void LdaModel::rebuild_index() {
    doc_index_.clear();
    for (std::size_t i = 0; i < doc_ids.size(); ++i) doc_index_.emplace(doc_ids[i], i);
}

namespace {

void normalize(std::span<double> row) {
    double s = 0.0;
    for (double v : row) s += v;
    for (double& v : row) v /= s;
}

} // namespace

LdaModel fit_lda(const text::DocTermMatrix& dtm, const LdaParams& params, const SweepObserver& observer) {
    const int K = params.topics;
    if (K < 1) throw Error("fit_lda: topic count must be at least 1");
    if (params.iterations < 1) throw Error("fit_lda: iterations must be at least 1");
    if (params.beta <= 0.0) throw Error("fit_lda: beta must be positive");
    if (dtm.num_docs() == 0) throw Error("fit_lda: document-term matrix is empty");
    const std::size_t V = dtm.num_terms();
    if (static_cast<std::size_t>(K) > V)
        throw Error("fit_lda: topic count " + std::to_string(K) + " exceeds vocabulary size " + std::to_string(V));
    const std::size_t D = dtm.num_docs();
    const double alpha = params.effective_alpha();
    const double beta = params.beta;
    const auto Ku = static_cast<std::size_t>(K);

    // Expand counts into a flat token stream grouped by document.
    std::vector<std::uint32_t> words;
    std::vector<std::size_t> doc_start(D + 1, 0);
    std::vector<std::uint32_t> doc_length(D, 0);
    words.reserve(dtm.total_count());
    for (std::size_t d = 0; d < D; ++d) {
        doc_start[d] = words.size();
        for (auto k = dtm.row_offsets[d]; k < dtm.row_offsets[d + 1]; ++k)
            words.insert(words.end(), dtm.counts[k], dtm.term_index[k]);
        doc_length[d] = static_cast<std::uint32_t>(words.size() - doc_start[d]);
    }
    doc_start[D] = words.size();

    std::vector<std::int32_t> assign(words.size());
    std::vector<std::int32_t> ndk(D * Ku, 0);
    std::vector<std::int32_t> nwk(V * Ku, 0);
    std::vector<std::int32_t> nk(Ku, 0);

    Rng rng(params.seed);
    for (std::size_t d = 0; d < D; ++d) {
        for (auto i = doc_start[d]; i < doc_start[d + 1]; ++i) {
            const auto k = static_cast<std::int32_t>(uniform_index(rng, Ku));
            assign[i] = k;
            ++ndk[d * Ku + k];
            ++nwk[words[i] * Ku + k];
            ++nk[k];
        }
    }

    const double vbeta = static_cast<double>(V) * beta;
    std::vector<double> cumulative(Ku);
    std::vector<double> inv_denom(Ku);
    for (std::size_t k = 0; k < Ku; ++k) inv_denom[k] = 1.0 / (nk[k] + vbeta);
    for (int sweep = 1; sweep <= params.iterations; ++sweep) {
        for (std::size_t d = 0; d < D; ++d) {
            std::int32_t* theta = &ndk[d * Ku];
            for (auto i = doc_start[d]; i < doc_start[d + 1]; ++i) {
                const auto w = words[i];
                std::int32_t* phi = &nwk[w * Ku];
                const auto old = assign[i];
                --theta[old];
                --phi[old];
                --nk[old];
                inv_denom[old] = 1.0 / (nk[old] + vbeta);
                double total = 0.0;
                for (std::size_t k = 0; k < Ku; ++k) {
                    total += (theta[k] + alpha) * (phi[k] + beta) * inv_denom[k];
                    cumulative[k] = total;
                }
                const double u = uniform01(rng) * total;
                std::size_t k = 0;
                while (k + 1 < Ku && cumulative[k] <= u) ++k;
                assign[i] = static_cast<std::int32_t>(k);
                ++theta[k];
                ++phi[k];
                ++nk[k];
                inv_denom[k] = 1.0 / (nk[k] + vbeta);
            }
        }
        if (observer) observer(sweep, GibbsCounts{K, V, ndk, nwk, nk, doc_length});
    }

    LdaModel model;
    model.topics = K;
    model.alpha = alpha;
    model.beta = beta;
    model.seed = params.seed;
    model.iterations = params.iterations;
    model.vocabulary = dtm.vocabulary;
    model.doc_ids = dtm.doc_ids;
    model.topic_word = Matrix(Ku, V);
    for (std::size_t k = 0; k < Ku; ++k) {
        for (std::size_t w = 0; w < V; ++w)
            model.topic_word(k, w) = (nwk[w * Ku + k] + beta) / (nk[k] + vbeta);
        normalize(model.topic_word.row(k));
    }
    model.doc_topic = Matrix(D, Ku);
    for (std::size_t d = 0; d < D; ++d) {
        for (std::size_t k = 0; k < Ku; ++k)
            model.doc_topic(d, k) = (ndk[d * Ku + k] + alpha) / (doc_length[d] + K * alpha);
        normalize(model.doc_topic.row(d));
    }
    model.rebuild_index();
    return model;
}

double perplexity(const LdaModel& model, const text::DocTermMatrix& dtm) {
    if (dtm.vocabulary != model.vocabulary) throw Error("perplexity: vocabulary does not match the model");
    const auto K = static_cast<std::size_t>(model.topics);
    const std::vector<double> uniform(K, 1.0 / static_cast<double>(K));
    double loglik = 0.0;
    std::uint64_t tokens = 0;
    for (std::size_t d = 0; d < dtm.num_docs(); ++d) {
        const auto idx = model.doc_index(dtm.doc_ids[d]);
        const std::span<const double> theta = idx ? model.doc_topic.row(*idx) : std::span<const double>(uniform);
        for (auto k = dtm.row_offsets[d]; k < dtm.row_offsets[d + 1]; ++k) {
            const auto w = dtm.term_index[k];
            double p = 0.0;
            for (std::size_t t = 0; t < K; ++t) p += theta[t] * model.topic_word(t, w);
            loglik += dtm.counts[k] * std::log(p);
            tokens += dtm.counts[k];
        }
    }
    if (tokens == 0) throw Error("perplexity: document-term matrix has no tokens");
    return std::exp(-loglik / static_cast<double>(tokens));
}

std::vector<KSweepPoint> k_sweep(const text::DocTermMatrix& dtm, std::span<const int> candidates,
                                 const LdaParams& base, unsigned threads) {
    std::vector<KSweepPoint> out(candidates.size());
    parallel_for(candidates.size(), threads, [&](std::size_t i) {
        LdaParams p = base;
        p.topics = candidates[i];
        p.seed = derive_seed(base.seed, static_cast<std::uint64_t>(candidates[i]));
        const auto model = fit_lda(dtm, p);
        out[i] = {candidates[i], perplexity(model, dtm)};
    });
    return out;
}

DisciplinaryProfile author_profile(const LdaModel& model, std::span<const std::string> pub_ids,
                                   std::string author_id) {
    if (pub_ids.empty()) throw Error("author_profile: empty publication list for author '" + author_id + "'");
    const auto K = static_cast<std::size_t>(model.topics);
    // Sum in sorted row order so the result does not depend on the order of pub_ids.
    std::vector<std::size_t> rows;
    rows.reserve(pub_ids.size());
    for (const auto& id : pub_ids) {
        const auto idx = model.doc_index(id);
        if (!idx) throw Error("author_profile: publication '" + id + "' is not in the topic model");
        rows.push_back(*idx);
    }
    std::sort(rows.begin(), rows.end());
    std::vector<double> dist(K, 0.0);
    for (auto r : rows)
        for (std::size_t k = 0; k < K; ++k) dist[k] += model.doc_topic(r, k);
    for (auto& v : dist) v /= static_cast<double>(rows.size());
    normalize(dist);
    return {std::move(author_id), std::move(dist)};
}

std::size_t dominant_topic(std::span<const double> distribution) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < distribution.size(); ++k)
        if (distribution[k] > distribution[best]) best = k;
    return best;
}

std::string model_to_json(const LdaModel& model) {
    nlohmann::ordered_json j;
    j["K"] = model.topics;
    j["alpha"] = model.alpha;
    j["beta"] = model.beta;
    j["seed"] = model.seed;
    j["iterations"] = model.iterations;
    j["vocabulary"] = model.vocabulary;
    j["doc_ids"] = model.doc_ids;
    auto rows = [](const Matrix& m) {
        auto arr = nlohmann::ordered_json::array();
        for (std::size_t r = 0; r < m.rows(); ++r) {
            const auto row = m.row(r);
            arr.push_back(std::vector<double>(row.begin(), row.end()));
        }
        return arr;
    };
    j["topic_word"] = rows(model.topic_word);
    j["doc_topic"] = rows(model.doc_topic);
    return j.dump();
}

LdaModel model_from_json(std::string_view text) {
    LdaModel m;
    try {
        const auto j = nlohmann::json::parse(text);
        m.topics = j.at("K").get<int>();
        m.alpha = j.at("alpha").get<double>();
        m.beta = j.at("beta").get<double>();
        m.seed = j.at("seed").get<std::uint64_t>();
        m.iterations = j.at("iterations").get<int>();
        m.vocabulary = j.at("vocabulary").get<std::vector<std::string>>();
        m.doc_ids = j.at("doc_ids").get<std::vector<std::string>>();
        for (const auto& row : j.at("topic_word")) m.topic_word.append_row(row.get<std::vector<double>>());
        for (const auto& row : j.at("doc_topic")) m.doc_topic.append_row(row.get<std::vector<double>>());
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("model_from_json: ") + e.what());
    }
    if (m.topic_word.rows() != static_cast<std::size_t>(m.topics) || m.doc_topic.rows() != m.doc_ids.size())
        throw Error("model_from_json: inconsistent dimensions");
    m.rebuild_index();
    return m;
}

std::string profiles_csv(std::span<const DisciplinaryProfile> profiles, int topics) {
    std::string out = "author_id";
    for (int k = 0; k < topics; ++k) out += ",t" + std::to_string(k);
    out += "\n";
    for (const auto& p : profiles) {
        out += io::csv_escape(p.author_id);
        for (double v : p.distribution) out += "," + io::format_double(v);
        out += "\n";
    }
    return out;
}

} // namespace rstar::topics
