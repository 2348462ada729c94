#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rstar/matrix.hpp"
#include "rstar/textprep.hpp"

namespace rstar::topics {

struct LdaParams {
    int topics = 8;
    /// Symmetric document-topic prior; a non-positive value selects 50 / topics.
    double alpha = 0.0;
    double beta = 0.01;
    int iterations = 500;
    std::uint64_t seed = 0;

    [[nodiscard]] double effective_alpha() const noexcept { return alpha > 0.0 ? alpha : 50.0 / topics; }
};

struct LdaModel {
    int topics = 0;
    double alpha = 0.0;
    double beta = 0.0;
    std::uint64_t seed = 0;
    int iterations = 0;
    std::vector<std::string> vocabulary;
    std::vector<std::string> doc_ids;
    Matrix topic_word; ///< topics x vocabulary
    Matrix doc_topic;  ///< docs x topics

    [[nodiscard]] std::optional<std::size_t> doc_index(std::string_view doc_id) const;
    void rebuild_index();

    friend bool operator==(const LdaModel& a, const LdaModel& b) {
        return a.topics == b.topics && a.alpha == b.alpha && a.beta == b.beta && a.seed == b.seed &&
               a.iterations == b.iterations && a.vocabulary == b.vocabulary && a.doc_ids == b.doc_ids &&
               a.topic_word == b.topic_word && a.doc_topic == b.doc_topic;
    }

private:
    std::unordered_map<std::string, std::size_t> doc_index_;
};

/// Sampler count tables exposed to sweep observers.
struct GibbsCounts {
    int topics = 0;
    std::size_t vocabulary = 0;
    std::span<const std::int32_t> doc_topic;   ///< docs x topics
    std::span<const std::int32_t> word_topic;  ///< vocabulary x topics
    std::span<const std::int32_t> topic_total; ///< topics
    std::span<const std::uint32_t> doc_length; ///< tokens per document
};

using SweepObserver = std::function<void(int sweep, const GibbsCounts&)>;

/// Collapsed Gibbs sampler; the point estimate comes from the final sweep's counts.
/// Throws when topics < 1, iterations < 1, the matrix has no documents, or topics exceeds
/// the vocabulary size.
LdaModel fit_lda(const text::DocTermMatrix& dtm, const LdaParams& params, const SweepObserver& observer = {});

/// exp(-log-likelihood / tokens). Documents unknown to the model use a uniform topic mixture.
double perplexity(const LdaModel& model, const text::DocTermMatrix& dtm);

struct KSweepPoint {
    int topics = 0;
    double perplexity = 0.0;
};

/// Fits one model per candidate topic count (seeds derived per candidate) and reports training perplexity.
std::vector<KSweepPoint> k_sweep(const text::DocTermMatrix& dtm, std::span<const int> candidates,
                                 const LdaParams& base, unsigned threads = 1);

struct DisciplinaryProfile {
    std::string author_id;
    std::vector<double> distribution;
};

/// Arithmetic mean of the publications' topic rows, renormalized to sum to one.
DisciplinaryProfile author_profile(const LdaModel& model, std::span<const std::string> pub_ids,
                                   std::string author_id = {});

/// Argmax with ties going to the lowest index.
std::size_t dominant_topic(std::span<const double> distribution);
inline std::size_t dominant_topic(const DisciplinaryProfile& p) { return dominant_topic(p.distribution); }

std::string model_to_json(const LdaModel& model);
LdaModel model_from_json(std::string_view json);
/// CSV author_id,t0..t{K-1}.
std::string profiles_csv(std::span<const DisciplinaryProfile> profiles, int topics);

} // namespace rstar::topics
