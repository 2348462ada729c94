#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rstar::text {

using StopList = std::set<std::string, std::less<>>;

/// Built-in English stop-list.
const StopList& default_stoplist();

/// One term per line (UTF-8); blank lines and lines starting with '#' are skipped.
StopList load_stoplist(const std::filesystem::path& path);

struct TokenizedDoc {
    std::string pub_id;
    std::vector<std::string> tokens;

    friend bool operator==(const TokenizedDoc&, const TokenizedDoc&) = default;
};

/// Rule-based suffix stripper applied to a fixpoint, so lemmatize(lemmatize(w)) == lemmatize(w).
///   -ization -> -ize, -ies -> -y, -sses -> -ss, -(s|x|z|ch|sh)es -> drop "es",
///   -s (not -ss/-us/-is) -> drop, -ing / -ed -> drop (undoubling a final consonant pair).
/// Stems shorter than three letters are never produced. A short list of nouns ending in -ing
/// ("learning", "clustering", ...) is left intact.
std::string lemmatize(std::string_view word);

/// Merge title and abstract, lowercase, split on non-alphabetic characters, drop words shorter
/// than three letters and stop words, lemmatize, then re-apply both filters to the lemmas.
TokenizedDoc preprocess(std::string_view title, std::string_view abstract, const StopList& stoplist,
                        std::string pub_id = {});

/// Appends adjacent-pair bigrams ("a_b") after the unigrams when max_n == 2.
TokenizedDoc extract_ngrams(const TokenizedDoc& doc, int max_n = 2);

/// Sparse document-term counts in compressed-row form.
struct DocTermMatrix {
    std::vector<std::string> vocabulary; ///< ascending, unique
    std::vector<std::string> doc_ids;
    std::vector<std::size_t> row_offsets; ///< size doc_ids.size() + 1
    std::vector<std::uint32_t> term_index;
    std::vector<std::uint32_t> counts;

    [[nodiscard]] std::size_t num_docs() const noexcept { return doc_ids.size(); }
    [[nodiscard]] std::size_t num_terms() const noexcept { return vocabulary.size(); }
    [[nodiscard]] std::uint64_t total_count() const noexcept;
    [[nodiscard]] std::uint64_t row_sum(std::size_t doc) const;
    /// Dense lookup; O(log row length).
    [[nodiscard]] std::uint32_t count(std::size_t doc, std::size_t term) const;
};

/// Keeps terms whose document frequency lies in [min_df, max_df_ratio * |docs|].
/// Throws when docs is empty or no term survives.
DocTermMatrix build_dtm(std::span<const TokenizedDoc> docs, int min_df = 2, double max_df_ratio = 0.95);

/// Triplet CSV with header doc_id,term,count.
std::string dtm_triplets_csv(const DocTermMatrix& dtm);
/// One vocabulary term per line.
std::string dtm_vocabulary(const DocTermMatrix& dtm);

} // namespace rstar::text
