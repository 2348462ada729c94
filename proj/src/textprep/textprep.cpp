#include "rstar/textprep.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <unordered_map>

#include "rstar/common.hpp"
#include "rstar/io.hpp"

namespace rstar::text {

namespace {

constexpr std::string_view kEnglishStopWords[] = {
    "about", "above", "after", "again", "against", "all", "also", "although", "among", "and",
    "another", "any", "are", "aren", "around", "because", "been", "before", "being", "below",
    "between", "both", "but", "can", "cannot", "could", "couldn", "did", "didn", "does",
    "doesn", "doing", "don", "down", "during", "each", "either", "else", "etc", "even",
    "ever", "every", "few", "for", "from", "further", "had", "hadn", "has", "hasn",
    "have", "haven", "having", "her", "here", "hers", "herself", "him", "himself", "his",
    "how", "however", "into", "isn", "its", "itself", "just", "least", "less", "many",
    "may", "might", "more", "most", "much", "must", "mustn", "neither", "nor", "not",
    "now", "off", "once", "one", "only", "other", "others", "our", "ours", "ourselves",
    "out", "over", "own", "per", "same", "several", "shall", "shan", "she", "should",
    "shouldn", "since", "some", "such", "than", "that", "the", "their", "theirs", "them",
    "themselves", "then", "there", "therefore", "these", "they", "this", "those", "though", "three",
    "through", "thus", "too", "two", "under", "until", "upon", "use", "used", "using",
    "very", "via", "was", "wasn", "were", "weren", "what", "when", "where", "whereas",
    "whether", "which", "while", "who", "whom", "whose", "why", "will", "with", "within",
    "without", "won", "would", "wouldn", "yet", "you", "your", "yours", "yourself", "yourselves",
    "onto", "whereby", "wherein", "both", "itself"};

// Nouns a lexical lemmatizer keeps whole; stripping them would merge unrelated concepts.
constexpr std::string_view kIngNouns[] = {
    "learning", "computing", "mining", "clustering", "engineering", "reasoning",
    "processing", "programming", "modeling", "modelling", "planning", "training",
    "scheduling", "ranking", "understanding", "rendering", "tracking", "sampling",
    "forecasting", "filtering", "matching", "labeling", "labelling", "building"};

constexpr std::size_t kMinLength = 3;

bool ends_with(std::string_view w, std::string_view suffix) {
    return w.size() >= suffix.size() && w.substr(w.size() - suffix.size()) == suffix;
}

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

std::string undouble(std::string stem) {
    const auto n = stem.size();
    if (n >= 2 && stem[n - 1] == stem[n - 2] && !is_vowel(stem[n - 1]) && stem[n - 1] != 'l' &&
        stem[n - 1] != 's' && stem[n - 1] != 'z' && n - 1 >= kMinLength)
        stem.pop_back();
    return stem;
}

bool is_ing_noun(std::string_view w) {
    return std::find(std::begin(kIngNouns), std::end(kIngNouns), w) != std::end(kIngNouns);
}

// One rewrite step; returns the input unchanged when no rule applies.
std::string lemmatize_step(const std::string& w) {
    auto strip = [&](std::size_t n) { return w.substr(0, w.size() - n); };
    if (ends_with(w, "ization") && w.size() - 7 >= kMinLength) return strip(7) + "ize";
    if (ends_with(w, "ies") && w.size() - 3 >= kMinLength) return strip(3) + "y";
    if (ends_with(w, "sses")) return strip(2);
    if (ends_with(w, "es") && w.size() - 2 >= kMinLength) {
        const auto stem = strip(2);
        if (ends_with(stem, "s") || ends_with(stem, "x") || ends_with(stem, "z") || ends_with(stem, "ch") ||
            ends_with(stem, "sh"))
            return stem;
    }
    if (ends_with(w, "s") && !ends_with(w, "ss") && !ends_with(w, "us") && !ends_with(w, "is") &&
        w.size() - 1 >= kMinLength)
        return strip(1);
    if (ends_with(w, "ing") && !is_ing_noun(w) && w.size() - 3 >= kMinLength) return undouble(strip(3));
    if (ends_with(w, "ed") && w.size() - 2 >= kMinLength) return undouble(strip(2));
    return w;
}

} // namespace

const StopList& default_stoplist() {
    static const StopList list(std::begin(kEnglishStopWords), std::end(kEnglishStopWords));
    return list;
}

StopList load_stoplist(const std::filesystem::path& path) {
    StopList out;
    const auto content = io::read_file(path);
    std::size_t pos = 0;
    while (pos < content.size()) {
        auto nl = content.find('\n', pos);
        if (nl == std::string::npos) nl = content.size();
        const auto line = io::trim(std::string_view(content).substr(pos, nl - pos));
        pos = nl + 1;
        if (line.empty() || line.front() == '#') continue;
        std::string term(line);
        for (auto& c : term) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        out.insert(std::move(term));
    }
    return out;
}

std::string lemmatize(std::string_view word) {
    std::string current(word);
    for (int guard = 0; guard < 16; ++guard) {
        auto next = lemmatize_step(current);
        if (next == current) break;
        current = std::move(next);
    }
    return current;
}

TokenizedDoc preprocess(std::string_view title, std::string_view abstract, const StopList& stoplist,
                        std::string pub_id) {
    TokenizedDoc doc{std::move(pub_id), {}};
    std::string merged;
    merged.reserve(title.size() + abstract.size() + 1);
    merged.append(title).append(" ").append(abstract);

    std::string word;
    auto flush = [&] {
        if (word.size() >= kMinLength && !stoplist.contains(word)) {
            auto lemma = lemmatize(word);
            if (lemma.size() >= kMinLength && !stoplist.contains(lemma)) doc.tokens.push_back(std::move(lemma));
        }
        word.clear();
    };
    for (char c : merged) {
        const auto u = static_cast<unsigned char>(c);
        // Bytes >= 0x80 (non-ASCII) count as separators: only a-z survive.
        if (u < 0x80 && std::isalpha(u))
            word.push_back(static_cast<char>(std::tolower(u)));
        else
            flush();
    }
    flush();
    return doc;
}

TokenizedDoc extract_ngrams(const TokenizedDoc& doc, int max_n) {
    if (max_n != 1 && max_n != 2) throw Error("extract_ngrams: max_n must be 1 or 2");
    TokenizedDoc out = doc;
    if (max_n == 2 && doc.tokens.size() >= 2) {
        out.tokens.reserve(doc.tokens.size() * 2 - 1);
        for (std::size_t i = 0; i + 1 < doc.tokens.size(); ++i)
            out.tokens.push_back(doc.tokens[i] + "_" + doc.tokens[i + 1]);
    }
    return out;
}

std::uint64_t DocTermMatrix::total_count() const noexcept {
    std::uint64_t s = 0;
    for (auto c : counts) s += c;
    return s;
}

std::uint64_t DocTermMatrix::row_sum(std::size_t doc) const {
    std::uint64_t s = 0;
    for (auto k = row_offsets.at(doc); k < row_offsets.at(doc + 1); ++k) s += counts[k];
    return s;
}

std::uint32_t DocTermMatrix::count(std::size_t doc, std::size_t term) const {
    const auto b = term_index.begin() + static_cast<std::ptrdiff_t>(row_offsets.at(doc));
    const auto e = term_index.begin() + static_cast<std::ptrdiff_t>(row_offsets.at(doc + 1));
    auto it = std::lower_bound(b, e, static_cast<std::uint32_t>(term));
    if (it == e || *it != term) return 0;
    return counts[static_cast<std::size_t>(it - term_index.begin())];
}

DocTermMatrix build_dtm(std::span<const TokenizedDoc> docs, int min_df, double max_df_ratio) {
    if (docs.empty()) throw Error("build_dtm: no documents");
    std::map<std::string, std::uint32_t, std::less<>> df;
    for (const auto& d : docs) {
        std::vector<std::string_view> uniq(d.tokens.begin(), d.tokens.end());
        std::sort(uniq.begin(), uniq.end());
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        for (auto t : uniq) {
            auto it = df.find(t);
            if (it == df.end()) df.emplace(std::string(t), 1);
            else ++it->second;
        }
    }
    const double max_df = max_df_ratio * static_cast<double>(docs.size());
    DocTermMatrix dtm;
    std::unordered_map<std::string_view, std::uint32_t> column;
    std::uint32_t max_seen = 0;
    for (const auto& [term, f] : df) {
        max_seen = std::max(max_seen, f);
        if (static_cast<int>(f) >= min_df && static_cast<double>(f) <= max_df) {
            column.emplace(term, static_cast<std::uint32_t>(dtm.vocabulary.size()));
            dtm.vocabulary.push_back(term);
        }
    }
    if (dtm.vocabulary.empty())
        throw Error("build_dtm: empty vocabulary after filtering (docs=" + std::to_string(docs.size()) +
                    ", distinct terms=" + std::to_string(df.size()) + ", max df=" + std::to_string(max_seen) +
                    ", min_df=" + std::to_string(min_df) + ", max_df=" + io::format_double(max_df) + ")");

    dtm.row_offsets.reserve(docs.size() + 1);
    dtm.row_offsets.push_back(0);
    std::map<std::uint32_t, std::uint32_t> row;
    for (const auto& d : docs) {
        row.clear();
        for (const auto& t : d.tokens) {
            auto it = column.find(t);
            if (it != column.end()) ++row[it->second];
        }
        for (auto [term, c] : row) {
            dtm.term_index.push_back(term);
            dtm.counts.push_back(c);
        }
        dtm.doc_ids.push_back(d.pub_id);
        dtm.row_offsets.push_back(dtm.term_index.size());
    }
    return dtm;
}

std::string dtm_triplets_csv(const DocTermMatrix& dtm) {
    std::string out = "doc_id,term,count\n";
    for (std::size_t d = 0; d < dtm.num_docs(); ++d)
        for (auto k = dtm.row_offsets[d]; k < dtm.row_offsets[d + 1]; ++k)
            out += io::csv_escape(dtm.doc_ids[d]) + "," + dtm.vocabulary[dtm.term_index[k]] + "," +
                   std::to_string(dtm.counts[k]) + "\n";
    return out;
}

std::string dtm_vocabulary(const DocTermMatrix& dtm) {
    std::string out;
    for (const auto& t : dtm.vocabulary) out += t + "\n";
    return out;
}

} // namespace rstar::text
