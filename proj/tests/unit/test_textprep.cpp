#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "rstar/common.hpp"
#include "rstar/textprep.hpp"

using namespace rstar;
using namespace rstar::text;

namespace {

std::vector<std::string> toks(std::initializer_list<const char*> words) { return {words.begin(), words.end()}; }

std::string join(const std::vector<std::string>& tokens) {
    std::string out;
    for (const auto& t : tokens) out += (out.empty() ? "" : " ") + t;
    return out;
}

} // namespace

TEST(Preprocess, DropsDigitsAndShortWords) {
    const auto d = preprocess("Deep Learning", "AI in 2019!", StopList{});
    EXPECT_EQ(d.tokens, toks({"deep", "learning"}));
}

TEST(Preprocess, OnlyStopwordsGivesNothing) {
    EXPECT_TRUE(preprocess("The and of", "which were their", default_stoplist()).tokens.empty());
}

TEST(Preprocess, SuffixFamilySharesStem) {
    const auto d = preprocess("Networks networking networked", "", StopList{});
    EXPECT_EQ(d.tokens, toks({"network", "network", "network"}));
}

TEST(Preprocess, CustomStopwordsApplyAfterLemmatizing) {
    StopList stop{"model"};
    EXPECT_EQ(preprocess("models model", "", stop).tokens, std::vector<std::string>{});
}

TEST(Preprocess, IdempotentOnItsOwnOutput) {
    const char* texts[] = {"Graph neural networks for link prediction in citation graphs",
                           "Optimizing organizations: studies of classes, boxes and buzzes",
                           "Running, stopped, hopping; the analyses were summarized"};
    for (const char* t : texts) {
        const auto once = preprocess(t, "", default_stoplist());
        EXPECT_EQ(preprocess(join(once.tokens), "", default_stoplist()).tokens, once.tokens) << t;
    }
}

TEST(Lemmatize, DocumentedRules) {
    EXPECT_EQ(lemmatize("organization"), "organize");
    EXPECT_EQ(lemmatize("studies"), "study");
    EXPECT_EQ(lemmatize("classes"), "class");
    EXPECT_EQ(lemmatize("boxes"), "box");
    EXPECT_EQ(lemmatize("models"), "model");
    EXPECT_EQ(lemmatize("analysis"), "analysis");
    EXPECT_EQ(lemmatize("status"), "status");
    EXPECT_EQ(lemmatize("running"), "run");
    EXPECT_EQ(lemmatize("stopped"), "stop");
    EXPECT_EQ(lemmatize("learning"), "learning");
}

TEST(Lemmatize, IsAFixpoint) {
    const char* words[] = {"organizations", "studies", "networked", "hopping", "classes", "buses", "ties", "seeds"};
    for (const char* w : words) EXPECT_EQ(lemmatize(lemmatize(w)), lemmatize(w)) << w;
}

TEST(Ngrams, AdjacentPairs) {
    const auto d = extract_ngrams({"x", toks({"deep", "learning", "model"})}, 2);
    EXPECT_EQ(d.tokens, toks({"deep", "learning", "model", "deep_learning", "learning_model"}));
}

TEST(Ngrams, SingleTokenAndEmpty) {
    EXPECT_EQ(extract_ngrams({"x", toks({"graph"})}, 2).tokens, toks({"graph"}));
    EXPECT_TRUE(extract_ngrams({"x", {}}, 2).tokens.empty());
    EXPECT_EQ(extract_ngrams({"x", toks({"a", "b"})}, 1).tokens, toks({"a", "b"}));
}

TEST(Dtm, SharedTermColumnSum) {
    const std::vector<TokenizedDoc> docs{{"d1", toks({"model", "model", "graph"})}, {"d2", toks({"model", "tree"})}};
    const auto m = build_dtm(docs, 1, 1.0);
    const auto it = std::find(m.vocabulary.begin(), m.vocabulary.end(), "model");
    ASSERT_NE(it, m.vocabulary.end());
    const auto t = static_cast<std::size_t>(it - m.vocabulary.begin());
    EXPECT_EQ(m.count(0, t) + m.count(1, t), 3u);
}

TEST(Dtm, MinDfDropsRareTerms) {
    std::vector<TokenizedDoc> docs;
    for (int i = 0; i < 10; ++i) docs.push_back({"d" + std::to_string(i), toks({"common", "other"})});
    docs[3].tokens.push_back("rare");
    const auto m = build_dtm(docs, 2, 1.0);
    EXPECT_EQ(std::find(m.vocabulary.begin(), m.vocabulary.end(), "rare"), m.vocabulary.end());
}

TEST(Dtm, MaxDfDropsUbiquitousTerms) {
    const std::vector<TokenizedDoc> docs{{"a", toks({"learning", "x"})}, {"b", toks({"learning", "x"})},
                                         {"c", toks({"learning", "y"})}};
    const auto m = build_dtm(docs, 1, 0.5);
    EXPECT_EQ(std::find(m.vocabulary.begin(), m.vocabulary.end(), "learning"), m.vocabulary.end());
    EXPECT_EQ(m.vocabulary, toks({"y"}));
}

TEST(Dtm, RowSumsMatchInVocabularyTokens) {
    std::mt19937_64 rng(2);
    const char* words[] = {"alpha", "beta", "gamma", "delta", "omega", "sigma"};
    std::vector<TokenizedDoc> docs;
    for (int d = 0; d < 30; ++d) {
        TokenizedDoc doc{"d" + std::to_string(d), {}};
        for (int k = 0; k < 12; ++k) doc.tokens.emplace_back(words[rng() % 6]);
        if (d == 7) doc.tokens.emplace_back("hapax");
        docs.push_back(doc);
    }
    const auto m = build_dtm(docs, 2, 0.95);
    for (std::size_t d = 0; d < docs.size(); ++d) {
        std::uint64_t expected = 0;
        for (const auto& t : docs[d].tokens)
            expected += std::binary_search(m.vocabulary.begin(), m.vocabulary.end(), t) ? 1 : 0;
        EXPECT_EQ(m.row_sum(d), expected);
    }
}

TEST(Dtm, PermutingDocsPermutesRows) {
    std::vector<TokenizedDoc> docs{{"a", toks({"x", "y", "y"})}, {"b", toks({"y", "z"})}, {"c", toks({"x", "z", "z"})},
                                   {"d", toks({"x", "y"})}};
    const auto base = build_dtm(docs, 1, 1.0);
    std::vector<std::size_t> order{2, 0, 3, 1};
    std::vector<TokenizedDoc> shuffled;
    for (auto i : order) shuffled.push_back(docs[i]);
    const auto perm = build_dtm(shuffled, 1, 1.0);
    ASSERT_EQ(perm.vocabulary, base.vocabulary);
    for (std::size_t r = 0; r < order.size(); ++r) {
        EXPECT_EQ(perm.doc_ids[r], base.doc_ids[order[r]]);
        for (std::size_t t = 0; t < base.num_terms(); ++t) EXPECT_EQ(perm.count(r, t), base.count(order[r], t));
    }
}

TEST(Dtm, NothingSurvivesThrows) {
    const std::vector<TokenizedDoc> docs{{"a", toks({"x"})}, {"b", toks({"y"})}};
    EXPECT_THROW(build_dtm(docs, 2, 1.0), Error);
    EXPECT_THROW(build_dtm({}, 1, 1.0), Error);
}
