#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "rstar/network.hpp"
#include "test_support.hpp"

using namespace rstar;
using namespace rstar::network;
using rstar::testing::paper;

namespace {

CoauthorGraph graph(const std::vector<std::pair<std::string, std::string>>& edges,
                    const std::vector<std::string>& isolated = {}) {
    GraphBuilder b;
    for (const auto& [u, v] : edges) b.add_collaboration(u, v);
    for (const auto& v : isolated) b.add_node(v);
    return b.build();
}

double bc(const CoauthorGraph& g, const std::string& v) { return betweenness_by_author(g).at(v); }

} // namespace

TEST(BuildGraph, PaperIsAClique) {
    const corpus::Corpus c({paper("p", 2008, {"A", "B", "C"})});
    const auto g = build_graph(c, {2006, 2010});
    EXPECT_EQ(g.num_nodes(), 3u);
    EXPECT_EQ(g.num_edges(), 3u);
    for (const auto& e : g.edges()) EXPECT_EQ(e.weight, 1u);
}

TEST(BuildGraph, RepeatedCollaborationAddsWeight) {
    const corpus::Corpus c({paper("p1", 2007, {"A", "B"}), paper("p2", 2008, {"A", "B"}), paper("p3", 2009, {"B", "A", "C"})});
    const auto g = build_graph(c, {2006, 2010});
    EXPECT_EQ(g.weight(g.require("A"), g.require("B")), 3u);
    EXPECT_EQ(g.weight(g.require("A"), g.require("C")), 1u);
}

TEST(BuildGraph, OutsideWindowIgnored) {
    const corpus::Corpus c({paper("p1", 2007, {"A", "B"}), paper("p2", 2012, {"A", "C"})});
    const auto g = build_graph(c, {2006, 2010});
    EXPECT_FALSE(g.index_of("C").has_value());
    EXPECT_EQ(g.num_edges(), 1u);
}

TEST(BuildGraph, PublicationOrderDoesNotMatter) {
    std::mt19937_64 rng(21);
    std::vector<corpus::PublicationRecord> recs;
    for (int i = 0; i < 60; ++i) {
        std::vector<std::string> authors;
        for (int k = 0; k < 3; ++k) authors.push_back("a" + std::to_string(rng() % 15));
        std::sort(authors.begin(), authors.end());
        authors.erase(std::unique(authors.begin(), authors.end()), authors.end());
        recs.push_back(paper("p" + std::to_string(i), 2006 + static_cast<int>(rng() % 5), authors));
    }
    const auto base = build_graph(corpus::Corpus(recs), {2006, 2010});
    for (int rep = 0; rep < 5; ++rep) {
        std::shuffle(recs.begin(), recs.end(), rng);
        EXPECT_TRUE(build_graph(corpus::Corpus(recs), {2006, 2010}) == base);
    }
}

TEST(DegreeCentrality, PathStarAndComplete) {
    const auto path = graph({{"A", "B"}, {"B", "C"}});
    EXPECT_DOUBLE_EQ(degree_centrality(path, "B"), 1.0);
    EXPECT_DOUBLE_EQ(degree_centrality(path, "A"), 0.5);
    const auto iso = graph({{"A", "B"}}, {"Z"});
    EXPECT_DOUBLE_EQ(degree_centrality(iso, "Z"), 0.0);
    std::vector<std::pair<std::string, std::string>> k5;
    for (char a = 'A'; a <= 'E'; ++a)
        for (char b = static_cast<char>(a + 1); b <= 'E'; ++b) k5.emplace_back(std::string(1, a), std::string(1, b));
    const auto complete = graph(k5);
    for (const auto& v : complete.nodes()) EXPECT_DOUBLE_EQ(degree_centrality(complete, v), 1.0);
}

TEST(WeightedDegree, PlainAndNormalized) {
    GraphBuilder b;
    b.add_collaboration("V", "A", 3);
    b.add_collaboration("V", "B", 1);
    b.add_node("Z");
    const auto g = b.build();
    EXPECT_DOUBLE_EQ(weighted_degree(g, "V", true), 2.0);
    EXPECT_DOUBLE_EQ(weighted_degree(g, "V", false), 4.0);
    EXPECT_DOUBLE_EQ(weighted_degree(g, "Z", true), 0.0);
    EXPECT_DOUBLE_EQ(weighted_degree(g, "Z", false), 0.0);
}

TEST(Clustering, TriangleStarAndPartial) {
    const auto tri = graph({{"A", "B"}, {"B", "C"}, {"A", "C"}});
    for (const auto& v : tri.nodes()) EXPECT_DOUBLE_EQ(clustering_coefficient(tri, v), 1.0);
    const auto star = graph({{"c", "x"}, {"c", "y"}, {"c", "z"}});
    EXPECT_DOUBLE_EQ(clustering_coefficient(star, "c"), 0.0);
    const auto partial = graph({{"V", "A"}, {"V", "B"}, {"V", "C"}, {"A", "B"}});
    EXPECT_DOUBLE_EQ(clustering_coefficient(partial, "V"), 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(clustering_coefficient(partial, "C"), 0.0);
}

TEST(Betweenness, PathCompleteAndStar) {
    const auto path = graph({{"A", "B"}, {"B", "C"}});
    EXPECT_DOUBLE_EQ(bc(path, "B"), 1.0);
    EXPECT_DOUBLE_EQ(bc(path, "A"), 0.0);
    EXPECT_DOUBLE_EQ(bc(path, "C"), 0.0);
    const auto k4 = graph({{"A", "B"}, {"A", "C"}, {"A", "D"}, {"B", "C"}, {"B", "D"}, {"C", "D"}});
    for (const auto& v : k4.nodes()) EXPECT_DOUBLE_EQ(bc(k4, v), 0.0);
    const auto star = graph({{"c", "l1"}, {"c", "l2"}, {"c", "l3"}, {"c", "l4"}});
    EXPECT_DOUBLE_EQ(bc(star, "c"), 1.0);
}

TEST(Betweenness, WeightsDoNotChangeShortestPaths) {
    GraphBuilder heavy;
    heavy.add_collaboration("A", "B", 9);
    heavy.add_collaboration("B", "C", 1);
    heavy.add_collaboration("A", "C", 1);
    heavy.add_collaboration("C", "D", 5);
    const auto plain = graph({{"A", "B"}, {"B", "C"}, {"A", "C"}, {"C", "D"}});
    EXPECT_EQ(betweenness_centrality(heavy.build()), betweenness_centrality(plain));
}

TEST(Betweenness, MatchesPathEnumerationOnRandomGraphs) {
    std::mt19937_64 rng(99);
    for (int rep = 0; rep < 20; ++rep) {
        const auto g = oracle::random_graph(rng, 5 + static_cast<int>(rng() % 20), 0.2);
        const auto fast = betweenness_centrality(g);
        const auto slow = oracle::betweenness_by_enumeration(oracle::adjacency(g));
        ASSERT_EQ(fast.size(), slow.size());
        for (std::size_t v = 0; v < fast.size(); ++v) EXPECT_NEAR(fast[v], slow[v], 1e-9);
    }
}

TEST(Betweenness, ThreadCountDoesNotChangeBits) {
    std::mt19937_64 rng(7);
    const auto g = oracle::random_graph(rng, 40, 0.15);
    EXPECT_EQ(betweenness_centrality(g, 1), betweenness_centrality(g, 4));
}

TEST(Degree, AddingAnEdgeNeverLowersCentrality) {
    std::mt19937_64 rng(13);
    for (int rep = 0; rep < 20; ++rep) {
        const auto g = oracle::random_graph(rng, 12, 0.2);
        GraphBuilder b;
        for (const auto& v : g.nodes()) b.add_node(v);
        for (const auto& e : g.edges()) b.add_collaboration(g.nodes()[e.u], g.nodes()[e.v], e.weight);
        const auto& u = g.nodes()[rng() % g.num_nodes()];
        const auto& v = g.nodes()[rng() % g.num_nodes()];
        b.add_collaboration(u, v);
        const auto h = b.build();
        EXPECT_GE(degree_centrality(h, u), degree_centrality(g, u));
        EXPECT_GE(degree_centrality(h, v), degree_centrality(g, v));
    }
}

TEST(Metrics, CsvAndIsolatedListing) {
    const auto g = graph({{"A", "B"}}, {"Z"});
    EXPECT_EQ(isolated_nodes(g), "Z\n");
    EXPECT_EQ(edges_csv(g), "u,v,weight\nA,B,1\n");
    const auto m = compute_metrics(g);
    ASSERT_EQ(m.size(), 3u);
    EXPECT_EQ(m[0].author_id, "A");
    EXPECT_EQ(m[0].degree, 1u);
}
