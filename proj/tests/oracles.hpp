#pragma once

// Independent reference implementations used by the unit and acceptance tests.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <queue>
#include <random>
#include <string>
#include <vector>

#include "rstar/network.hpp"
#include "rstar/textprep.hpp"
#include "rstar/topics.hpp"

namespace oracle {

using Adjacency = std::vector<std::vector<int>>;

inline Adjacency adjacency(const rstar::network::CoauthorGraph& g) {
    Adjacency adj(g.num_nodes());
    for (std::uint32_t v = 0; v < g.num_nodes(); ++v)
        for (const auto& nb : g.neighbors(v)) adj[v].push_back(static_cast<int>(nb.node));
    return adj;
}

inline std::vector<int> bfs_distances(const Adjacency& adj, int s) {
    std::vector<int> dist(adj.size(), -1);
    std::queue<int> q;
    dist[static_cast<std::size_t>(s)] = 0;
    q.push(s);
    while (!q.empty()) {
        const int u = q.front();
        q.pop();
        for (int w : adj[static_cast<std::size_t>(u)])
            if (dist[static_cast<std::size_t>(w)] < 0) {
                dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(u)] + 1;
                q.push(w);
            }
    }
    return dist;
}

// Lists every shortest s-t path explicitly and counts interior visits per node.
inline std::vector<double> betweenness_by_enumeration(const Adjacency& adj) {
    const std::size_t n = adj.size();
    std::vector<double> bc(n, 0.0);
    if (n < 3) return bc;
    std::vector<std::vector<int>> dist(n);
    for (std::size_t s = 0; s < n; ++s) dist[s] = bfs_distances(adj, static_cast<int>(s));
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t t = s + 1; t < n; ++t) {
            if (dist[s][t] < 0) continue;
            std::vector<std::vector<int>> paths;
            std::vector<int> path{static_cast<int>(s)};
            std::function<void(int)> walk = [&](int u) {
                if (u == static_cast<int>(t)) {
                    paths.push_back(path);
                    return;
                }
                for (int w : adj[static_cast<std::size_t>(u)]) {
                    // stay on geodesics: each step gets one closer to t
                    if (dist[t][static_cast<std::size_t>(w)] == dist[t][static_cast<std::size_t>(u)] - 1) {
                        path.push_back(w);
                        walk(w);
                        path.pop_back();
                    }
                }
            };
            walk(static_cast<int>(s));
            for (const auto& p : paths)
                for (std::size_t i = 1; i + 1 < p.size(); ++i)
                    bc[static_cast<std::size_t>(p[i])] += 1.0 / static_cast<double>(paths.size());
        }
    }
    const double norm = static_cast<double>(n - 1) * static_cast<double>(n - 2) / 2.0;
    for (auto& v : bc) v /= norm;
    return bc;
}

inline double clustering(const Adjacency& adj, int v) {
    const auto& nb = adj[static_cast<std::size_t>(v)];
    if (nb.size() < 2) return 0.0;
    int links = 0;
    for (std::size_t i = 0; i < nb.size(); ++i)
        for (std::size_t j = i + 1; j < nb.size(); ++j) {
            const auto& a = adj[static_cast<std::size_t>(nb[i])];
            links += std::find(a.begin(), a.end(), nb[j]) != a.end() ? 1 : 0;
        }
    return 2.0 * links / (static_cast<double>(nb.size()) * static_cast<double>(nb.size() - 1));
}

/// Random G(n, p) with integer weights in [1, 4] added through the public builder.
inline rstar::network::CoauthorGraph random_graph(std::mt19937_64& rng, int n, double p) {
    rstar::network::GraphBuilder b;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> w(1, 4);
    for (int i = 0; i < n; ++i) b.add_node("n" + std::to_string(100 + i));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (u(rng) < p)
                b.add_collaboration("n" + std::to_string(100 + i), "n" + std::to_string(100 + j),
                                    static_cast<std::uint32_t>(w(rng)));
    return b.build();
}

inline int h_index_sort_scan(std::vector<std::int64_t> xs) {
    std::sort(xs.begin(), xs.end(), std::greater<>());
    int h = 0;
    while (h < static_cast<int>(xs.size()) && xs[static_cast<std::size_t>(h)] >= h + 1) ++h;
    return h;
}

inline double pairwise_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
    double wins = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] != 1) continue;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j] != 0) continue;
            ++pairs;
            wins += scores[i] > scores[j] ? 1.0 : scores[i] == scores[j] ? 0.5 : 0.0;
        }
    }
    return wins / static_cast<double>(pairs);
}

/// 20 documents over {a..e} and 20 over {f..j}; each document has `length` tokens.
inline rstar::text::DocTermMatrix two_topic_corpus(std::mt19937_64& rng, int length = 30) {
    const char* halves[2][5] = {{"aaa", "bbb", "ccc", "ddd", "eee"}, {"fff", "ggg", "hhh", "iii", "jjj"}};
    std::vector<rstar::text::TokenizedDoc> docs;
    for (int d = 0; d < 40; ++d) {
        rstar::text::TokenizedDoc doc{"doc" + std::to_string(100 + d), {}};
        for (int k = 0; k < length; ++k) doc.tokens.emplace_back(halves[d / 20][rng() % 5]);
        docs.push_back(std::move(doc));
    }
    return rstar::text::build_dtm(docs, 1, 1.0);
}

/// Best match between the two topics and the two vocabulary halves; the score is the smaller of
/// the two topics' mass on their matched half.
inline double two_topic_purity(const rstar::topics::LdaModel& m) {
    auto mass = [&](std::size_t topic, char first, char last) {
        double s = 0.0;
        for (std::size_t w = 0; w < m.vocabulary.size(); ++w)
            if (m.vocabulary[w][0] >= first && m.vocabulary[w][0] <= last) s += m.topic_word(topic, w);
        return s;
    };
    const double straight = std::min(mass(0, 'a', 'e'), mass(1, 'f', 'j'));
    const double swapped = std::min(mass(0, 'f', 'j'), mass(1, 'a', 'e'));
    return std::max(straight, swapped);
}

} // namespace oracle
