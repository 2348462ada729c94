#include <algorithm>

#include "rstar/io.hpp"
#include "rstar/network.hpp"
#include "rstar/parallel.hpp"

namespace rstar::network {

std::size_t CoauthorGraph::num_edges() const noexcept {
    std::size_t twice = 0;
    for (const auto& adj : adjacency_) twice += adj.size();
    return twice / 2;
}

std::optional<std::uint32_t> CoauthorGraph::index_of(std::string_view author_id) const {
    auto it = index_.find(std::string(author_id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::uint32_t CoauthorGraph::require(std::string_view author_id) const {
    const auto idx = index_of(author_id);
    if (!idx) throw Error("network: author '" + std::string(author_id) + "' is not in the graph");
    return *idx;
}

std::uint32_t CoauthorGraph::weight(std::uint32_t u, std::uint32_t v) const {
    const auto& adj = adjacency_.at(u);
    auto it = std::lower_bound(adj.begin(), adj.end(), v, [](const Neighbor& n, std::uint32_t x) { return n.node < x; });
    return (it != adj.end() && it->node == v) ? it->weight : 0;
}

std::vector<Edge> CoauthorGraph::edges() const {
    std::vector<Edge> out;
    for (std::uint32_t u = 0; u < adjacency_.size(); ++u)
        for (const auto& n : adjacency_[u])
            if (u < n.node) out.push_back({u, n.node, n.weight});
    return out;
}

void GraphBuilder::add_node(const std::string& author_id) { adjacency_.try_emplace(author_id); }

void GraphBuilder::add_collaboration(const std::string& a, const std::string& b, std::uint32_t count) {
    add_node(a);
    add_node(b);
    if (a == b || count == 0) return;
    adjacency_[a][b] += count;
    adjacency_[b][a] += count;
}

void GraphBuilder::add_publication(std::span<const corpus::AuthorRef> authors) {
    for (std::size_t i = 0; i < authors.size(); ++i) {
        add_node(authors[i].author_id);
        for (std::size_t j = i + 1; j < authors.size(); ++j)
            add_collaboration(authors[i].author_id, authors[j].author_id);
    }
}

CoauthorGraph GraphBuilder::build(YearRange window) const {
    CoauthorGraph g;
    g.window_ = window;
    g.nodes_.reserve(adjacency_.size());
    for (const auto& [id, _] : adjacency_) {
        g.index_.emplace(id, static_cast<std::uint32_t>(g.nodes_.size()));
        g.nodes_.push_back(id);
    }
    g.adjacency_.resize(g.nodes_.size());
    std::uint32_t u = 0;
    for (const auto& [id, nbrs] : adjacency_) {
        auto& adj = g.adjacency_[u++];
        adj.reserve(nbrs.size());
        // std::map iteration is ascending by id, which is ascending by node index.
        for (const auto& [other, w] : nbrs) adj.push_back({g.index_.at(other), w});
    }
    return g;
}

CoauthorGraph build_graph(const corpus::Corpus& corpus, YearRange window) {
    if (window.empty()) throw Error("build_graph: empty window");
    GraphBuilder builder;
    for (const auto& r : corpus.records())
        if (window.contains(r.year)) builder.add_publication(r.authorships);
    return builder.build(window);
}

namespace {

double weighted_degree_of(const CoauthorGraph& g, std::uint32_t v, bool normalized) {
    const auto nbrs = g.neighbors(v);
    if (nbrs.empty()) return 0.0;
    double s = 0.0;
    for (const auto& n : nbrs) s += n.weight;
    return normalized ? s / static_cast<double>(nbrs.size()) : s;
}

double degree_centrality_of(const CoauthorGraph& g, std::uint32_t v) {
    if (g.num_nodes() < 2) return 0.0;
    return static_cast<double>(g.neighbors(v).size()) / static_cast<double>(g.num_nodes() - 1);
}

double clustering_of(const CoauthorGraph& g, std::uint32_t v) {
    const auto nbrs = g.neighbors(v);
    const auto k = nbrs.size();
    if (k < 2) return 0.0;
    std::size_t links = 0;
    for (std::size_t i = 0; i < k; ++i) {
        const auto adj = g.neighbors(nbrs[i].node);
        // Count neighbours of nbrs[i] that are later entries of v's sorted neighbour list.
        auto a = adj.begin();
        for (std::size_t j = i + 1; j < k; ++j) {
            a = std::lower_bound(a, adj.end(), nbrs[j].node,
                                 [](const Neighbor& n, std::uint32_t x) { return n.node < x; });
            if (a == adj.end()) break;
            if (a->node == nbrs[j].node) ++links;
        }
    }
    return static_cast<double>(links) / (static_cast<double>(k) * static_cast<double>(k - 1) / 2.0);
}

constexpr std::size_t kBetweennessBlocks = 64;

} // namespace

std::size_t degree(const CoauthorGraph& g, std::string_view author_id) {
    return g.neighbors(g.require(author_id)).size();
}

double degree_centrality(const CoauthorGraph& g, std::string_view author_id) {
    return degree_centrality_of(g, g.require(author_id));
}

double weighted_degree(const CoauthorGraph& g, std::string_view author_id, bool normalized) {
    return weighted_degree_of(g, g.require(author_id), normalized);
}

double clustering_coefficient(const CoauthorGraph& g, std::string_view author_id) {
    return clustering_of(g, g.require(author_id));
}

std::vector<double> betweenness_centrality(const CoauthorGraph& g, unsigned threads) {
    const std::size_t n = g.num_nodes();
    std::vector<double> result(n, 0.0);
    if (n < 3) return result;

    // Sources are split into a fixed number of contiguous blocks; each block accumulates
    // sequentially and blocks are summed in order, independent of the worker count.
    const std::size_t blocks = std::min(kBetweennessBlocks, n);
    std::vector<std::vector<double>> partial(blocks, std::vector<double>(n, 0.0));
    parallel_for(blocks, threads, [&](std::size_t b) {
        const std::size_t begin = b * n / blocks;
        const std::size_t end = (b + 1) * n / blocks;
        auto& acc = partial[b];
        std::vector<std::int64_t> dist(n, -1);
        std::vector<double> sigma(n, 0.0);
        std::vector<double> delta(n, 0.0);
        std::vector<std::uint32_t> order;
        std::vector<std::uint32_t> queue;
        for (std::size_t s = begin; s < end; ++s) {
            order.clear();
            queue.clear();
            dist[s] = 0;
            sigma[s] = 1.0;
            queue.push_back(static_cast<std::uint32_t>(s));
            for (std::size_t head = 0; head < queue.size(); ++head) {
                const auto v = queue[head];
                order.push_back(v);
                for (const auto& nb : g.neighbors(v)) {
                    const auto w = nb.node;
                    if (dist[w] < 0) {
                        dist[w] = dist[v] + 1;
                        queue.push_back(w);
                    }
                    if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
                }
            }
            for (auto it = order.rbegin(); it != order.rend(); ++it) {
                const auto w = *it;
                for (const auto& nb : g.neighbors(w)) {
                    const auto v = nb.node;
                    if (dist[v] == dist[w] - 1) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
                }
                if (w != s) acc[w] += delta[w];
            }
            for (auto v : order) {
                dist[v] = -1;
                sigma[v] = 0.0;
                delta[v] = 0.0;
            }
        }
    });
    // Each unordered pair is seen from both endpoints: sum / 2 / ((n-1)(n-2)/2).
    const double scale = 1.0 / (static_cast<double>(n - 1) * static_cast<double>(n - 2));
    for (std::size_t v = 0; v < n; ++v) {
        double s = 0.0;
        for (std::size_t b = 0; b < blocks; ++b) s += partial[b][v];
        result[v] = s * scale;
    }
    return result;
}

std::map<std::string, double> betweenness_by_author(const CoauthorGraph& g, unsigned threads) {
    const auto values = betweenness_centrality(g, threads);
    std::map<std::string, double> out;
    for (std::size_t i = 0; i < values.size(); ++i) out.emplace(g.nodes()[i], values[i]);
    return out;
}

std::vector<NodeMetrics> compute_metrics(const CoauthorGraph& g, unsigned threads) {
    const auto bc = betweenness_centrality(g, threads);
    std::vector<NodeMetrics> out(g.num_nodes());
    parallel_for(g.num_nodes(), threads, [&](std::size_t i) {
        const auto v = static_cast<std::uint32_t>(i);
        auto& m = out[i];
        m.author_id = g.nodes()[i];
        m.degree = g.neighbors(v).size();
        m.degree_centrality = degree_centrality_of(g, v);
        m.weighted_degree = weighted_degree_of(g, v, false);
        m.weighted_degree_normalized = weighted_degree_of(g, v, true);
        m.clustering_coefficient = clustering_of(g, v);
        m.betweenness_centrality = bc[i];
    });
    return out;
}

std::string edges_csv(const CoauthorGraph& g) {
    std::string out = "u,v,weight\n";
    for (const auto& e : g.edges())
        out += io::csv_escape(g.nodes()[e.u]) + "," + io::csv_escape(g.nodes()[e.v]) + "," + std::to_string(e.weight) + "\n";
    return out;
}

std::string isolated_nodes(const CoauthorGraph& g) {
    std::string out;
    for (std::uint32_t v = 0; v < g.num_nodes(); ++v)
        if (g.neighbors(v).empty()) out += g.nodes()[v] + "\n";
    return out;
}

std::string metrics_csv(std::span<const NodeMetrics> metrics) {
    std::string out =
        "author_id,degree_centrality,weighted_degree,weighted_degree_normalized,clustering_coefficient,betweenness_centrality\n";
    for (const auto& m : metrics)
        out += io::csv_escape(m.author_id) + "," + io::format_double(m.degree_centrality) + "," +
               io::format_double(m.weighted_degree) + "," + io::format_double(m.weighted_degree_normalized) + "," +
               io::format_double(m.clustering_coefficient) + "," + io::format_double(m.betweenness_centrality) + "\n";
    return out;
}

} // namespace rstar::network
