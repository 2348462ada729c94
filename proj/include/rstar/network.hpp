#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rstar/common.hpp"
#include "rstar/corpus.hpp"

namespace rstar::network {

struct Neighbor {
    std::uint32_t node;
    std::uint32_t weight; ///< co-authored publications, >= 1
};

struct Edge {
    std::uint32_t u; ///< u < v
    std::uint32_t v;
    std::uint32_t weight;
};

/// Undirected weighted co-authorship graph. Nodes are stored in ascending author_id order and
/// adjacency lists in ascending node order, so equal inputs give identical graphs.
class CoauthorGraph {
public:
    [[nodiscard]] std::size_t num_nodes() const noexcept { return nodes_.size(); }
    [[nodiscard]] std::size_t num_edges() const noexcept;
    [[nodiscard]] const std::vector<std::string>& nodes() const noexcept { return nodes_; }
    [[nodiscard]] const YearRange& window() const noexcept { return window_; }

    [[nodiscard]] std::optional<std::uint32_t> index_of(std::string_view author_id) const;
    /// Throws for an unknown author.
    [[nodiscard]] std::uint32_t require(std::string_view author_id) const;
    [[nodiscard]] std::span<const Neighbor> neighbors(std::uint32_t node) const { return adjacency_.at(node); }
    /// 0 when the nodes are not adjacent.
    [[nodiscard]] std::uint32_t weight(std::uint32_t u, std::uint32_t v) const;
    [[nodiscard]] std::vector<Edge> edges() const;

    friend bool operator==(const CoauthorGraph& a, const CoauthorGraph& b) {
        return a.window_ == b.window_ && a.nodes_ == b.nodes_ && a.edges() == b.edges();
    }

private:
    friend class GraphBuilder;
    YearRange window_{};
    std::vector<std::string> nodes_;
    std::unordered_map<std::string, std::uint32_t> index_;
    std::vector<std::vector<Neighbor>> adjacency_;
};

inline bool operator==(const Edge& a, const Edge& b) { return a.u == b.u && a.v == b.v && a.weight == b.weight; }

/// Accumulates nodes and co-authorship counts; self-pairs are ignored.
class GraphBuilder {
public:
    void add_node(const std::string& author_id);
    void add_collaboration(const std::string& a, const std::string& b, std::uint32_t count = 1);
    /// Adds every author and one collaboration for each unordered author pair.
    void add_publication(std::span<const corpus::AuthorRef> authors);
    [[nodiscard]] CoauthorGraph build(YearRange window = {}) const;

private:
    std::map<std::string, std::map<std::string, std::uint32_t>> adjacency_;
};

/// Nodes are the authors of publications inside the window; edge weight counts shared publications.
CoauthorGraph build_graph(const corpus::Corpus& corpus, YearRange window);

std::size_t degree(const CoauthorGraph& g, std::string_view author_id);
/// deg(v) / (n - 1); 0 for a singleton graph.
double degree_centrality(const CoauthorGraph& g, std::string_view author_id);
/// Sum of incident weights, or that sum divided by deg(v) when normalized (0 when isolated).
double weighted_degree(const CoauthorGraph& g, std::string_view author_id, bool normalized);
/// Edges among neighbours over deg(v)(deg(v)-1)/2; 0 when deg(v) < 2.
double clustering_coefficient(const CoauthorGraph& g, std::string_view author_id);

/// Brandes accumulation over unweighted shortest paths, normalized by (n-1)(n-2)/2 with n the
/// full node count. Indexed by node. The result is bit-identical for any thread count.
std::vector<double> betweenness_centrality(const CoauthorGraph& g, unsigned threads = 1);
std::map<std::string, double> betweenness_by_author(const CoauthorGraph& g, unsigned threads = 1);

struct NodeMetrics {
    std::string author_id;
    std::size_t degree = 0;
    double degree_centrality = 0.0;
    double weighted_degree = 0.0;
    double weighted_degree_normalized = 0.0;
    double clustering_coefficient = 0.0;
    double betweenness_centrality = 0.0;
};

/// Metrics for every node, in node order.
std::vector<NodeMetrics> compute_metrics(const CoauthorGraph& g, unsigned threads = 1);

/// Edge list CSV u,v,weight.
std::string edges_csv(const CoauthorGraph& g);
/// One isolated author id per line.
std::string isolated_nodes(const CoauthorGraph& g);
/// CSV author_id,degree_centrality,weighted_degree,weighted_degree_normalized,clustering_coefficient,betweenness_centrality.
std::string metrics_csv(std::span<const NodeMetrics> metrics);

} // namespace rstar::network
