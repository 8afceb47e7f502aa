#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace opmax {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

// Undirected simple graph in compressed adjacency form. Neighbor lists are
// sorted ascending; every undirected edge is stored as two arcs, and per-arc
// data elsewhere (Q-tables, strategy rows) is indexed by arc_offset().
class Graph {
public:
    Graph() = default;

    // Self-loops and repeated edges are dropped. Ids must be < node_count.
    static Graph from_edges(std::size_t node_count, std::span<const Edge> edges);

    std::size_t node_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t edge_count() const noexcept { return adjacency_.size() / 2; }
    std::size_t arc_count() const noexcept { return adjacency_.size(); }

    std::span<const NodeId> neighbors(NodeId v) const noexcept {
        return {adjacency_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
    }
    std::size_t degree(NodeId v) const noexcept { return offsets_[v + 1] - offsets_[v]; }
    std::size_t arc_offset(NodeId v) const noexcept { return offsets_[v]; }

    bool has_edge(NodeId u, NodeId v) const noexcept;
    // Position of v inside neighbors(u), or degree(u) when absent.
    std::size_t neighbor_index(NodeId u, NodeId v) const noexcept;

    bool is_connected() const;
    std::size_t max_degree() const noexcept;

    // Edges with u < v, in ascending (u, v) order.
    std::vector<Edge> edges() const;

    // Same graph with node v renamed to perm[v].
    Graph relabeled(std::span<const NodeId> perm) const;

    friend bool operator==(const Graph&, const Graph&) = default;

private:
    std::vector<std::size_t> offsets_;
    std::vector<NodeId> adjacency_;
};

// Barabasi-Albert preferential attachment. Starts from a complete graph on m
// nodes; each later node attaches m distinct edges, targets drawn with
// probability proportional to degree (duplicates within one round redrawn).
// Edge count is m(m-1)/2 + m(n-m).
Graph generate_pa(std::size_t n, std::size_t m, std::uint64_t seed);

struct EdgeListLoad {
    Graph graph;
    std::vector<long long> original_ids;  // compact id -> id in the file
    std::size_t dropped_self_loops = 0;
    std::size_t dropped_duplicates = 0;
};

// SNAP-style edge list: one "u v" pair per line, '#' comments and blank lines
// skipped. Ids are compacted to 0..n-1 in order of first appearance.
EdgeListLoad load_edge_list(std::istream& in);
EdgeListLoad load_edge_list_file(const std::string& path);

void write_edge_list(std::ostream& out, const Graph& g);

}  // namespace opmax
