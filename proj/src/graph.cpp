#include "opmax/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>

#include "opmax/error.hpp"
#include "opmax/rng.hpp"

namespace opmax {

Graph Graph::from_edges(std::size_t node_count, std::span<const Edge> edges) {
    std::vector<Edge> arcs;
    arcs.reserve(edges.size() * 2);
    for (auto [u, v] : edges) {
        if (u >= node_count || v >= node_count) {
            throw InvalidArgument("edge endpoint out of range");
        }
        if (u == v) continue;
        arcs.emplace_back(u, v);
        arcs.emplace_back(v, u);
    }
    std::sort(arcs.begin(), arcs.end());
    arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());

    Graph g;
    g.offsets_.assign(node_count + 1, 0);
    for (auto [u, v] : arcs) ++g.offsets_[u + 1];
    for (std::size_t i = 0; i < node_count; ++i) g.offsets_[i + 1] += g.offsets_[i];
    g.adjacency_.reserve(arcs.size());
    for (auto [u, v] : arcs) g.adjacency_.push_back(v);
    return g;
}

bool Graph::has_edge(NodeId u, NodeId v) const noexcept {
    return neighbor_index(u, v) < degree(u);
}

std::size_t Graph::neighbor_index(NodeId u, NodeId v) const noexcept {
    auto nb = neighbors(u);
    auto it = std::lower_bound(nb.begin(), nb.end(), v);
    if (it == nb.end() || *it != v) return nb.size();
    return static_cast<std::size_t>(it - nb.begin());
}

bool Graph::is_connected() const {
    const std::size_t n = node_count();
    if (n == 0) return false;
    std::vector<char> seen(n, 0);
    std::vector<NodeId> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        for (NodeId w : neighbors(v)) {
            if (!seen[w]) {
                seen[w] = 1;
                ++reached;
                stack.push_back(w);
            }
        }
    }
    return reached == n;
}

std::size_t Graph::max_degree() const noexcept {
    std::size_t best = 0;
    for (NodeId v = 0; v < node_count(); ++v) best = std::max(best, degree(v));
    return best;
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (NodeId u = 0; u < node_count(); ++u) {
        for (NodeId v : neighbors(u)) {
            if (u < v) out.emplace_back(u, v);
        }
    }
    return out;
}

Graph Graph::relabeled(std::span<const NodeId> perm) const {
    auto es = edges();
    for (auto& [u, v] : es) {
        u = perm[u];
        v = perm[v];
    }
    return from_edges(node_count(), es);
}

Graph generate_pa(std::size_t n, std::size_t m, std::uint64_t seed) {
    if (m < 1) throw InvalidArgument("preferential attachment needs m >= 1");
    if (n < m) throw InvalidArgument("preferential attachment needs n >= m");

    Rng rng(seed);
    std::vector<Edge> edges;
    edges.reserve(m * (m - 1) / 2 + m * (n - m));
    // Each edge endpoint appears once here, so a uniform pick is degree-proportional.
    std::vector<NodeId> endpoints;
    endpoints.reserve(2 * edges.capacity());

    for (NodeId u = 0; u < m; ++u) {
        for (NodeId v = u + 1; v < m; ++v) {
            edges.emplace_back(u, v);
            endpoints.push_back(u);
            endpoints.push_back(v);
        }
    }

    std::vector<NodeId> targets;
    for (auto v = static_cast<NodeId>(m); v < n; ++v) {
        targets.clear();
        while (targets.size() < m) {
            // Only possible for m == 1 on the first attachment: K1 has no edges.
            NodeId t = endpoints.empty() ? static_cast<NodeId>(rng.index(v))
                                         : endpoints[rng.index(endpoints.size())];
            if (std::find(targets.begin(), targets.end(), t) == targets.end()) {
                targets.push_back(t);
            }
        }
        for (NodeId t : targets) {
            edges.emplace_back(t, v);
            endpoints.push_back(t);
            endpoints.push_back(v);
        }
    }
    return Graph::from_edges(n, edges);
}

namespace {

bool parse_id(std::string_view token, long long& out) {
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
    return ec == std::errc{} && ptr == token.data() + token.size() && out >= 0;
}

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        if (j > i) tokens.push_back(line.substr(i, j - i));
        i = j;
    }
    return tokens;
}

}  // namespace

EdgeListLoad load_edge_list(std::istream& in) {
    EdgeListLoad result;
    std::unordered_map<long long, NodeId> compact;
    std::vector<Edge> raw;
    auto intern = [&](long long id) {
        auto [it, inserted] = compact.try_emplace(id, static_cast<NodeId>(result.original_ids.size()));
        if (inserted) result.original_ids.push_back(id);
        return it->second;
    };

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto tokens = split_ws(line);
        if (tokens.empty() || tokens.front().front() == '#') continue;
        long long a = 0;
        long long b = 0;
        if (tokens.size() != 2 || !parse_id(tokens[0], a) || !parse_id(tokens[1], b)) {
            throw ParseError("expected two integer node ids", lineno);
        }
        NodeId u = intern(a);
        NodeId v = intern(b);
        if (u == v) {
            ++result.dropped_self_loops;
            continue;
        }
        raw.emplace_back(std::min(u, v), std::max(u, v));
    }

    std::vector<Edge> sorted = raw;
    std::sort(sorted.begin(), sorted.end());
    auto last = std::unique(sorted.begin(), sorted.end());
    result.dropped_duplicates = static_cast<std::size_t>(sorted.end() - last);
    sorted.erase(last, sorted.end());
    result.graph = Graph::from_edges(result.original_ids.size(), sorted);
    return result;
}

EdgeListLoad load_edge_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open edge list: " + path);
    return load_edge_list(in);
}

void write_edge_list(std::ostream& out, const Graph& g) {
    out << "# nodes " << g.node_count() << " edges " << g.edge_count() << '\n';
    for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

}  // namespace opmax
