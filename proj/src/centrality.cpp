#include "opmax/centrality.hpp"

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "opmax/error.hpp"

namespace opmax {

std::string_view to_string(CentralityKind kind) {
    switch (kind) {
        case CentralityKind::CurrentFlowCloseness: return "current_flow_closeness";
        case CentralityKind::Closeness: return "closeness";
        case CentralityKind::Betweenness: return "betweenness";
        case CentralityKind::Degree: return "degree";
    }
    return "unknown";
}

CentralityKind centrality_from_string(std::string_view name) {
    for (auto kind : {CentralityKind::CurrentFlowCloseness, CentralityKind::Closeness,
                      CentralityKind::Betweenness, CentralityKind::Degree}) {
        if (name == to_string(kind)) return kind;
    }
    throw InvalidArgument("unknown centrality kind: " + std::string(name));
}

namespace {

void require_connected(const Graph& g) {
    if (g.node_count() == 0) throw InvalidArgument("empty graph");
    if (!g.is_connected()) throw DisconnectedGraph("graph is disconnected");
}

// Laplacian with node 0 grounded (row and column removed); symmetric positive
// definite for connected graphs. Indices shift down by one.
Eigen::MatrixXd grounded_laplacian_dense(const Graph& g) {
    const auto n = static_cast<Eigen::Index>(g.node_count());
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n - 1, n - 1);
    for (NodeId v = 1; v < g.node_count(); ++v) {
        lap(v - 1, v - 1) = static_cast<double>(g.degree(v));
        for (NodeId w : g.neighbors(v)) {
            if (w != 0) lap(v - 1, w - 1) = -1.0;
        }
    }
    return lap;
}

Eigen::SparseMatrix<double> grounded_laplacian_sparse(const Graph& g) {
    const auto n = static_cast<Eigen::Index>(g.node_count());
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(g.arc_count() + g.node_count());
    for (NodeId v = 1; v < g.node_count(); ++v) {
        trips.emplace_back(v - 1, v - 1, static_cast<double>(g.degree(v)));
        for (NodeId w : g.neighbors(v)) {
            if (w != 0) trips.emplace_back(v - 1, w - 1, -1.0);
        }
    }
    Eigen::SparseMatrix<double> lap(n - 1, n - 1);
    lap.setFromTriplets(trips.begin(), trips.end());
    return lap;
}

// With M the inverse grounded Laplacian (zero row/column for node 0),
// R(v,w) = M_vv + M_ww - 2 M_vw, so
// sum_w R(v,w) = n M_vv + trace(M) - 2 (M 1)_v.
std::vector<double> resistance_sums(std::span<const double> diag, std::span<const double> row_sums) {
    const std::size_t n = diag.size();
    const double trace = std::accumulate(diag.begin(), diag.end(), 0.0);
    std::vector<double> sums(n);
    for (std::size_t v = 0; v < n; ++v) {
        sums[v] = static_cast<double>(n) * diag[v] + trace - 2.0 * row_sums[v];
    }
    return sums;
}

}  // namespace

std::vector<double> current_flow_closeness(const Graph& g) {
    require_connected(g);
    const std::size_t n = g.node_count();
    if (n == 1) return {0.0};

    std::vector<double> diag(n, 0.0);
    std::vector<double> row_sums(n, 0.0);

    if (n < kDenseLaplacianLimit) {
        Eigen::LLT<Eigen::MatrixXd> llt(grounded_laplacian_dense(g));
        if (llt.info() != Eigen::Success) throw DisconnectedGraph("Laplacian factorization failed");
        Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n - 1),
                                                                  static_cast<Eigen::Index>(n - 1)));
        for (std::size_t v = 1; v < n; ++v) {
            const auto i = static_cast<Eigen::Index>(v - 1);
            diag[v] = inv(i, i);
            row_sums[v] = inv.row(i).sum();
        }
    } else {
        // The solver keeps a reference to the matrix, so it must outlive cg.
        const Eigen::SparseMatrix<double> lap = grounded_laplacian_sparse(g);
        Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
        cg.setTolerance(kCgTolerance);
        cg.compute(lap);
        const auto dim = static_cast<Eigen::Index>(n - 1);
        Eigen::VectorXd rhs = Eigen::VectorXd::Ones(dim);
        Eigen::VectorXd x = cg.solve(rhs);
        for (std::size_t v = 1; v < n; ++v) row_sums[v] = x(static_cast<Eigen::Index>(v - 1));
        for (std::size_t v = 1; v < n; ++v) {
            rhs.setZero();
            rhs(static_cast<Eigen::Index>(v - 1)) = 1.0;
            x = cg.solve(rhs);
            diag[v] = x(static_cast<Eigen::Index>(v - 1));
        }
    }

    auto sums = resistance_sums(diag, row_sums);
    std::vector<double> score(n);
    for (std::size_t v = 0; v < n; ++v) score[v] = static_cast<double>(n - 1) / sums[v];
    return score;
}

namespace {

std::vector<double> closeness(const Graph& g) {
    const std::size_t n = g.node_count();
    std::vector<double> score(n, 0.0);
    std::vector<std::size_t> dist(n);
    std::vector<NodeId> queue(n);
    for (NodeId s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), SIZE_MAX);
        dist[s] = 0;
        std::size_t head = 0;
        std::size_t tail = 0;
        queue[tail++] = s;
        std::size_t total = 0;
        while (head < tail) {
            NodeId v = queue[head++];
            total += dist[v];
            for (NodeId w : g.neighbors(v)) {
                if (dist[w] == SIZE_MAX) {
                    dist[w] = dist[v] + 1;
                    queue[tail++] = w;
                }
            }
        }
        score[s] = total == 0 ? 0.0 : static_cast<double>(n - 1) / static_cast<double>(total);
    }
    return score;
}

// Brandes accumulation over unweighted shortest paths.
std::vector<double> betweenness(const Graph& g) {
    const std::size_t n = g.node_count();
    std::vector<double> score(n, 0.0);
    std::vector<double> sigma(n);
    std::vector<double> delta(n);
    std::vector<long long> dist(n);
    std::vector<NodeId> order;
    order.reserve(n);
    for (NodeId s = 0; s < n; ++s) {
        std::fill(sigma.begin(), sigma.end(), 0.0);
        std::fill(delta.begin(), delta.end(), 0.0);
        std::fill(dist.begin(), dist.end(), -1);
        order.clear();
        sigma[s] = 1.0;
        dist[s] = 0;
        order.push_back(s);
        for (std::size_t head = 0; head < order.size(); ++head) {
            NodeId v = order[head];
            for (NodeId w : g.neighbors(v)) {
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    order.push_back(w);
                }
                if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
            }
        }
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            NodeId w = *it;
            for (NodeId v : g.neighbors(w)) {
                if (dist[v] == dist[w] - 1) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
            if (w != s) score[w] += delta[w];
        }
    }
    // Each unordered pair was counted from both ends.
    const double pairs = n > 2 ? static_cast<double>(n - 1) * static_cast<double>(n - 2) : 1.0;
    for (double& x : score) x /= pairs;
    return score;
}

}  // namespace

std::vector<double> classic_centrality(const Graph& g, CentralityKind kind) {
    const std::size_t n = g.node_count();
    switch (kind) {
        case CentralityKind::Degree: {
            if (n == 0) throw InvalidArgument("empty graph");
            std::vector<double> score(n, 0.0);
            if (n == 1) return score;
            for (NodeId v = 0; v < n; ++v) {
                score[v] = static_cast<double>(g.degree(v)) / static_cast<double>(n - 1);
            }
            return score;
        }
        case CentralityKind::Closeness:
            require_connected(g);
            return closeness(g);
        case CentralityKind::Betweenness:
            require_connected(g);
            return betweenness(g);
        case CentralityKind::CurrentFlowCloseness:
            break;
    }
    throw InvalidArgument("classic_centrality does not compute current-flow closeness");
}

std::vector<double> centrality(const Graph& g, CentralityKind kind) {
    if (kind == CentralityKind::CurrentFlowCloseness) return current_flow_closeness(g);
    return classic_centrality(g, kind);
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw InvalidArgument("pearson: length mismatch");
    // A single point is a constant vector.
    if (x.size() < 2) throw UndefinedCorrelation("pearson: need at least two points");
    auto constant = [](std::span<const double> v) {
        return std::all_of(v.begin(), v.end(), [&](double e) { return e == v.front(); });
    };
    if (constant(x) || constant(y)) throw UndefinedCorrelation("pearson: constant input");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw UndefinedCorrelation("pearson: constant input");
    const double r = sxy / std::sqrt(sxx * syy);
    return std::clamp(r, -1.0, 1.0);
}

}  // namespace opmax
