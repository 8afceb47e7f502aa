#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "opmax/graph.hpp"

namespace opmax {

enum class CentralityKind { CurrentFlowCloseness, Closeness, Betweenness, Degree };

std::string_view to_string(CentralityKind kind);
CentralityKind centrality_from_string(std::string_view name);

// Graphs with fewer nodes than this use a dense factorization of the grounded
// Laplacian; larger graphs use conjugate gradient.
inline constexpr std::size_t kDenseLaplacianLimit = 2000;
inline constexpr double kCgTolerance = 1e-10;

// (n-1) / sum_w R_eff(v, w) with unit edge resistances. Throws
// DisconnectedGraph when some resistance is infinite.
std::vector<double> current_flow_closeness(const Graph& g);

// Closeness (n-1)/sum of distances, Brandes betweenness normalized by
// (n-1)(n-2)/2, or degree/(n-1). Distance-based kinds require connectivity.
std::vector<double> classic_centrality(const Graph& g, CentralityKind kind);

// Dispatches to one of the two functions above.
std::vector<double> centrality(const Graph& g, CentralityKind kind);

// Sample Pearson correlation. Throws UndefinedCorrelation for constant input
// and InvalidArgument for mismatched or too-short vectors.
double pearson(std::span<const double> x, std::span<const double> y);

}  // namespace opmax
