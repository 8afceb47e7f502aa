#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "opmax/graph.hpp"

namespace opmax {

// Row-major node x class matrix of belief parameters.
class BeliefMatrix {
public:
    BeliefMatrix() = default;
    BeliefMatrix(std::size_t nodes, std::size_t classes, double fill = 0.0)
        : nodes_(nodes), classes_(classes), values_(nodes * classes, fill) {}

    std::size_t nodes() const noexcept { return nodes_; }
    std::size_t classes() const noexcept { return classes_; }

    std::span<double> row(NodeId v) noexcept { return {values_.data() + v * classes_, classes_}; }
    std::span<const double> row(NodeId v) const noexcept {
        return {values_.data() + v * classes_, classes_};
    }
    double& operator()(NodeId v, std::size_t c) noexcept { return values_[v * classes_ + c]; }
    double operator()(NodeId v, std::size_t c) const noexcept { return values_[v * classes_ + c]; }

    const std::vector<double>& values() const noexcept { return values_; }

    friend bool operator==(const BeliefMatrix&, const BeliefMatrix&) = default;

private:
    std::size_t nodes_ = 0;
    std::size_t classes_ = 0;
    std::vector<double> values_;
};

// One value per arc of a graph, laid out like its adjacency lists.
class ArcTable {
public:
    ArcTable() = default;
    explicit ArcTable(const Graph& g, double fill = 0.0) : graph_(&g), values_(g.arc_count(), fill) {}

    const Graph& graph() const noexcept { return *graph_; }

    std::span<double> row(NodeId v) noexcept {
        return {values_.data() + graph_->arc_offset(v), graph_->degree(v)};
    }
    std::span<const double> row(NodeId v) const noexcept {
        return {values_.data() + graph_->arc_offset(v), graph_->degree(v)};
    }
    // Value on arc u -> w; w must be a neighbor of u.
    double at(NodeId u, NodeId w) const noexcept { return row(u)[graph_->neighbor_index(u, w)]; }

    const std::vector<double>& values() const noexcept { return values_; }

private:
    const Graph* graph_ = nullptr;
    std::vector<double> values_;
};

}  // namespace opmax
