#pragma once

// Metropolis-weighted average consensus over pattern-probability vectors.

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "camo/descriptor.hpp"
#include "camo/grid.hpp"

namespace camo {

// Undirected communication graph. Vertex i of a grid graph is cell index i.
class CommGraph {
public:
    explicit CommGraph(std::size_t vertices) : adj_(vertices) {}

    // Throws std::invalid_argument on self-loops or out-of-range endpoints.
    // Duplicate edges are ignored.
    static CommGraph from_edges(std::size_t vertices, std::span<const std::pair<std::size_t, std::size_t>> edges);

    // In-grid neighbors only; boundary vertices get lower degree.
    static CommGraph from_grid(const GridTopology& grid, NeighborhoodScheme scheme);

    void add_edge(std::size_t a, std::size_t b);

    std::size_t size() const { return adj_.size(); }
    std::size_t degree(std::size_t v) const { return adj_[v].size(); }
    std::span<const std::size_t> adjacent(std::size_t v) const { return adj_[v]; }
    bool has_edge(std::size_t a, std::size_t b) const;

private:
    std::vector<std::vector<std::size_t>> adj_;
};

// 1 / (1 + max(d_i, d_j))
inline double metropolis_edge_weight(std::size_t di, std::size_t dj) {
    return 1.0 / (1.0 + static_cast<double>(di > dj ? di : dj));
}

// Sparse weight matrix: a self weight per vertex plus one weight per edge,
// stored in the graph's adjacency order.
class WeightAssignment {
public:
    struct Entry {
        std::size_t to;
        double weight;
    };

    WeightAssignment(std::vector<double> self, std::vector<std::vector<Entry>> rows)
        : self_(std::move(self)), rows_(std::move(rows)) {}

    std::size_t size() const { return self_.size(); }
    double self_weight(std::size_t i) const { return self_[i]; }
    std::span<const Entry> row(std::size_t i) const { return rows_[i]; }

    // Dense lookup, zero for non-edges.
    double weight(std::size_t i, std::size_t j) const;

private:
    std::vector<double> self_;
    std::vector<std::vector<Entry>> rows_;
};

WeightAssignment metropolis_weights(const CommGraph& g);

using ConsensusState = std::vector<PatternProbs>;

// p_i' = W_ii p_i + sum_j W_ij p_j, all reads from `p`.
ConsensusState consensus_step(std::span<const PatternProbs> p, const WeightAssignment& w);

// rounds + 1 states; front() is the initial state.
using ConsensusTrace = std::vector<ConsensusState>;

ConsensusTrace run_consensus(const ConsensusState& initial, const WeightAssignment& w, int rounds);

// Largest component. Ties go to Mottled whenever it is among the maxima,
// then Horizontal over Vertical.
PatternClass argmax_pattern(const PatternProbs& p);
bool has_tie(const PatternProbs& p);

// Columns: round,cell_row,cell_col,p_h,p_v,p_m
std::string trace_to_csv(const ConsensusTrace& trace, const GridTopology& grid);

}  // namespace camo
