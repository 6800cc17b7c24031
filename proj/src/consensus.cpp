#include "camo/consensus.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace camo {

CommGraph CommGraph::from_edges(std::size_t vertices, std::span<const std::pair<std::size_t, std::size_t>> edges) {
    CommGraph g(vertices);
    for (auto [a, b] : edges) g.add_edge(a, b);
    return g;
}

CommGraph CommGraph::from_grid(const GridTopology& grid, NeighborhoodScheme scheme) {
    CommGraph g(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Cell c = grid.cell(i);
        for (Offset o : scheme_offsets(scheme)) {
            const Cell n = c + o;
            if (grid.contains(n)) g.adj_[i].push_back(grid.index(n));
        }
    }
    return g;
}

void CommGraph::add_edge(std::size_t a, std::size_t b) {
    if (a >= adj_.size() || b >= adj_.size()) throw std::invalid_argument("edge endpoint out of range");
    if (a == b) throw std::invalid_argument("self-loops are not allowed");
    if (has_edge(a, b)) return;
    adj_[a].push_back(b);
    adj_[b].push_back(a);
}

bool CommGraph::has_edge(std::size_t a, std::size_t b) const {
    return std::find(adj_[a].begin(), adj_[a].end(), b) != adj_[a].end();
}

double WeightAssignment::weight(std::size_t i, std::size_t j) const {
    if (i == j) return self_[i];
    for (const auto& e : rows_[i])
        if (e.to == j) return e.weight;
    return 0.0;
}

WeightAssignment metropolis_weights(const CommGraph& g) {
    std::vector<double> self(g.size());
    std::vector<std::vector<WeightAssignment::Entry>> rows(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        double sum = 0.0;
        for (std::size_t j : g.adjacent(i)) {
            const double w = metropolis_edge_weight(g.degree(i), g.degree(j));
            rows[i].push_back({j, w});
            sum += w;
        }
        self[i] = 1.0 - sum;
    }
    return {std::move(self), std::move(rows)};
}

ConsensusState consensus_step(std::span<const PatternProbs> p, const WeightAssignment& w) {
    if (p.size() != w.size()) throw std::invalid_argument("state size does not match weight matrix");
    ConsensusState next(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        PatternProbs acc = w.self_weight(i) * p[i];
        for (const auto& e : w.row(i)) acc += e.weight * p[e.to];
        next[i] = acc;
    }
    return next;
}

ConsensusTrace run_consensus(const ConsensusState& initial, const WeightAssignment& w, int rounds) {
    if (rounds < 1) throw std::invalid_argument("consensus needs at least one round");
    ConsensusTrace trace;
    trace.reserve(static_cast<std::size_t>(rounds) + 1);
    trace.push_back(initial);
    for (int k = 0; k < rounds; ++k) trace.push_back(consensus_step(trace.back(), w));
    return trace;
}

PatternClass argmax_pattern(const PatternProbs& p) {
    const double top = std::max({p.h, p.v, p.m});
    if (p.m == top) return PatternClass::Mottled;
    if (p.h == top) return PatternClass::Horizontal;
    return PatternClass::Vertical;
}

bool has_tie(const PatternProbs& p) {
    const double top = std::max({p.h, p.v, p.m});
    return (p.h == top) + (p.v == top) + (p.m == top) > 1;
}

std::string trace_to_csv(const ConsensusTrace& trace, const GridTopology& grid) {
    std::string out = "round,cell_row,cell_col,p_h,p_v,p_m\n";
    char line[160];
    for (std::size_t k = 0; k < trace.size(); ++k) {
        for (std::size_t i = 0; i < trace[k].size(); ++i) {
            const Cell c = grid.cell(i);
            const auto& p = trace[k][i];
            std::snprintf(line, sizeof line, "%zu,%d,%d,%.17g,%.17g,%.17g\n", k, c.row, c.col, p.h, p.v, p.m);
            out += line;
        }
    }
    return out;
}

}  // namespace camo
