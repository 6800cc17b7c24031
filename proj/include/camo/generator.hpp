#pragma once

// Local activator-inhibitor pattern generator on binary cell states.
//
// Each step, every cell sums W1 for each on-cell in its activator region and
// W2 for each on-cell in its inhibitor region (out-of-grid cells reflected),
// then turns on iff that strength is strictly positive. Updates are
// synchronous.

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "camo/descriptor.hpp"
#include "camo/grid.hpp"
#include "camo/image.hpp"

namespace camo {

struct GeneratorParams {
    double w1 = 1.0;
    double w2 = -0.75;
    int max_iterations = 10;

    // Throws std::invalid_argument unless w1 > 0, w2 < 0, max_iterations >= 1.
    void validate() const;
};

// rect_region arguments for one pattern class.
struct RegionExtents {
    int ax = 0;
    int ay = 0;
    int ix = 0;
    int iy = 0;
};

struct RegionTable {
    RegionExtents horizontal{2, 0, 2, 2};
    RegionExtents vertical{0, 2, 2, 2};
    RegionExtents mottled{1, 1, 2, 2};

    const RegionExtents& operator[](PatternClass c) const;
    RegionExtents& operator[](PatternClass c);
};

RegionSpec region_for(PatternClass c, const RegionTable& table = {});

double strength(Cell cell, const BinaryField& states, const RegionSpec& region, const GeneratorParams& params);

BinaryField generator_step(const BinaryField& states, const RegionSpec& region, const GeneratorParams& params);

// Per-cell regions; `regions` holds one pointer per cell.
BinaryField generator_step(const BinaryField& states, std::span<const RegionSpec* const> regions,
                           const GeneratorParams& params);

enum class Convergence { FixedPoint, Cycle, BudgetExhausted };

std::string_view to_string(Convergence c);

// Stopping rule shared by the centralized generator and the swarm harness:
// FixedPoint when `next` equals the current state, Cycle when it equals the
// state two steps back.
struct ConvergenceDetector {
    std::vector<BinaryField> history;  // history.back() is the current state

    explicit ConvergenceDetector(BinaryField initial) { history.push_back(std::move(initial)); }
    // Records `next`; returns the stop reason if the run should end.
    std::optional<Convergence> push(BinaryField next);
};

struct GeneratorRun {
    BinaryField final_state;
    int iterations_used = 0;
    Convergence convergence = Convergence::BudgetExhausted;
    std::vector<BinaryField> history;  // initial state followed by one field per step
};

GeneratorRun run_generator(const BinaryField& init, const RegionSpec& region, const GeneratorParams& params);
GeneratorRun run_generator(const BinaryField& init, std::span<const RegionSpec* const> regions,
                           const GeneratorParams& params);

}  // namespace camo
