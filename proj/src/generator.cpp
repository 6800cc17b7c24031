#include "camo/generator.hpp"

#include <stdexcept>

namespace camo {

void GeneratorParams::validate() const {
    if (!(w1 > 0.0)) throw std::invalid_argument("activator weight W1 must be positive");
    if (!(w2 < 0.0)) throw std::invalid_argument("inhibitor weight W2 must be negative");
    if (max_iterations < 1) throw std::invalid_argument("generator needs at least one iteration");
}

const RegionExtents& RegionTable::operator[](PatternClass c) const {
    switch (c) {
        case PatternClass::Horizontal: return horizontal;
        case PatternClass::Vertical: return vertical;
        case PatternClass::Mottled: break;
    }
    return mottled;
}

RegionExtents& RegionTable::operator[](PatternClass c) {
    return const_cast<RegionExtents&>(static_cast<const RegionTable&>(*this)[c]);
}

RegionSpec region_for(PatternClass c, const RegionTable& table) {
    const auto& e = table[c];
    return rect_region(e.ax, e.ay, e.ix, e.iy);
}

double strength(Cell cell, const BinaryField& states, const RegionSpec& region, const GeneratorParams& params) {
    const auto& g = states.grid();
    double s = 0.0;
    for (Offset o : region.activator)
        if (states.at(reflect_offset(g, cell, o))) s += params.w1;
    for (Offset o : region.inhibitor)
        if (states.at(reflect_offset(g, cell, o))) s += params.w2;
    return s;
}

BinaryField generator_step(const BinaryField& states, std::span<const RegionSpec* const> regions,
                           const GeneratorParams& params) {
    if (regions.size() != states.size()) throw std::invalid_argument("need one region per cell");
    BinaryField next(states.grid());
    for (std::size_t i = 0; i < states.size(); ++i) {
        next[i] = strength(states.grid().cell(i), states, *regions[i], params) > 0.0 ? 1 : 0;
    }
    return next;
}

BinaryField generator_step(const BinaryField& states, const RegionSpec& region, const GeneratorParams& params) {
    const std::vector<const RegionSpec*> regions(states.size(), &region);
    return generator_step(states, regions, params);
}

std::string_view to_string(Convergence c) {
    switch (c) {
        case Convergence::FixedPoint: return "fixed-point";
        case Convergence::Cycle: return "cycle";
        case Convergence::BudgetExhausted: return "budget-exhausted";
    }
    return "?";
}

std::optional<Convergence> ConvergenceDetector::push(BinaryField next) {
    std::optional<Convergence> verdict;
    if (next == history.back()) {
        verdict = Convergence::FixedPoint;
    } else if (history.size() >= 2 && next == history[history.size() - 2]) {
        verdict = Convergence::Cycle;
    }
    history.push_back(std::move(next));
    return verdict;
}

GeneratorRun run_generator(const BinaryField& init, std::span<const RegionSpec* const> regions,
                           const GeneratorParams& params) {
    params.validate();
    ConvergenceDetector detector(init);
    GeneratorRun run{init, 0, Convergence::BudgetExhausted, {}};
    for (int k = 0; k < params.max_iterations; ++k) {
        auto next = generator_step(detector.history.back(), regions, params);
        ++run.iterations_used;
        if (auto verdict = detector.push(std::move(next))) {
            run.convergence = *verdict;
            break;
        }
    }
    run.final_state = detector.history.back();
    run.history = std::move(detector.history);
    return run;
}

GeneratorRun run_generator(const BinaryField& init, const RegionSpec& region, const GeneratorParams& params) {
    const std::vector<const RegionSpec*> regions(init.size(), &region);
    return run_generator(init, regions, params);
}

}  // namespace camo
