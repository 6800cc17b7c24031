#include "camo/descriptor.hpp"

#include <cmath>

namespace camo {

std::string_view to_string(PatternClass c) {
    switch (c) {
        case PatternClass::Horizontal: return "Horizontal";
        case PatternClass::Vertical: return "Vertical";
        case PatternClass::Mottled: return "Mottled";
    }
    return "?";
}

std::optional<PatternClass> parse_pattern_class(std::string_view name) {
    if (name == "Horizontal" || name == "horizontal" || name == "h") return PatternClass::Horizontal;
    if (name == "Vertical" || name == "vertical" || name == "v") return PatternClass::Vertical;
    if (name == "Mottled" || name == "mottled" || name == "m") return PatternClass::Mottled;
    return std::nullopt;
}

PatternProbs PatternProbs::one_hot(PatternClass c) {
    switch (c) {
        case PatternClass::Horizontal: return {1.0, 0.0, 0.0};
        case PatternClass::Vertical: return {0.0, 1.0, 0.0};
        case PatternClass::Mottled: return {0.0, 0.0, 1.0};
    }
    return {};
}

double PatternProbs::operator[](PatternClass c) const {
    switch (c) {
        case PatternClass::Horizontal: return h;
        case PatternClass::Vertical: return v;
        case PatternClass::Mottled: return m;
    }
    return 0.0;
}

DescriptorResult second_derivatives(const NeighborColors& n) {
    return {n.left + n.right - 2.0 * n.self, n.top + n.bottom - 2.0 * n.self};
}

PatternProbs classify_local(const DescriptorResult& d, double threshold) {
    const double ax = std::abs(d.px);
    const double ay = std::abs(d.py);
    if (ay - ax > threshold) return PatternProbs::one_hot(PatternClass::Horizontal);
    if (ax - ay > threshold) return PatternProbs::one_hot(PatternClass::Vertical);
    return PatternProbs::one_hot(PatternClass::Mottled);
}

NeighborColors gather_neighbor_colors(const ColorField& field, Cell cell) {
    const auto& g = field.grid();
    auto color = [&](Offset o) { return field.at(reflect_offset(g, cell, o)); };
    return {field.at(cell), color({0, -1}), color({1, 0}), color({0, 1}), color({-1, 0})};
}

Field<PatternProbs> local_patterns(const ColorField& field, double threshold) {
    Field<PatternProbs> out(field.grid());
    for (std::size_t i = 0; i < field.size(); ++i) {
        const Cell c = field.grid().cell(i);
        out[i] = classify_local(second_derivatives(gather_neighbor_colors(field, c)), threshold);
    }
    return out;
}

}  // namespace camo
