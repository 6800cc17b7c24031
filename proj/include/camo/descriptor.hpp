#pragma once

// Local pattern descriptors: discrete second-order color derivatives along
// each axis, and the one-hot local pattern classification built on them.

#include <array>
#include <optional>
#include <string_view>

#include "camo/image.hpp"

namespace camo {

enum class PatternClass { Horizontal, Vertical, Mottled };

std::string_view to_string(PatternClass c);
std::optional<PatternClass> parse_pattern_class(std::string_view name);

// [p_h, p_v, p_m]
struct PatternProbs {
    double h = 0.0;
    double v = 0.0;
    double m = 0.0;

    static PatternProbs one_hot(PatternClass c);

    double operator[](PatternClass c) const;
    PatternProbs& operator+=(const PatternProbs& o) {
        h += o.h;
        v += o.v;
        m += o.m;
        return *this;
    }
    friend PatternProbs operator*(double w, const PatternProbs& p) { return {w * p.h, w * p.v, w * p.m}; }
    friend bool operator==(const PatternProbs&, const PatternProbs&) = default;
};

// The cell's own color and its four orthogonal neighbors.
struct NeighborColors {
    double self = 0.0;
    double top = 0.0;
    double right = 0.0;
    double bottom = 0.0;
    double left = 0.0;
};

struct DescriptorResult {
    double px = 0.0;  // left + right - 2*self
    double py = 0.0;  // top + bottom - 2*self

    friend bool operator==(const DescriptorResult&, const DescriptorResult&) = default;
};

inline constexpr double kDefaultClassifyThreshold = 64.0;

DescriptorResult second_derivatives(const NeighborColors& colors);

// One-hot: horizontal when |py| - |px| > threshold, vertical when
// |px| - |py| > threshold, mottled otherwise.
PatternProbs classify_local(const DescriptorResult& d, double threshold);

// Neighbor colors of `cell`, with out-of-grid neighbors reflected.
NeighborColors gather_neighbor_colors(const ColorField& field, Cell cell);

Field<PatternProbs> local_patterns(const ColorField& field, double threshold = kDefaultClassifyThreshold);

}  // namespace camo
