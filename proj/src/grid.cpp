#include "camo/grid.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace camo {

namespace {

constexpr std::array<Offset, 4> kN4{{{0, -1}, {-1, 0}, {1, 0}, {0, 1}}};

constexpr std::array<Offset, 8> kN8{{
    {-1, -1}, {0, -1}, {1, -1},
    {-1, 0},           {1, 0},
    {-1, 1},  {0, 1},  {1, 1},
}};

constexpr std::array<Offset, 12> kVN2{{
                        {0, -2},
             {-1, -1},  {0, -1}, {1, -1},
    {-2, 0}, {-1, 0},            {1, 0},  {2, 0},
             {-1, 1},   {0, 1},  {1, 1},
                        {0, 2},
}};

int reflect_axis(int pos, int delta, int extent) {
    int p = pos + delta;
    if (p < 0 || p >= extent) p = pos - delta;
    // Only a 3-wide axis can push a two-hop offset out on both sides.
    return std::clamp(p, 0, extent - 1);
}

}  // namespace

GridTopology::GridTopology(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows < 3 || cols < 3) {
        throw std::invalid_argument("grid must be at least 3x3, got " + std::to_string(rows) + "x" +
                                    std::to_string(cols));
    }
}

std::span<const Offset> scheme_offsets(NeighborhoodScheme scheme) {
    switch (scheme) {
        case NeighborhoodScheme::N4: return kN4;
        case NeighborhoodScheme::N8: return kN8;
        case NeighborhoodScheme::VN2: return kVN2;
    }
    return {};
}

bool scheme_contains(NeighborhoodScheme scheme, Offset o) {
    const auto offs = scheme_offsets(scheme);
    return std::find(offs.begin(), offs.end(), o) != offs.end();
}

std::string_view to_string(NeighborhoodScheme scheme) {
    switch (scheme) {
        case NeighborhoodScheme::N4: return "N4";
        case NeighborhoodScheme::N8: return "N8";
        case NeighborhoodScheme::VN2: return "VN2";
    }
    return "?";
}

Cell reflect_offset(const GridTopology& grid, Cell cell, Offset offset) {
    return {reflect_axis(cell.row, offset.dy, grid.rows()), reflect_axis(cell.col, offset.dx, grid.cols())};
}

std::vector<Neighbor> neighbors(const GridTopology& grid, Cell cell, NeighborhoodScheme scheme) {
    std::vector<Neighbor> out;
    const auto offs = scheme_offsets(scheme);
    out.reserve(offs.size());
    for (Offset o : offs) {
        const Cell direct = cell + o;
        if (grid.contains(direct)) {
            out.push_back({o, direct, false});
        } else {
            out.push_back({o, reflect_offset(grid, cell, o), true});
        }
    }
    return out;
}

RegionSpec RegionSpec::transposed() const {
    RegionSpec r;
    for (Offset o : activator) r.activator.push_back(o.transposed());
    for (Offset o : inhibitor) r.inhibitor.push_back(o.transposed());
    std::sort(r.activator.begin(), r.activator.end(), row_major_less);
    std::sort(r.inhibitor.begin(), r.inhibitor.end(), row_major_less);
    return r;
}

RegionSpec rect_region(int ax, int ay, int ix, int iy) {
    if (ax < 0 || ay < 0 || ix < 0 || iy < 0) {
        throw std::invalid_argument("region extents must be non-negative");
    }
    if (ax > ix || ay > iy) {
        throw std::invalid_argument("activator region must lie inside the inhibitor region");
    }
    if (ix > 2 || iy > 2) {
        throw std::invalid_argument("inhibitor region may reach at most two hops");
    }
    // Each region is also limited to its own hop radius, so a 1x1 activator
    // is the cell plus its four direct neighbors.
    const int activator_hops = std::max(ax, ay);
    const int inhibitor_hops = std::max(ix, iy);
    RegionSpec r;
    for (int dy = -2; dy <= 2; ++dy) {
        for (int dx = -2; dx <= 2; ++dx) {
            const Offset o{dx, dy};
            if (std::abs(dx) <= ax && std::abs(dy) <= ay && o.manhattan() <= activator_hops) {
                r.activator.push_back(o);
            } else if (std::abs(dx) <= ix && std::abs(dy) <= iy && o.manhattan() <= inhibitor_hops) {
                r.inhibitor.push_back(o);
            }
        }
    }
    return r;
}

}  // namespace camo
