#pragma once

// Grid geometry shared by every stage of the camouflage pipeline: cells,
// offsets, neighborhood schemes and the boundary-reflection rule.
//
// Orientation: dx runs along columns (rightward positive), dy along rows
// (downward positive), so the "top" neighbor of a cell is Offset{0, -1}.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace camo {

using AgentId = std::uint16_t;

struct Cell {
    int row = 0;
    int col = 0;

    friend constexpr auto operator<=>(const Cell&, const Cell&) = default;
};

struct Offset {
    int dx = 0;
    int dy = 0;

    constexpr Offset operator-() const { return {-dx, -dy}; }
    constexpr Offset operator+(Offset o) const { return {dx + o.dx, dy + o.dy}; }
    constexpr Offset transposed() const { return {dy, dx}; }
    constexpr int manhattan() const { return (dx < 0 ? -dx : dx) + (dy < 0 ? -dy : dy); }

    friend constexpr bool operator==(const Offset&, const Offset&) = default;
};

// Row-major order over offsets (dy first, then dx).
constexpr bool row_major_less(Offset a, Offset b) {
    return a.dy != b.dy ? a.dy < b.dy : a.dx < b.dx;
}

constexpr Cell operator+(Cell c, Offset o) { return {c.row + o.dy, c.col + o.dx}; }

class GridTopology {
public:
    // Throws std::invalid_argument unless rows >= 3 and cols >= 3.
    GridTopology(int rows, int cols);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::size_t size() const { return static_cast<std::size_t>(rows_) * static_cast<std::size_t>(cols_); }

    bool contains(Cell c) const { return c.row >= 0 && c.row < rows_ && c.col >= 0 && c.col < cols_; }
    std::size_t index(Cell c) const {
        return static_cast<std::size_t>(c.row) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(c.col);
    }
    Cell cell(std::size_t index) const {
        return {static_cast<int>(index / static_cast<std::size_t>(cols_)),
                static_cast<int>(index % static_cast<std::size_t>(cols_))};
    }
    GridTopology transposed() const { return {cols_, rows_}; }

    friend bool operator==(const GridTopology&, const GridTopology&) = default;

private:
    int rows_;
    int cols_;
};

enum class NeighborhoodScheme { N4, N8, VN2 };

// Offsets of a scheme in row-major order. N4 has 4, N8 has 8, VN2 has 12.
std::span<const Offset> scheme_offsets(NeighborhoodScheme scheme);
bool scheme_contains(NeighborhoodScheme scheme, Offset o);
std::string_view to_string(NeighborhoodScheme scheme);

// Resolves cell + offset to an in-grid cell. Each axis that leaves the grid
// has its offset component negated, so the opposite neighbor is counted.
// Requires |dx|, |dy| <= 2. If the negated offset also leaves the grid (the
// middle of a 3-wide axis with a two-hop offset), the result is clamped.
Cell reflect_offset(const GridTopology& grid, Cell cell, Offset offset);

struct Neighbor {
    Offset offset;
    Cell cell;
    bool reflected = false;
};

std::vector<Neighbor> neighbors(const GridTopology& grid, Cell cell, NeighborhoodScheme scheme);

// Activator and inhibitor offset sets for one pattern class.
struct RegionSpec {
    std::vector<Offset> activator;
    std::vector<Offset> inhibitor;

    RegionSpec transposed() const;
};

// Activator |dx|<=ax, |dy|<=ay inside inhibitor |dx|<=ix, |dy|<=iy. Each
// rectangle is clipped to the hop diamond of radius max of its two extents,
// so every offset is within two hops. Throws
// std::invalid_argument when the activator is not inside the inhibitor or
// when the inhibitor reaches past two hops.
RegionSpec rect_region(int ax, int ay, int ix, int iy);

}  // namespace camo
