#pragma once

// Grayscale images, per-cell fields, and the PGM reader/writer.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "camo/grid.hpp"

namespace camo {

struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // row-major

    Image() = default;
    Image(int w, int h, std::uint8_t fill = 0);

    std::uint8_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }

    friend bool operator==(const Image&, const Image&) = default;
};

// One value per grid cell, stored row-major.
template <class T>
class Field {
public:
    explicit Field(GridTopology grid, T fill = T{}) : grid_(grid), values_(grid.size(), fill) {}
    Field(GridTopology grid, std::vector<T> values) : grid_(grid), values_(std::move(values)) {
        if (values_.size() != grid_.size()) throw std::invalid_argument("field size does not match grid");
    }

    const GridTopology& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }

    const T& operator[](std::size_t i) const { return values_[i]; }
    T& operator[](std::size_t i) { return values_[i]; }
    const T& at(Cell c) const { return values_[grid_.index(c)]; }
    T& at(Cell c) { return values_[grid_.index(c)]; }

    std::span<const T> values() const { return values_; }
    std::span<T> values() { return values_; }

    Field transposed() const {
        Field out(grid_.transposed());
        for (int r = 0; r < grid_.rows(); ++r)
            for (int c = 0; c < grid_.cols(); ++c) out.at({c, r}) = at({r, c});
        return out;
    }

    friend bool operator==(const Field&, const Field&) = default;

private:
    GridTopology grid_;
    std::vector<T> values_;
};

// Sensed intensity per cell on the 0-255 scale, kept real-valued.
using ColorField = Field<double>;

// 0 = off (black), 1 = on (white).
using BinaryField = Field<std::uint8_t>;

class PgmError : public std::runtime_error {
public:
    enum class Kind { MalformedHeader, MaxvalTooLarge, Truncated, BadPixel };

    PgmError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

// Reads binary (P5) or ASCII (P2) PGM with maxval <= 255. Pixel values are
// returned as stored, without rescaling to 255.
Image parse_pgm(std::span<const std::uint8_t> bytes);
Image parse_pgm(std::string_view text);

// Always emits P5 with maxval 255.
std::vector<std::uint8_t> write_pgm(const Image& image);
std::vector<std::uint8_t> write_pgm(const BinaryField& field);
// Values are rounded half away from zero and clamped to [0, 255].
std::vector<std::uint8_t> write_pgm(const ColorField& field);

// Throws std::runtime_error (I/O) or PgmError (format).
Image read_pgm_file(const std::string& path);
void write_file(const std::string& path, std::span<const std::uint8_t> bytes);

// Exact block means. Throws std::invalid_argument unless the image divides
// evenly into the grid.
ColorField block_downsample(const Image& image, const GridTopology& grid);

inline constexpr double kDefaultBinarizeThreshold = 127.0;

// value < threshold -> off, otherwise on.
BinaryField binarize(const ColorField& field, double threshold = kDefaultBinarizeThreshold);

// Interprets an image whose size matches the grid as a per-cell field.
ColorField field_from_image(const Image& image, const GridTopology& grid);

}  // namespace camo
