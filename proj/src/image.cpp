#include "camo/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <optional>

namespace camo {

Image::Image(int w, int h, std::uint8_t fill)
    : width(w), height(h), pixels(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

namespace {

class HeaderReader {
public:
    explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            const auto ch = bytes_[pos_];
            if (ch == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
            } else if (std::isspace(ch)) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    std::optional<long> next_int() {
        skip_space_and_comments();
        if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) return std::nullopt;
        long v = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            v = v * 10 + (bytes_[pos_] - '0');
            if (v > std::numeric_limits<int>::max()) return std::nullopt;
            ++pos_;
        }
        return v;
    }

    std::size_t pos() const { return pos_; }
    void advance(std::size_t n) { pos_ += n; }
    bool at_end() const { return pos_ >= bytes_.size(); }
    std::uint8_t peek() const { return bytes_[pos_]; }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

long header_int(HeaderReader& in, const char* name) {
    auto v = in.next_int();
    if (!v) throw PgmError(PgmError::Kind::MalformedHeader, std::string("PGM header: bad or missing ") + name);
    return *v;
}

std::uint8_t to_byte(double v) {
    return static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0));
}

}  // namespace

Image parse_pgm(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5')) {
        throw PgmError(PgmError::Kind::MalformedHeader, "PGM header: expected magic P2 or P5");
    }
    const bool binary = bytes[1] == '5';
    HeaderReader in(bytes);
    in.advance(2);
    if (!in.at_end() && !std::isspace(in.peek()) && in.peek() != '#') {
        throw PgmError(PgmError::Kind::MalformedHeader, "PGM header: garbage after magic");
    }

    const long width = header_int(in, "width");
    const long height = header_int(in, "height");
    const long maxval = header_int(in, "maxval");
    if (width <= 0 || height <= 0) {
        throw PgmError(PgmError::Kind::MalformedHeader, "PGM header: dimensions must be positive");
    }
    if (maxval == 0) throw PgmError(PgmError::Kind::MalformedHeader, "PGM header: maxval must be positive");
    if (maxval > 255) {
        throw PgmError(PgmError::Kind::MaxvalTooLarge,
                       "PGM maxval " + std::to_string(maxval) + " exceeds 255 (16-bit PGM unsupported)");
    }

    Image img(static_cast<int>(width), static_cast<int>(height));
    const std::size_t count = img.pixels.size();

    if (binary) {
        // Exactly one whitespace byte separates maxval from the raster.
        if (in.at_end() || !std::isspace(in.peek())) {
            throw PgmError(PgmError::Kind::Truncated, "PGM: missing raster");
        }
        in.advance(1);
        const std::size_t available = bytes.size() - std::min(bytes.size(), in.pos());
        if (available < count) {
            throw PgmError(PgmError::Kind::Truncated, "PGM raster truncated: expected " + std::to_string(count) +
                                                          " bytes, found " + std::to_string(available));
        }
        std::copy_n(bytes.begin() + static_cast<std::ptrdiff_t>(in.pos()), count, img.pixels.begin());
        for (auto p : img.pixels) {
            if (p > maxval) throw PgmError(PgmError::Kind::BadPixel, "PGM pixel exceeds maxval");
        }
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            in.skip_space_and_comments();
            if (in.at_end()) {
                throw PgmError(PgmError::Kind::Truncated, "PGM raster truncated after " + std::to_string(i) +
                                                              " of " + std::to_string(count) + " samples");
            }
            auto v = in.next_int();
            if (!v) throw PgmError(PgmError::Kind::BadPixel, "PGM: non-numeric sample");
            if (*v > maxval) throw PgmError(PgmError::Kind::BadPixel, "PGM pixel exceeds maxval");
            img.pixels[i] = static_cast<std::uint8_t>(*v);
        }
    }
    return img;
}

Image parse_pgm(std::string_view text) {
    return parse_pgm(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::vector<std::uint8_t> write_pgm(const Image& image) {
    const std::string header =
        "P5\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), image.pixels.begin(), image.pixels.end());
    return out;
}

std::vector<std::uint8_t> write_pgm(const BinaryField& field) {
    const auto& g = field.grid();
    Image img(g.cols(), g.rows());
    for (std::size_t i = 0; i < field.size(); ++i) img.pixels[i] = field[i] ? 255 : 0;
    return write_pgm(img);
}

std::vector<std::uint8_t> write_pgm(const ColorField& field) {
    const auto& g = field.grid();
    Image img(g.cols(), g.rows());
    for (std::size_t i = 0; i < field.size(); ++i) img.pixels[i] = to_byte(field[i]);
    return write_pgm(img);
}

Image read_pgm_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_pgm(bytes);
}

void write_file(const std::string& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("short write to " + path);
}

ColorField block_downsample(const Image& image, const GridTopology& grid) {
    if (image.width % grid.cols() != 0 || image.height % grid.rows() != 0) {
        throw std::invalid_argument("image " + std::to_string(image.width) + "x" + std::to_string(image.height) +
                                    " does not divide into a " + std::to_string(grid.rows()) + "x" +
                                    std::to_string(grid.cols()) + " grid");
    }
    const int bw = image.width / grid.cols();
    const int bh = image.height / grid.rows();
    ColorField out(grid);
    for (int r = 0; r < grid.rows(); ++r) {
        for (int c = 0; c < grid.cols(); ++c) {
            std::uint64_t sum = 0;
            for (int y = r * bh; y < (r + 1) * bh; ++y)
                for (int x = c * bw; x < (c + 1) * bw; ++x) sum += image.at(x, y);
            out.at({r, c}) = static_cast<double>(sum) / static_cast<double>(bw * bh);
        }
    }
    return out;
}

BinaryField binarize(const ColorField& field, double threshold) {
    BinaryField out(field.grid());
    for (std::size_t i = 0; i < field.size(); ++i) out[i] = field[i] < threshold ? 0 : 1;
    return out;
}

ColorField field_from_image(const Image& image, const GridTopology& grid) {
    if (image.width != grid.cols() || image.height != grid.rows()) {
        throw std::invalid_argument("image size does not match grid");
    }
    ColorField out(grid);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = image.pixels[i];
    return out;
}

}  // namespace camo
