#include "camo/synthetic.hpp"

#include <cmath>

#include "camo/rng.hpp"

namespace camo::synth {

Image horizontal_stripes(int width, int height, int period, int bar) {
    Image img(width, height);
    for (int y = 0; y < height; ++y) {
        const std::uint8_t v = (y % period) < bar ? 255 : 0;
        for (int x = 0; x < width; ++x) img.at(x, y) = v;
    }
    return img;
}

Image vertical_stripes(int width, int height, int period, int bar) {
    Image img(width, height);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) img.at(x, y) = (x % period) < bar ? 255 : 0;
    return img;
}

Image polka_dots(int width, int height, int cell, double radius) {
    Image img(width, height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const int r = y / cell;
            const int c = x / cell;
            if ((r + c) % 2 != 0) continue;
            const double cx = (c + 0.5) * cell;
            const double cy = (r + 0.5) * cell;
            const double dx = x + 0.5 - cx;
            const double dy = y + 0.5 - cy;
            if (dx * dx + dy * dy <= radius * radius) img.at(x, y) = 255;
        }
    }
    return img;
}

Image noise(int width, int height, std::uint64_t seed) {
    Image img(width, height);
    Rng rng(derive_seed(seed, {0x6e6f697365ULL}));
    for (auto& p : img.pixels) p = static_cast<std::uint8_t>(rng.next() & 0xff);
    return img;
}

std::optional<Image> named(std::string_view name) {
    if (name == "stripes_h") return horizontal_stripes(128, 128, 32, 16);
    if (name == "stripes_v") return vertical_stripes(128, 128, 32, 16);
    if (name == "stripes_v_wide") return vertical_stripes(128, 128, 64, 32);
    if (name == "spots") return polka_dots(128, 128, 16, 7.0);
    return std::nullopt;
}

}  // namespace camo::synth
