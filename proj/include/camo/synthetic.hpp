#pragma once

// Synthetic test backgrounds standing in for natural photographs.

#include <cstdint>
#include <optional>
#include <string_view>

#include "camo/image.hpp"

namespace camo::synth {

// Full-width bars; rows [k*period, k*period + bar) are white.
Image horizontal_stripes(int width, int height, int period, int bar);
Image vertical_stripes(int width, int height, int period, int bar);

// White disks of `radius` centered on the cells of a `cell`-pixel lattice
// whose (row + col) is even, on a black background (polka dots).
Image polka_dots(int width, int height, int cell, double radius);

// Uniform random pixels, reproducible from `seed`.
Image noise(int width, int height, std::uint64_t seed);

// Named 128x128 fixtures: "stripes_h", "stripes_v", "stripes_v_wide", "spots".
std::optional<Image> named(std::string_view name);

}  // namespace camo::synth
