#pragma once

// Error metrics and batch drivers for noise-robustness studies.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "camo/image.hpp"
#include "camo/swarm.hpp"

namespace camo::experiments {

// Number of cells whose states differ. Throws std::invalid_argument when the
// grids differ.
int pixel_difference(const BinaryField& a, const BinaryField& b);

struct OrientationScore {
    double horizontal = 0.0;
    double vertical = 0.0;
};

inline constexpr double kOrientationThreshold = 64.0;

// Fraction of cells that classify Horizontal / Vertical when the field is
// read as a 0/255 image. With a mask, only cells where mask[i] is true count.
OrientationScore orientation_score(const BinaryField& field);
OrientationScore orientation_score(const BinaryField& field, const std::vector<bool>& mask);

enum class NoiseMode { MeasOnly, CommOnly, Both };

std::string_view to_string(NoiseMode m);
std::optional<NoiseMode> parse_noise_mode(std::string_view s);

struct SweepRow {
    NoiseMode mode = NoiseMode::Both;
    double rho = 0.0;
    int trials = 0;
    double mean_diff = 0.0;
    double stddev_diff = 0.0;
};

// rho in {0, 0.05, ..., 0.5}
std::vector<double> default_rho_grid();

// For each (mode, rho) pair, in that nesting order, runs the pipeline
// `trials` times and reports the mean pixel difference against the
// zero-noise run of the same configuration. Trial t of point k uses seed
// derive_seed(base seed, {k, t}). Trials may run on up to `threads` workers;
// results do not depend on that number.
std::vector<SweepRow> error_sweep(const Image& image, const GridTopology& grid, std::span<const double> rhos,
                                  std::span<const NoiseMode> modes, int trials, const swarm::SimConfig& base,
                                  int threads = 1);

// Columns: mode,rho,trials,mean_diff,stddev_diff
std::string sweep_to_csv(std::span<const SweepRow> rows);

}  // namespace camo::experiments
