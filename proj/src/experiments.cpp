#include "camo/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "camo/descriptor.hpp"
#include "camo/parallel.hpp"
#include "camo/rng.hpp"

namespace camo::experiments {

int pixel_difference(const BinaryField& a, const BinaryField& b) {
    if (!(a.grid() == b.grid())) throw std::invalid_argument("pixel_difference: grid mismatch");
    int diff = 0;
    for (std::size_t i = 0; i < a.size(); ++i) diff += (a[i] != 0) != (b[i] != 0);
    return diff;
}

OrientationScore orientation_score(const BinaryField& field, const std::vector<bool>& mask) {
    if (mask.size() != field.size()) throw std::invalid_argument("orientation_score: mask size mismatch");
    ColorField colors(field.grid());
    for (std::size_t i = 0; i < field.size(); ++i) colors[i] = field[i] ? 255.0 : 0.0;
    const auto local = local_patterns(colors, kOrientationThreshold);

    std::size_t counted = 0, h = 0, v = 0;
    for (std::size_t i = 0; i < local.size(); ++i) {
        if (!mask[i]) continue;
        ++counted;
        h += local[i].h == 1.0;
        v += local[i].v == 1.0;
    }
    if (counted == 0) return {};
    return {static_cast<double>(h) / static_cast<double>(counted), static_cast<double>(v) / static_cast<double>(counted)};
}

OrientationScore orientation_score(const BinaryField& field) {
    return orientation_score(field, std::vector<bool>(field.size(), true));
}

std::string_view to_string(NoiseMode m) {
    switch (m) {
        case NoiseMode::MeasOnly: return "meas-only";
        case NoiseMode::CommOnly: return "comm-only";
        case NoiseMode::Both: return "both";
    }
    return "?";
}

std::optional<NoiseMode> parse_noise_mode(std::string_view s) {
    if (s == "meas-only" || s == "meas") return NoiseMode::MeasOnly;
    if (s == "comm-only" || s == "comm") return NoiseMode::CommOnly;
    if (s == "both") return NoiseMode::Both;
    return std::nullopt;
}

std::vector<double> default_rho_grid() {
    std::vector<double> rhos;
    for (int k = 0; k <= 10; ++k) rhos.push_back(k * 0.05);
    return rhos;
}

std::vector<SweepRow> error_sweep(const Image& image, const GridTopology& grid, std::span<const double> rhos,
                                  std::span<const NoiseMode> modes, int trials, const swarm::SimConfig& base,
                                  int threads) {
    if (trials < 1) throw std::invalid_argument("error_sweep needs at least one trial");
    for (double rho : rhos) {
        if (!(rho >= 0.0 && rho <= 1.0)) throw std::invalid_argument("sweep rho must be in [0, 1]");
    }

    swarm::SimConfig clean = base;
    clean.noise.rho_meas = 0.0;
    clean.noise.rho_comm = 0.0;
    const BinaryField reference = swarm::run_pipeline(image, grid, clean).final_state;

    struct Job {
        std::size_t point;
        swarm::SimConfig config;
    };
    std::vector<SweepRow> rows;
    std::vector<Job> jobs;
    for (NoiseMode mode : modes) {
        for (double rho : rhos) {
            const std::size_t k = rows.size();
            rows.push_back({mode, rho, trials, 0.0, 0.0});
            for (int t = 0; t < trials; ++t) {
                swarm::SimConfig cfg = base;
                cfg.threads = 1;
                cfg.noise.rho_meas = mode == NoiseMode::CommOnly ? 0.0 : rho;
                cfg.noise.rho_comm = mode == NoiseMode::MeasOnly ? 0.0 : rho;
                cfg.noise.seed = derive_seed(base.noise.seed, {k, static_cast<std::uint64_t>(t)});
                jobs.push_back({k, std::move(cfg)});
            }
        }
    }

    std::vector<int> diffs(jobs.size());
    parallel_for(jobs.size(), threads, [&](std::size_t j) {
        diffs[j] = pixel_difference(swarm::run_pipeline(image, grid, jobs[j].config).final_state, reference);
    });

    for (std::size_t k = 0; k < rows.size(); ++k) {
        double sum = 0.0, sq = 0.0;
        for (int t = 0; t < trials; ++t) {
            const double d = diffs[k * static_cast<std::size_t>(trials) + static_cast<std::size_t>(t)];
            sum += d;
            sq += d * d;
        }
        const double mean = sum / trials;
        rows[k].mean_diff = mean;
        rows[k].stddev_diff = trials > 1 ? std::sqrt(std::max(0.0, (sq - trials * mean * mean) / (trials - 1))) : 0.0;
    }
    return rows;
}

std::string sweep_to_csv(std::span<const SweepRow> rows) {
    std::string out = "mode,rho,trials,mean_diff,stddev_diff\n";
    char line[160];
    for (const auto& r : rows) {
        std::snprintf(line, sizeof line, "%s,%.4g,%d,%.6g,%.6g\n", std::string(to_string(r.mode)).c_str(), r.rho,
                      r.trials, r.mean_diff, r.stddev_diff);
        out += line;
    }
    return out;
}

}  // namespace camo::experiments
