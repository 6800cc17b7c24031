#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <stdexcept>

#include "camo/experiments.hpp"
#include "camo/generator.hpp"
#include "camo/image.hpp"
#include "camo/rng.hpp"
#include "camo/swarm.hpp"
#include "camo/synthetic.hpp"

namespace camo::cli {

namespace {

namespace fs = std::filesystem;

struct InvariantViolation : std::logic_error {
    using std::logic_error::logic_error;
};

struct CliConfig {
    std::string image;
    int rows = 8;
    int cols = 8;
    double t_thresh = kDefaultClassifyThreshold;
    double w1 = 1.0;
    double w2 = -0.75;
    int iterations = 10;
    double rho_meas = 0.0;
    double rho_comm = 0.0;
    std::uint64_t seed = 0;
    bool tdma = false;
    std::vector<std::string> kills;
    std::string weights = "adaptive";
    int threads = 1;
    std::string out = "out";
};

void add_common(CLI::App* sub, CliConfig& c) {
    sub->add_option("--rows", c.rows, "grid rows")->capture_default_str();
    sub->add_option("--cols", c.cols, "grid columns")->capture_default_str();
    sub->add_option("--t-thresh", c.t_thresh, "local pattern threshold")->capture_default_str();
    sub->add_option("--w1", c.w1, "activator field value")->capture_default_str();
    sub->add_option("--w2", c.w2, "inhibitor field value")->capture_default_str();
    sub->add_option("--iterations", c.iterations, "generator iteration cap")->capture_default_str();
    sub->add_option("--seed", c.seed, "random seed")->capture_default_str();
    sub->add_option("--threads", c.threads, "worker threads")->capture_default_str();
    sub->add_option("--out", c.out, "output directory")->capture_default_str();
}

void add_sim(CLI::App* sub, CliConfig& c) {
    sub->add_option("--rho-meas", c.rho_meas, "measurement error probability")->capture_default_str();
    sub->add_option("--rho-comm", c.rho_comm, "message loss probability")->capture_default_str();
    sub->add_flag("--tdma", c.tdma, "model slot collisions");
    sub->add_option("--kill", c.kills, "kill agent at frame, as ID@FRAME (repeatable)");
    sub->add_option("--weights", c.weights, "consensus weights under loss: adaptive or static")
        ->check(CLI::IsMember({"adaptive", "static"}))
        ->capture_default_str();
}

swarm::Kill parse_kill(const std::string& s) {
    const auto at = s.find('@');
    if (at == std::string::npos) throw std::invalid_argument("--kill expects ID@FRAME, got '" + s + "'");
    try {
        const unsigned long id = std::stoul(s.substr(0, at));
        const int frame = std::stoi(s.substr(at + 1));
        if (id > 0xffff) throw std::invalid_argument("agent id out of range");
        return {static_cast<AgentId>(id), frame};
    } catch (const std::logic_error&) {
        throw std::invalid_argument("--kill expects ID@FRAME, got '" + s + "'");
    }
}

swarm::SimConfig to_sim_config(const CliConfig& c) {
    swarm::SimConfig cfg;
    cfg.noise = {c.rho_meas, c.rho_comm, c.seed};
    cfg.classify_threshold = c.t_thresh;
    cfg.generator = {c.w1, c.w2, c.iterations};
    cfg.tdma = c.tdma;
    cfg.weights = c.weights == "static" ? swarm::WeightMode::Static : swarm::WeightMode::LossAdapted;
    cfg.threads = c.threads;
    for (const auto& k : c.kills) cfg.kills.push_back(parse_kill(k));
    return cfg;
}

void write_text(const fs::path& path, const std::string& text) {
    write_file(path.string(),
               std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

void check_run(const swarm::RunResult& r) {
    if (r.final_state.size() != r.grid.size() || r.trace.empty()) throw InvariantViolation("run result is incomplete");
    for (const auto& p : r.trace.back()) {
        const double sum = p.h + p.v + p.m;
        if (std::abs(sum - 1.0) > 1e-9 || p.h < -1e-12 || p.v < -1e-12 || p.m < -1e-12) {
            throw InvariantViolation("consensus left the probability simplex");
        }
    }
}

int cmd_run(const CliConfig& c) {
    const GridTopology grid(c.rows, c.cols);
    const auto cfg = to_sim_config(c);
    cfg.validate(grid);
    const Image image = read_pgm_file(c.image);
    const auto result = swarm::run_pipeline(image, grid, cfg);
    check_run(result);
    swarm::write_run_artifacts(result, c.out);

    std::cout << "class=" << to_string(result.selected_class()) << "\n"
              << "convergence=" << to_string(result.convergence) << "\n"
              << "iterations=" << result.generator_iterations << "\n";
    if (std::any_of(result.tie.begin(), result.tie.end(), [](bool t) { return t; })) {
        std::cout << "ties=" << std::count(result.tie.begin(), result.tie.end(), true) << "\n";
    }
    return kOk;
}

int cmd_sweep(const CliConfig& c, const std::vector<double>& rhos, const std::vector<std::string>& mode_names,
              int trials) {
    const GridTopology grid(c.rows, c.cols);
    if (trials < 1) throw std::invalid_argument("--trials must be at least 1");
    std::vector<experiments::NoiseMode> modes;
    for (const auto& m : mode_names) {
        auto parsed = experiments::parse_noise_mode(m);
        if (!parsed) throw std::invalid_argument("unknown noise mode '" + m + "'");
        modes.push_back(*parsed);
    }
    auto cfg = to_sim_config(c);
    cfg.validate(grid);
    const Image image = read_pgm_file(c.image);
    const auto grid_rhos = rhos.empty() ? experiments::default_rho_grid() : rhos;
    const auto rows = experiments::error_sweep(image, grid, grid_rhos, modes, trials, cfg, c.threads);
    fs::create_directories(c.out);
    const auto csv = experiments::sweep_to_csv(rows);
    write_text(fs::path(c.out) / "sweep.csv", csv);
    std::cout << csv;
    return kOk;
}

int cmd_generate(const CliConfig& c, const std::string& class_name, bool random_init) {
    const GridTopology grid(c.rows, c.cols);
    const auto cls = parse_pattern_class(class_name);
    if (!cls) throw std::invalid_argument("unknown pattern class '" + class_name + "'");
    const GeneratorParams params{c.w1, c.w2, c.iterations};
    params.validate();

    BinaryField init(grid);
    if (random_init) {
        Rng rng(derive_seed(c.seed, {0x67656eULL}));
        for (std::size_t i = 0; i < init.size(); ++i) init[i] = rng.bernoulli(0.5) ? 1 : 0;
    } else {
        if (c.image.empty()) throw std::invalid_argument("generate needs --init or --random");
        const Image image = read_pgm_file(c.image);
        const ColorField field = (image.width == grid.cols() && image.height == grid.rows())
                                     ? field_from_image(image, grid)
                                     : block_downsample(image, grid);
        init = binarize(field);
    }

    const auto run = run_generator(init, region_for(*cls), params);
    fs::create_directories(c.out);
    write_file((fs::path(c.out) / "initial.pgm").string(), write_pgm(init));
    for (std::size_t k = 1; k < run.history.size(); ++k) {
        char name[32];
        std::snprintf(name, sizeof name, "pattern_iter%02zu.pgm", k);
        write_file((fs::path(c.out) / name).string(), write_pgm(run.history[k]));
    }
    write_file((fs::path(c.out) / "final.pgm").string(), write_pgm(run.final_state));
    std::cout << "class=" << to_string(*cls) << "\n"
              << "convergence=" << to_string(run.convergence) << "\n"
              << "iterations=" << run.iterations_used << "\n";
    return kOk;
}

int cmd_synth(const std::string& kind, const std::string& out, std::uint64_t seed) {
    std::optional<Image> img = kind == "noise" ? std::optional<Image>(synth::noise(128, 128, seed)) : synth::named(kind);
    if (!img) throw std::invalid_argument("unknown fixture '" + kind + "'");
    write_file(out, write_pgm(*img));
    return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"Distributed camouflage swarm simulator"};
    app.require_subcommand(1);
    app.set_config("--config", "", "INI file with keys under [run], [sweep] or [generate]; flags take precedence");

    CliConfig run_cfg, sweep_cfg, gen_cfg;

    auto* run = app.add_subcommand("run", "run the four-phase swarm pipeline on an image");
    run->add_option("--image", run_cfg.image, "input PGM")->required();
    add_common(run, run_cfg);
    add_sim(run, run_cfg);

    std::vector<double> rhos;
    std::vector<std::string> modes{"meas-only", "comm-only", "both"};
    int trials = 10;
    auto* sweep = app.add_subcommand("sweep", "pixel difference versus error probability");
    sweep->add_option("--image", sweep_cfg.image, "input PGM")->required();
    sweep->add_option("--rhos", rhos, "error probabilities (default 0,0.05,...,0.5)")->delimiter(',');
    sweep->add_option("--modes", modes, "meas-only, comm-only, both")->delimiter(',')->capture_default_str();
    sweep->add_option("--trials", trials, "trials per point")->capture_default_str();
    add_common(sweep, sweep_cfg);
    add_sim(sweep, sweep_cfg);

    std::string class_name;
    bool random_init = false;
    auto* gen = app.add_subcommand("generate", "run the pattern generator alone");
    gen->add_option("--class", class_name, "Horizontal, Vertical or Mottled")->required();
    gen->add_option("--init", gen_cfg.image, "initial state image (grid-sized or block-downsampled)");
    gen->add_flag("--random", random_init, "random initial state from --seed");
    add_common(gen, gen_cfg);

    std::string synth_kind, synth_out;
    std::uint64_t synth_seed = 0;
    auto* syn = app.add_subcommand("synth", "write a synthetic 128x128 test background");
    syn->add_option("--kind", synth_kind, "stripes_h, stripes_v, stripes_v_wide, spots, noise")->required();
    syn->add_option("--out", synth_out, "output PGM path")->required();
    syn->add_option("--seed", synth_seed, "seed for noise");

    // Lets --config follow the subcommand name.
    for (auto* sub : {run, sweep, gen, syn}) sub->fallthrough();

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }

    try {
        if (*run) return cmd_run(run_cfg);
        if (*sweep) return cmd_sweep(sweep_cfg, rhos, modes, trials);
        if (*gen) return cmd_generate(gen_cfg, class_name, random_init);
        if (*syn) return cmd_synth(synth_kind, synth_out, synth_seed);
    } catch (const InvariantViolation& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIo;
    }
    return kUsage;
}

}  // namespace camo::cli
