#include "camo/swarm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <stdexcept>

#include "camo/parallel.hpp"

namespace camo::swarm {

namespace {

enum StreamTag : std::uint64_t { kSenseStream = 1, kDeliverStream = 2 };

void sort_table(std::vector<NeighborEntry>& table) {
    std::sort(table.begin(), table.end(),
              [](const NeighborEntry& a, const NeighborEntry& b) { return row_major_less(a.offset, b.offset); });
}

std::optional<std::size_t> table_index(const AgentState& a, AgentId id) {
    for (std::size_t k = 0; k < a.table.size(); ++k)
        if (a.table[k].id == id) return k;
    return std::nullopt;
}

std::optional<std::size_t> table_index(const AgentState& a, Offset o) {
    for (std::size_t k = 0; k < a.table.size(); ++k)
        if (a.table[k].offset == o) return k;
    return std::nullopt;
}

// Offsets to try for a missing neighbor: the offset itself, then the
// reflections across each axis, then across both.
std::vector<Offset> fallback_offsets(Offset o) {
    std::vector<Offset> out{o};
    if (o.dy != 0) out.push_back({o.dx, -o.dy});
    if (o.dx != 0) out.push_back({-o.dx, o.dy});
    if (o.dx != 0 && o.dy != 0) out.push_back({-o.dx, -o.dy});
    // Same clamp as reflect_offset on a 3-wide axis.
    if (o.dy == 2 || o.dy == -2) out.push_back({0, -o.dy / 2});
    if (o.dx == 2 || o.dx == -2) out.push_back({-o.dx / 2, 0});
    return out;
}

// A delivered message with the sender's position relative to the receiver.
// The position stands in for range-and-bearing and is only consulted during
// neighbor discovery.
struct Delivered {
    const Message* msg;
    Offset bearing;
};

class Simulator {
public:
    Simulator(const GridTopology& grid, const SimConfig& config, std::vector<AgentState> agents)
        : grid_(grid), config_(config), agents_(std::move(agents)) {}

    std::vector<AgentState>& agents() { return agents_; }
    std::vector<Event>& events() { return events_; }
    int frame_index() const { return frame_; }

    // One frame: kills, slot collisions, broadcast of make(i) by every live
    // unmuted agent, lossy delivery, then absorb(i, inbox) on every live
    // agent. absorb may only modify agent i and state indexed by i.
    template <class Make, class Absorb>
    void run_frame(Make&& make, Absorb&& absorb) {
        const std::size_t n = agents_.size();
        apply_kills();

        std::set<AgentId> muted;
        if (config_.tdma) {
            muted = tdma_collisions(agents_, config_.plan.slots_per_frame, grid_);
            for (const auto& a : agents_)
                if (muted.contains(a.id)) events_.push_back({frame_, a.id, "collision", "slot=" + slot_str(a.id)});
        }

        std::vector<std::optional<Message>> outbox(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (agents_[i].alive && !muted.contains(agents_[i].id)) outbox[i] = make(i);
        }

        std::vector<std::vector<Event>> local_events(n);
        parallel_for(n, config_.threads, [&](std::size_t i) {
            auto& a = agents_[i];
            if (!a.alive) return;
            Rng rng(derive_seed(config_.noise.seed, {kDeliverStream, static_cast<std::uint64_t>(frame_), a.id}));
            std::vector<Delivered> inbox;
            int lost = 0;
            for (Offset o : scheme_offsets(NeighborhoodScheme::VN2)) {
                const Cell c = a.cell + o;
                if (!grid_.contains(c)) continue;
                const auto& sent = outbox[grid_.index(c)];
                if (!sent) continue;
                if (deliver(*sent, config_.noise, rng)) {
                    inbox.push_back({&*sent, o});
                } else {
                    ++lost;
                }
            }
            if (lost > 0) local_events[i].push_back({frame_, a.id, "drop", "lost=" + std::to_string(lost)});
            absorb(i, inbox);
        });
        for (auto& evs : local_events) events_.insert(events_.end(), evs.begin(), evs.end());
        ++frame_;
    }

    void set_phase(Phase p) {
        for (auto& a : agents_)
            if (a.alive) a.phase = p;
    }

private:
    std::string slot_str(AgentId id) const { return std::to_string(assign_slot(id, config_.plan.slots_per_frame)); }

    void apply_kills() {
        for (const auto& k : config_.kills) {
            if (k.frame != frame_) continue;
            for (auto& a : agents_) {
                if (a.id == k.id && a.alive) {
                    a.alive = false;
                    events_.push_back({frame_, a.id, "failure", "killed"});
                }
            }
        }
    }

    const GridTopology& grid_;
    const SimConfig& config_;
    std::vector<AgentState> agents_;
    std::vector<Event> events_;
    int frame_ = 0;
};

void add_entry(AgentState& a, NeighborEntry e) {
    if (e.id == a.id || e.offset == Offset{0, 0} || e.offset.manhattan() > 2) return;
    if (a.find(e.id) || a.at_offset(e.offset)) return;
    a.table.push_back(e);
}

void discovery(Simulator& sim, int frames) {
    auto& agents = sim.agents();
    sim.set_phase(Phase::P0);
    for (int f = 0; f < frames; ++f) {
        sim.run_frame(
            [&](std::size_t i) {
                return Message{agents[i].id, Phase::P0, NeighborAnnounce{agents[i].table}};
            },
            [&](std::size_t i, std::span<const Delivered> inbox) {
                auto& a = agents[i];
                for (const auto& d : inbox) {
                    if (d.bearing.manhattan() != 1) continue;
                    add_entry(a, {d.msg->sender, d.bearing});
                    for (const auto& e : std::get<NeighborAnnounce>(d.msg->body).known) {
                        add_entry(a, {e.id, d.bearing + e.offset});
                    }
                }
                sort_table(a.table);
            });
    }
}

int consensus_degree(const AgentState& a) {
    return static_cast<int>(std::count_if(a.table.begin(), a.table.end(), [](const NeighborEntry& e) {
        return scheme_contains(NeighborhoodScheme::N8, e.offset);
    }));
}

BinaryField collect_states(const GridTopology& grid, std::span<const AgentState> agents) {
    BinaryField f(grid);
    for (const auto& a : agents) f.at(a.cell) = a.on;
    return f;
}

ConsensusState collect_probs(std::span<const AgentState> agents) {
    ConsensusState s;
    s.reserve(agents.size());
    for (const auto& a : agents) s.push_back(a.p);
    return s;
}

template <class T>
std::string printf_str(const char* fmt, T v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

}  // namespace

void NoiseConfig::validate() const {
    if (!(rho_meas >= 0.0 && rho_meas <= 1.0)) throw std::invalid_argument("rho_meas must be in [0, 1]");
    if (!(rho_comm >= 0.0 && rho_comm <= 1.0)) throw std::invalid_argument("rho_comm must be in [0, 1]");
}

void PhasePlan::validate() const {
    if (frames_phase0 < 1 || frames_phase1 < 1 || frames_phase2 < 1 || frames_phase3 < 1) {
        throw std::invalid_argument("every phase needs at least one frame");
    }
    if (slots_per_frame < 1) throw std::invalid_argument("slots_per_frame must be positive");
    if (slot_ms < 1) throw std::invalid_argument("slot_ms must be positive");
}

void SimConfig::validate(const GridTopology& grid) const {
    noise.validate();
    plan.validate();
    generator.validate();
    if (!std::isfinite(classify_threshold) || classify_threshold < 0.0) {
        throw std::invalid_argument("classification threshold must be non-negative");
    }
    if (!std::isfinite(binarize_threshold)) throw std::invalid_argument("binarize threshold must be finite");
    if (threads < 1) throw std::invalid_argument("threads must be at least 1");
    for (PatternClass c : {PatternClass::Horizontal, PatternClass::Vertical, PatternClass::Mottled}) {
        (void)region_for(c, regions);
    }
    if (!ids.empty()) {
        if (ids.size() != grid.size()) throw std::invalid_argument("need one id per grid cell");
        std::vector<AgentId> sorted(ids);
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            throw std::invalid_argument("agent ids must be unique");
        }
    } else if (grid.size() > 65536) {
        throw std::invalid_argument("grid has more cells than 16-bit ids");
    }
    for (const auto& k : kills) {
        if (k.frame < 0) throw std::invalid_argument("kill frame must be non-negative");
        const bool known = ids.empty() ? k.id < grid.size() : std::find(ids.begin(), ids.end(), k.id) != ids.end();
        if (!known) throw std::invalid_argument("kill names unknown agent " + std::to_string(k.id));
    }
}

std::string_view to_string(Phase p) {
    switch (p) {
        case Phase::P0: return "P0";
        case Phase::P1: return "P1";
        case Phase::P2: return "P2";
        case Phase::P3: return "P3";
        case Phase::Done: return "Done";
    }
    return "?";
}

std::string_view to_string(WeightMode m) {
    return m == WeightMode::LossAdapted ? "loss-adapted" : "static";
}

const NeighborEntry* AgentState::find(AgentId other) const {
    for (const auto& e : table)
        if (e.id == other) return &e;
    return nullptr;
}

const NeighborEntry* AgentState::at_offset(Offset o) const {
    for (const auto& e : table)
        if (e.offset == o) return &e;
    return nullptr;
}

PatternClass RunResult::selected_class() const {
    PatternProbs counts;
    for (std::size_t i = 0; i < agreed.size(); ++i) {
        if (i < alive.size() && !alive[i]) continue;
        counts += PatternProbs::one_hot(agreed[i]);
    }
    return argmax_pattern(counts);
}

double sense(double true_color, const NoiseConfig& noise, Rng& rng) {
    if (rng.bernoulli(noise.rho_meas)) return 255.0 * rng.uniform();
    return true_color;
}

bool deliver(const Message&, const NoiseConfig& noise, Rng& rng) {
    return !rng.bernoulli(noise.rho_comm);
}

int assign_slot(AgentId id, int slots_per_frame) {
    if (slots_per_frame < 1) throw std::invalid_argument("slots_per_frame must be positive");
    return static_cast<int>(id % slots_per_frame);
}

std::set<AgentId> tdma_collisions(std::span<const AgentState> agents, int slots_per_frame, const GridTopology& grid) {
    std::vector<const AgentState*> by_cell(grid.size(), nullptr);
    for (const auto& a : agents)
        if (a.alive && grid.contains(a.cell)) by_cell[grid.index(a.cell)] = &a;

    std::set<AgentId> muted;
    for (const auto& a : agents) {
        if (!a.alive) continue;
        const int slot = assign_slot(a.id, slots_per_frame);
        for (Offset o : scheme_offsets(NeighborhoodScheme::VN2)) {
            const Cell c = a.cell + o;
            if (!grid.contains(c)) continue;
            const AgentState* other = by_cell[grid.index(c)];
            if (other && assign_slot(other->id, slots_per_frame) == slot) {
                muted.insert(a.id);
                break;
            }
        }
    }
    return muted;
}

std::vector<AgentState> place_agents(const GridTopology& grid, std::span<const AgentId> ids) {
    std::vector<AgentState> agents(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        agents[i].id = ids.empty() ? static_cast<AgentId>(i) : ids[i];
        agents[i].cell = grid.cell(i);
    }
    return agents;
}

std::vector<AgentState> run_phase0(std::vector<AgentState> agents, const GridTopology& grid, const SimConfig& config,
                                   std::vector<Event>* events) {
    Simulator sim(grid, config, std::move(agents));
    discovery(sim, config.plan.frames_phase0);
    if (events) events->insert(events->end(), sim.events().begin(), sim.events().end());
    return std::move(sim.agents());
}

RunResult run_pipeline(const Image& image, const GridTopology& grid, const SimConfig& config) {
    config.validate(grid);
    const ColorField blurred = block_downsample(image, grid);
    const auto& plan = config.plan;
    const std::size_t n = grid.size();

    Simulator sim(grid, config, place_agents(grid, config.ids));
    auto& agents = sim.agents();

    // Phase 0: neighbor discovery.
    discovery(sim, plan.frames_phase0);

    // Phase 1: sense once, share colors, classify locally.
    sim.set_phase(Phase::P1);
    for (std::size_t i = 0; i < n; ++i) {
        auto& a = agents[i];
        if (!a.alive) continue;
        Rng rng(derive_seed(config.noise.seed, {kSenseStream, a.id}));
        a.sensed = sense(blurred[i], config.noise, rng);
    }
    std::vector<std::vector<std::optional<double>>> heard_color(n);
    for (std::size_t i = 0; i < n; ++i) heard_color[i].resize(agents[i].table.size());
    for (int f = 0; f < plan.frames_phase1; ++f) {
        sim.run_frame([&](std::size_t i) { return Message{agents[i].id, Phase::P1, ColorShare{agents[i].sensed}}; },
                      [&](std::size_t i, std::span<const Delivered> inbox) {
                          for (const auto& d : inbox) {
                              if (auto k = table_index(agents[i], d.msg->sender)) {
                                  heard_color[i][*k] = std::get<ColorShare>(d.msg->body).color;
                              }
                          }
                      });
    }
    for (std::size_t i = 0; i < n; ++i) {
        auto& a = agents[i];
        if (!a.alive) continue;
        auto color = [&](Offset o) {
            for (Offset c : {o, -o}) {
                if (auto k = table_index(a, c); k && heard_color[i][*k]) return *heard_color[i][*k];
            }
            return a.sensed;
        };
        const NeighborColors nc{a.sensed, color({0, -1}), color({1, 0}), color({0, 1}), color({-1, 0})};
        a.p = classify_local(second_derivatives(nc), config.classify_threshold);
    }

    // Phase 2: one consensus round per frame.
    sim.set_phase(Phase::P2);
    RunResult result{grid,
                     blurred,
                     ColorField(grid),
                     BinaryField(grid),
                     {},
                     {},
                     {},
                     {},
                     BinaryField(grid),
                     0,
                     Convergence::BudgetExhausted,
                     config.weights,
                     {},
                     {}};
    for (std::size_t i = 0; i < n; ++i) result.sensed[i] = agents[i].sensed;
    result.trace.push_back(collect_probs(agents));

    struct ProbNote {
        PatternProbs p;
        int degree = 0;
    };
    std::vector<int> degree(n);
    for (std::size_t i = 0; i < n; ++i) degree[i] = consensus_degree(agents[i]);
    std::vector<std::vector<std::optional<ProbNote>>> last_prob(n);
    for (std::size_t i = 0; i < n; ++i) last_prob[i].resize(agents[i].table.size());

    for (int f = 0; f < plan.frames_phase2; ++f) {
        sim.run_frame(
            [&](std::size_t i) {
                return Message{agents[i].id, Phase::P2, PatternProbShare{agents[i].p, degree[i]}};
            },
            [&](std::size_t i, std::span<const Delivered> inbox) {
                auto& a = agents[i];
                std::vector<std::optional<ProbNote>> now(a.table.size());
                for (const auto& d : inbox) {
                    const auto k = table_index(a, d.msg->sender);
                    if (!k || !scheme_contains(NeighborhoodScheme::N8, a.table[*k].offset)) continue;
                    const auto& share = std::get<PatternProbShare>(d.msg->body);
                    now[*k] = ProbNote{share.p, share.degree};
                    last_prob[i][*k] = now[*k];
                }

                std::vector<ProbNote> used;
                std::size_t my_degree = 0;
                if (config.weights == WeightMode::LossAdapted) {
                    for (const auto& note : now)
                        if (note) used.push_back(*note);
                    my_degree = used.size();
                } else {
                    my_degree = static_cast<std::size_t>(degree[i]);
                    for (std::size_t k = 0; k < a.table.size(); ++k) {
                        if (!scheme_contains(NeighborhoodScheme::N8, a.table[k].offset)) continue;
                        if (last_prob[i][k]) {
                            used.push_back(*last_prob[i][k]);
                        } else {
                            used.push_back({a.p, degree[i]});
                        }
                    }
                }

                std::vector<double> w(used.size());
                double sum = 0.0;
                for (std::size_t k = 0; k < used.size(); ++k) {
                    w[k] = metropolis_edge_weight(my_degree, static_cast<std::size_t>(used[k].degree));
                    sum += w[k];
                }
                PatternProbs acc = (1.0 - sum) * a.p;
                for (std::size_t k = 0; k < used.size(); ++k) acc += w[k] * used[k].p;
                a.p = acc;
            });
        result.trace.push_back(collect_probs(agents));
    }
    for (const auto& a : agents) {
        result.agreed.push_back(argmax_pattern(a.p));
        result.tie.push_back(has_tie(a.p));
    }

    // Phase 3: pattern formation, one generator step per frame until the
    // global state repeats or the iteration budget is spent.
    sim.set_phase(Phase::P3);
    const std::array<RegionSpec, 3> specs{region_for(PatternClass::Horizontal, config.regions),
                                          region_for(PatternClass::Vertical, config.regions),
                                          region_for(PatternClass::Mottled, config.regions)};
    for (auto& a : agents) {
        if (a.alive) a.on = a.sensed < config.binarize_threshold ? 0 : 1;
    }
    result.initial = collect_states(grid, agents);

    const int step_budget = std::min(plan.frames_phase3, config.generator.max_iterations);
    ConvergenceDetector detector(result.initial);
    bool stepping = true;
    std::vector<std::vector<std::optional<std::uint8_t>>> last_on(n);
    for (std::size_t i = 0; i < n; ++i) last_on[i].resize(agents[i].table.size());

    for (int f = 0; f < plan.frames_phase3; ++f) {
        sim.run_frame([&](std::size_t i) { return Message{agents[i].id, Phase::P3, PatternColorShare{agents[i].on}}; },
                      [&](std::size_t i, std::span<const Delivered> inbox) {
                          auto& a = agents[i];
                          std::vector<std::optional<std::uint8_t>> now(a.table.size());
                          for (const auto& d : inbox) {
                              if (auto k = table_index(a, d.msg->sender)) {
                                  now[*k] = std::get<PatternColorShare>(d.msg->body).on;
                                  last_on[i][*k] = now[*k];
                              }
                          }
                          if (!stepping) return;

                          // Unresolvable neighbors contribute nothing.
                          auto state_at = [&](Offset o) -> std::uint8_t {
                              if (o == Offset{0, 0}) return a.on;
                              const auto candidates = fallback_offsets(o);
                              for (Offset c : candidates)
                                  if (auto k = table_index(a, c); k && now[*k]) return *now[*k];
                              for (Offset c : candidates)
                                  if (auto k = table_index(a, c); k && last_on[i][*k]) return *last_on[i][*k];
                              return 0;
                          };
                          const RegionSpec& region = specs[static_cast<std::size_t>(result.agreed[i])];
                          double s = 0.0;
                          for (Offset o : region.activator)
                              if (state_at(o)) s += config.generator.w1;
                          for (Offset o : region.inhibitor)
                              if (state_at(o)) s += config.generator.w2;
                          a.on = s > 0.0 ? 1 : 0;
                      });
        if (!stepping) continue;
        auto field = collect_states(grid, agents);
        result.iterations.push_back(field);
        ++result.generator_iterations;
        if (auto verdict = detector.push(std::move(field))) {
            result.convergence = *verdict;
            stepping = false;
        } else if (result.generator_iterations >= step_budget) {
            stepping = false;
        }
    }
    sim.set_phase(Phase::Done);

    result.final_state = collect_states(grid, agents);
    for (const auto& a : agents) result.alive.push_back(a.alive);
    result.events = std::move(sim.events());
    return result;
}

RunResult run_centralized(const Image& image, const GridTopology& grid, const SimConfig& config) {
    config.validate(grid);
    const ColorField blurred = block_downsample(image, grid);
    const auto local = local_patterns(blurred, config.classify_threshold);
    const auto weights = metropolis_weights(CommGraph::from_grid(grid, NeighborhoodScheme::N8));
    ConsensusState p0(local.values().begin(), local.values().end());

    RunResult result{grid,
                     blurred,
                     blurred,
                     binarize(blurred, config.binarize_threshold),
                     run_consensus(p0, weights, config.plan.frames_phase2),
                     {},
                     {},
                     {},
                     BinaryField(grid),
                     0,
                     Convergence::BudgetExhausted,
                     config.weights,
                     std::vector<bool>(grid.size(), true),
                     {}};
    for (const auto& p : result.trace.back()) {
        result.agreed.push_back(argmax_pattern(p));
        result.tie.push_back(has_tie(p));
    }

    const std::array<RegionSpec, 3> specs{region_for(PatternClass::Horizontal, config.regions),
                                          region_for(PatternClass::Vertical, config.regions),
                                          region_for(PatternClass::Mottled, config.regions)};
    std::vector<const RegionSpec*> per_cell;
    for (PatternClass c : result.agreed) per_cell.push_back(&specs[static_cast<std::size_t>(c)]);

    GeneratorParams params = config.generator;
    params.max_iterations = std::min(params.max_iterations, config.plan.frames_phase3);
    auto gen = run_generator(result.initial, per_cell, params);
    result.iterations.assign(gen.history.begin() + 1, gen.history.end());
    result.final_state = gen.final_state;
    result.generator_iterations = gen.iterations_used;
    result.convergence = gen.convergence;
    return result;
}

std::string events_to_text(std::span<const Event> events) {
    std::string out;
    for (const auto& e : events) {
        out += std::to_string(e.frame) + " " + std::to_string(e.agent) + " " + e.kind + " " + e.detail + "\n";
    }
    return out;
}

void write_run_artifacts(const RunResult& result, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_file((dir / "blurred.pgm").string(), write_pgm(result.blurred));
    write_file((dir / "initial.pgm").string(), write_pgm(result.initial));
    for (std::size_t k = 0; k < result.iterations.size(); ++k) {
        write_file((dir / ("pattern_iter" + printf_str("%02zu", k + 1) + ".pgm")).string(),
                   write_pgm(result.iterations[k]));
    }
    write_file((dir / "final.pgm").string(), write_pgm(result.final_state));
    const auto csv = trace_to_csv(result.trace, result.grid);
    write_file((dir / "consensus.csv").string(),
               std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(csv.data()), csv.size()));
    const auto log = events_to_text(result.events);
    write_file((dir / "events.log").string(),
               std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(log.data()), log.size()));
}

}  // namespace camo::swarm
