#pragma once

// Frame-level swarm simulator. Agents sit on grid cells, talk only through
// lossy broadcast messages, and run four phases in order:
//
//   Phase 0  neighbor discovery (ids and relative positions)
//   Phase 1  color sensing and local pattern classification
//   Phase 2  pattern consensus, one averaging round per frame
//   Phase 3  pattern formation, one generator step per frame
//
// Frames are globally synchronized. Within a frame every agent reads the
// frame-start snapshot and all sends are delivered at frame end, so the
// result does not depend on agent evaluation order or thread count. All
// randomness is drawn from streams keyed by (seed, purpose, frame, agent).

#include <cstdint>
#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "camo/consensus.hpp"
#include "camo/descriptor.hpp"
#include "camo/generator.hpp"
#include "camo/grid.hpp"
#include "camo/image.hpp"
#include "camo/rng.hpp"

namespace camo::swarm {

struct NoiseConfig {
    double rho_meas = 0.0;  // probability a reading is replaced by a uniform random color
    double rho_comm = 0.0;  // probability a message is lost, per receiver
    std::uint64_t seed = 0;

    void validate() const;
};

struct PhasePlan {
    int frames_phase0 = 20;
    int frames_phase1 = 10;
    int frames_phase2 = 35;
    int frames_phase3 = 20;
    int slots_per_frame = 37;
    int slot_ms = 350;

    int frame_ms() const { return slots_per_frame * slot_ms; }
    int total_frames() const { return frames_phase0 + frames_phase1 + frames_phase2 + frames_phase3; }
    void validate() const;
};

enum class Phase : std::uint8_t { P0, P1, P2, P3, Done };

std::string_view to_string(Phase p);

// How an agent weights neighbors during consensus when messages go missing.
enum class WeightMode {
    // Metropolis weights over the neighbors actually heard this frame.
    LossAdapted,
    // Metropolis weights over the frozen neighbor table; a missing neighbor
    // contributes its last-known vector (own vector if never heard).
    Static,
};

std::string_view to_string(WeightMode m);

struct NeighborEntry {
    AgentId id = 0;
    Offset offset;  // position relative to the table owner

    friend bool operator==(const NeighborEntry&, const NeighborEntry&) = default;
};

struct NeighborAnnounce {
    std::vector<NeighborEntry> known;  // sender's table, offsets relative to the sender
};
struct ColorShare {
    double color = 0.0;
};
struct PatternProbShare {
    PatternProbs p;
    int degree = 0;  // sender's consensus degree, needed for the Metropolis weight
};
struct PatternColorShare {
    std::uint8_t on = 0;
};

struct Message {
    AgentId sender = 0;
    Phase phase = Phase::P0;
    std::variant<NeighborAnnounce, ColorShare, PatternProbShare, PatternColorShare> body;
};

struct AgentState {
    AgentId id = 0;
    Cell cell;
    std::vector<NeighborEntry> table;  // at most 12 entries, unique ids, offsets in the radius-2 diamond
    double sensed = 0.0;
    PatternProbs p;
    std::uint8_t on = 0;
    Phase phase = Phase::P0;
    bool alive = true;

    const NeighborEntry* find(AgentId id) const;
    const NeighborEntry* at_offset(Offset o) const;
};

// Agent `id` stops transmitting and updating from global frame `frame` on.
struct Kill {
    AgentId id = 0;
    int frame = 0;
};

struct SimConfig {
    NoiseConfig noise;
    PhasePlan plan;
    double classify_threshold = kDefaultClassifyThreshold;
    double binarize_threshold = kDefaultBinarizeThreshold;
    GeneratorParams generator;
    RegionTable regions;
    WeightMode weights = WeightMode::LossAdapted;
    bool tdma = false;
    std::vector<Kill> kills;
    // Agent ids by cell index; empty means id = cell index.
    std::vector<AgentId> ids;
    int threads = 1;

    void validate(const GridTopology& grid) const;
};

struct Event {
    int frame = 0;
    AgentId agent = 0;
    std::string kind;  // "drop", "collision", "failure"
    std::string detail;

    friend bool operator==(const Event&, const Event&) = default;
};

struct RunResult {
    GridTopology grid;
    ColorField blurred;
    ColorField sensed;
    BinaryField initial;
    ConsensusTrace trace;
    std::vector<PatternClass> agreed;  // per agent, argmax of its final vector
    std::vector<bool> tie;             // argmax had to break a tie
    std::vector<BinaryField> iterations;  // state after each generator step
    BinaryField final_state;
    int generator_iterations = 0;
    Convergence convergence = Convergence::BudgetExhausted;
    WeightMode weight_mode = WeightMode::LossAdapted;
    std::vector<bool> alive;
    std::vector<Event> events;

    // Plurality of the live agents' agreed classes, ties broken like argmax_pattern.
    PatternClass selected_class() const;
};

// With probability rho_meas a uniform color in [0, 255], otherwise true_color.
double sense(double true_color, const NoiseConfig& noise, Rng& rng);

// True when `msg` reaches one receiver; lost with probability rho_comm.
bool deliver(const Message& msg, const NoiseConfig& noise, Rng& rng);

int assign_slot(AgentId id, int slots_per_frame);

// Agents that share a slot with another live agent within two hops. Both
// members of such a pair lose every broadcast that frame.
std::set<AgentId> tdma_collisions(std::span<const AgentState> agents, int slots_per_frame, const GridTopology& grid);

// One agent per cell, ids from config (or cell index).
std::vector<AgentState> place_agents(const GridTopology& grid, std::span<const AgentId> ids);

// Runs the neighbor-discovery phase. Direct (N4) neighbors are learned from
// their announcements together with their true relative position; the rest
// of the two-hop diamond is inferred from those neighbors' own tables.
std::vector<AgentState> run_phase0(std::vector<AgentState> agents, const GridTopology& grid, const SimConfig& config,
                                   std::vector<Event>* events = nullptr);

// Full four-phase run. Throws what block_downsample throws for bad images.
RunResult run_pipeline(const Image& image, const GridTopology& grid, const SimConfig& config);

// The same stages composed directly on whole fields, without agents or
// messages. Noise settings, kills and TDMA are ignored.
RunResult run_centralized(const Image& image, const GridTopology& grid, const SimConfig& config);

// "frame agent kind detail" per line.
std::string events_to_text(std::span<const Event> events);

// blurred.pgm, initial.pgm, pattern_iterNN.pgm, final.pgm, consensus.csv,
// events.log. Creates `dir` if needed.
void write_run_artifacts(const RunResult& result, const std::filesystem::path& dir);

}  // namespace camo::swarm
