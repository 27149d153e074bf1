#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <vector>

#include "radionet/graph.hpp"
#include "radionet/hrt.hpp"
#include "radionet/labels.hpp"
#include "radionet/oracle.hpp"
#include "radionet/programs.hpp"
#include "radionet/sim.hpp"

namespace radionet {

// s(v)-coloring: distinct among siblings; equal same-level values never see an
// edge into the other's parent. Greedy per level in id order.
struct SColoring {
    std::vector<int> s;
    int color_count = 0;  // C; spacing is C+1
};
SColoring assign_s_coloring(const Graph& g, const RootedTree& t);

struct GatherSchedule {
    std::vector<long> t;  // transmission block per node; -1 for the sink
    int spacing = 0;      // C+1
    int d = 0;            // ecc(sink) used by the formulas
    long max_block() const;
};
GatherSchedule compute_schedule(const RootedTree& t, const TwoHeightMap& h, const SColoring& col, int d);

// GatherCentr: 3-round blocks, node v transmits its gathered set in round
// (level mod 3) of block t(v). Asserts collision-freeness at parents and
// subtree completeness; returns the trace.
struct CentralGatherResult {
    Trace trace;
    long rounds = 0;
    std::vector<std::set<std::uint64_t>> sets;  // final per-node message sets
};
CentralGatherResult run_gather_centralized(const Graph& g, const RootedTree& tree, const TwoHeightMap& h,
                                           const GatherSchedule& sched, Node sink);

enum class DissemMode { oracle_injected_d, stub_size_learning };

// Distributed gathering/gossip node program: acknowledged dissemination, then
// the t(v) schedule with online 2-height learning, then distribution.
class GatherProgram : public NodeProgram {
public:
    struct Config {
        GatherLabel label;
        bool is_sink = false;
        std::uint64_t own_message = 0;
        long stub_window = 0;  // stub-size-learning: reserved silent rounds
        int injected_d = -1;   // stub-size-learning injection at the window end
        int injected_logn = -1;
        bool run_distribution = true;  // false: gather only (no phase 3)
    };
    explicit GatherProgram(Config cfg);

    Action on_round(long round) override;
    void on_reception(long round, const Reception& r) override;

    long tau() const;                      // gather phase start (relative to round 0)
    long phase2_end() const;               // tau + gather window length
    int learned_level() const { return level_; }
    int learned_d() const { return d_; }
    int learned_h2() const { return h2_known_ ? h2_ : -1; }
    long h2_learned_round() const { return h2_learned_round_; }
    long my_t_block() const;               // -1 until computable
    long transmitted_round() const { return transmitted_round_; }
    int gather_receptions() const { return gather_receptions_; }
    const std::set<std::uint64_t>& gathered() const { return messages_; }
    std::set<std::uint64_t> final_messages() const;

private:
    long gather_window() const;

    Config cfg_;
    AcknowledgedProgram ack_;
    int level_ = -1, d_ = -1, logn_ = -1;
    bool h2_known_ = false;
    int h2_ = 0;
    long h2_learned_round_ = -1;
    std::set<std::uint64_t> messages_;
    bool transmitted_ = false;
    long transmitted_round_ = -1;
    int gather_receptions_ = 0;
    bool run3_started_ = false;
    BroadcastCore run3_;
};

// Full gather/gossip label assignment for a sink: broadcast labels from the
// chosen oracle, ack bits from a plain run, then the gather fields.
enum class BroadcastMode { executor_constructive, fast, express };

struct GatherLabelResult {
    LabelTable labels;
    OracleState bcast_state;
    Hrt hrt;
    SColoring coloring;
    GatherSchedule schedule;
    long express_rounds = -1;
    int express_attempts = 0;
    bool express_ok = true;
};
GatherLabelResult assign_gather_labels(const Graph& g, Node sink, BroadcastMode mode, std::uint64_t seed,
                                       int retry_budget = 50, int bound_c = 60);

struct DisseminationResult {
    Trace trace;
    long t1 = -1;
    long tau = -1;
    std::vector<int> learned_levels;
    std::vector<int> learned_d;
    std::vector<long> termination_rounds;
};
DisseminationResult disseminate_parameters(const Graph& g, Node sink, const LabelTable& labels,
                                           DissemMode mode);

struct GossipConfig {
    BroadcastMode mode = BroadcastMode::express;
    std::uint64_t seed = 1;
    int retry_budget = 50;
    int bound_c = 60;
    DissemMode dissem = DissemMode::oracle_injected_d;
    bool gather_only = false;  // stop after phase 2 (gather protocol)
};

struct GossipResult {
    Trace trace;
    GatherLabelResult labels;
    long tau = -1;
    long phase2_end = -1;
    long rounds_used = 0;  // last active round + 1
    std::vector<std::set<std::uint64_t>> final_sets;
    std::vector<std::set<std::uint64_t>> gathered_sets;
    std::vector<int> learned_h2;
    std::vector<long> h2_learned_rounds;
    std::vector<long> t_blocks;
    std::vector<long> transmitted_rounds;
    int sink_gather_receptions = 0;
    std::vector<std::uint64_t> own_messages;
};
GossipResult gossip_pipeline(const Graph& g, Node sink, const GossipConfig& cfg);

std::uint64_t gossip_message_token(Node v);

}  // namespace radionet
