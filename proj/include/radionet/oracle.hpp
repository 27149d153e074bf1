#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "radionet/graph.hpp"
#include "radionet/hrt.hpp"
#include "radionet/labels.hpp"
#include "radionet/sim.hpp"

namespace radionet {

// Bipartite instance for the derandomized selection: B-side adjacency into
// A = {0..a_size-1}; every B node needs degree >= 1.
struct BipartiteInstance {
    int a_size = 0;
    std::vector<std::vector<int>> b_adj;
};

struct BipartiteSelection {
    std::vector<int> a_prime;  // chosen A indices, ascending
    std::vector<int> b_prime;  // B indices with exactly one neighbor in A', ascending
};

// Conditional-expectation derandomization over p in {2^-1 .. 2^-ceil(log|A|)}.
// Guarantees |B'| >= |B| / (15 * max(1, ceil(log |A|))), asserted per call.
BipartiteSelection derandomize_bipartite(const BipartiteInstance& inst);

// Inclusion-minimal subset of `candidates` covering `frontier`; greedy prune in
// descending node id. Every frontier node must have a candidate neighbor.
std::vector<Node> minimal_dominating(const std::vector<Node>& candidates, const std::vector<Node>& frontier,
                                     const Graph& g);

enum class GoMode { constructive, express };
enum class DeadlineMode { none, fast_x, express_z };

struct BlockRecord {
    long block = 0;
    std::vector<Node> dom;                           // DOM_b, ascending
    std::vector<std::pair<Node, Node>> feedback;     // (dominator, feedback node)
    std::vector<Node> go_tx, fast_tx, rescue_tx;     // dominators transmitting per step
    std::vector<Node> informed_broadcast, informed_go, informed_fast, informed_rescue;
};

struct StageLevelRecord {
    long stage = 0;
    int level = 0;
    long b_start = 0;  // |B| at stage start
    long b_end = 0;    // |B| left at stage end (0 means the frontier emptied)
};

struct OracleState {
    Node source = 0;
    long T = 0;  // stage length in blocks
    std::vector<int> level;
    std::vector<Node> parent;  // 2-HRT parent (-1 root); empty when no tree is used
    std::vector<int> h2;
    std::vector<long> informed_block;  // -1: informed before block 0 (source only)
    std::vector<int> informed_step;    // 0..4, -1 for source
    std::vector<long> x;  // fast deadlines, empty unless DeadlineMode::fast_x
    std::vector<long> y, z;  // express residues/deadlines, empty unless express_z
    long last_inform_block = 0;
    long rounds_used = 0;  // exact round count until the last node is informed
    std::vector<BlockRecord> history;
    std::vector<StageLevelRecord> stage_frontier;  // constructive mode only

    std::vector<long> informed_rounds() const;  // per node, source at 0
};

struct ExecutorOracleResult {
    LabelTable labels;
    OracleState state;
};

// Levelled executor co-simulation; writes Join/Lev/Stay/Go per block.
ExecutorOracleResult assign_executor_labels(const Graph& g, Node source, GoMode mode,
                                            std::uint64_t seed = 0);

// Constructive executor extended with the x(v) schedule over a 2-HRT.
ExecutorOracleResult assign_fast_labels(const Graph& g, Node source);

long fast_deadline_x(int level, int h2_root, int h2_v, long n);
long express_residue_y(int level, int h2_root, int h2_v);

struct ExpressOracleResult {
    LabelTable labels;
    OracleState state;
    long rounds = 0;
    int attempts = 0;         // seeds consumed
    bool ok = false;          // met the round budget
    std::uint64_t seed_used = 0;
};

// Express co-simulation with per-block random Go bits; resamples with derived
// seeds until rounds <= bound_c * (ecc(source) + ceil(log n)^2).
ExpressOracleResult assign_express_labels(const Graph& g, Node source, std::uint64_t seed,
                                          int retry_budget = 50, int bound_c = 60);

// Marks the tree path from the source to the latest-informed node (ties by
// lowest id): OnPath along it, Terminal on its endpoint; widens labels to 9.
LabelTable assign_ack_bits(const LabelTable& labels, const Trace& trace, const Graph& g,
                           const RootedTree& tree);

}  // namespace radionet
