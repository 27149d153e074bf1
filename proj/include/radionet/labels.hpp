#pragma once

#include <optional>
#include <string>
#include <vector>

#include "radionet/graph.hpp"

namespace radionet {

// Core 7-bit broadcast label (Join, Lev hi, Lev lo, Stay, Go, Fast, Rescue),
// 9 bits with the acknowledged-broadcast extension (OnPath, Terminal).
struct BroadcastLabel {
    bool join = false;
    int lev = 0;  // level mod 3
    bool stay = false, go = false, fast = false, rescue = false;
    bool has_ack = false;
    bool on_path = false;
    bool terminal = false;

    int width() const { return has_ack ? 9 : 7; }
    std::string encode() const;
    static BroadcastLabel decode(const std::string& bits);
    bool operator==(const BroadcastLabel&) const = default;
};

// Gathering label; `spacing_base` is the color count C standing in for the
// paper's Delta in the schedule formulas (spacing = C+1). Sink-only fields are
// -1 elsewhere.
struct GatherLabel {
    int spacing_base = 0;  // C
    int s = 0;
    int s_prime = -1;  // -1 marks a leaf
    int b = -1;        // in {-1,0,1}
    bool fast_flag = false;
    bool leaf_flag = false;
    int sink_degree = -1;
    int diameter_hint = -1;  // sink only: ecc(sink) of the tree
    int logn_hint = -1;      // sink only: ceil(log2 n)
    BroadcastLabel bcast;    // dissemination / distribution phases

    bool operator==(const GatherLabel&) const = default;
};

// Bits needed for a non-sink gather label under a shared field layout.
int gather_label_width(const GatherLabel& l);

struct LabelTable {
    std::vector<BroadcastLabel> bcast;
    std::vector<GatherLabel> gather;  // empty unless a gather protocol

    bool has_gather() const { return !gather.empty(); }
    int size() const { return static_cast<int>(bcast.size()); }
    int max_width() const;

    // Lines "node bitstring [gather integers]", ordered by node.
    std::string save() const;
    static LabelTable load(const std::string& text);
    bool operator==(const LabelTable&) const = default;
};

}  // namespace radionet
