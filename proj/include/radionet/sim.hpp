#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "radionet/graph.hpp"

namespace radionet {

// Structured payload; the model allows arbitrary-size messages (traces keep digests).
struct Payload {
    enum class Kind { broadcast, feedback, stop, t1, gather };
    Kind kind = Kind::broadcast;
    int msg_id = 0;
    int sender_lev = -1;  // sender's Lev tag (level mod 3), -1 when not applicable
    // feedback instruction bits
    bool stay = false, go = false, fast = false, rescue = false;
    // acknowledged broadcast: t1 value; dissemination: D / ceil(log n) / full level
    long value = -1;
    int d_value = -1;
    int logn_value = -1;
    int level_value = -1;
    // gathering tuple (M_v, h2, s, level)
    std::vector<std::uint64_t> messages;  // kept sorted + unique
    int h2_value = -1;
    int s_value = -1;

    std::string canonical() const;
    std::uint64_t digest() const;
    bool operator==(const Payload&) const = default;
};

struct Reception {
    bool is_message = false;  // false covers silence and collisions alike
    Payload msg;
};

struct Action {
    bool transmit = false;
    Payload msg;
    static Action listen() { return {}; }
    static Action send(Payload p) { return {true, std::move(p)}; }
};

// A node program sees only its label-derived state, the global round counter
// and its own receptions. The engine never exposes ids or topology.
class NodeProgram {
public:
    virtual ~NodeProgram() = default;
    virtual Action on_round(long round) = 0;
    virtual void on_reception(long round, const Reception& r) = 0;
};

struct TraceTx {
    Node node;
    Payload::Kind kind;
    int sender_lev;
    std::uint64_t digest;
    bool operator==(const TraceTx&) const = default;
};
struct TraceRx {
    Node node;
    Payload::Kind kind;
    int sender_lev;
    std::uint64_t digest;
    bool operator==(const TraceRx&) const = default;
};

struct TraceRound {
    std::vector<TraceTx> tx;  // sorted by node
    std::vector<TraceRx> rx;  // message receptions only; silences are implicit
    bool operator==(const TraceRound&) const = default;
};

// Step naming for serialization: consecutive grid segments.
struct GridSegment {
    long start = 0;
    int block_len = 1;
    std::vector<std::string> step_names;
};

struct Trace {
    long rounds = 0;
    std::vector<TraceRound> per_round;
    std::vector<GridSegment> grid;

    std::string step_name(long round) const;
    bool operator==(const Trace& o) const { return rounds == o.rounds && per_round == o.per_round; }
};

Trace run(const Graph& g, const std::vector<std::unique_ptr<NodeProgram>>& programs, long horizon);

struct ReplayResult {
    bool ok = true;
    long round = -1;  // first divergence
    Node node = -1;
};
ReplayResult replay(const Trace& recorded, const Graph& g,
                    const std::vector<std::unique_ptr<NodeProgram>>& programs);

// Line-delimited serialization, byte-deterministic.
std::string serialize_trace(const Trace& t);
Trace parse_trace(const std::string& text);

// First accepted reception per node under the levelled rule; source at round 0.
using AcceptRule = std::function<bool(Node receiver, const TraceRx&)>;
std::vector<long> informed_times(const Trace& t, const Graph& g, Node source, const AcceptRule& accept);

// The standard levelled accept rule for broadcast payloads.
AcceptRule levelled_accept(const std::vector<int>& level, Payload::Kind kind = Payload::Kind::broadcast);

const char* kind_name(Payload::Kind k);

}  // namespace radionet
