#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "radionet/labels.hpp"
#include "radionet/sim.hpp"

namespace radionet {

// Label-driven 5-step block machine shared by every broadcast variant. One
// instance handles one "run" (original broadcast, t1 re-broadcast, gossip
// distribution); rounds are relative to the run's grid origin.
class BroadcastCore {
public:
    struct Extras {
        Payload::Kind kind = Payload::Kind::broadcast;
        int msg_id = 1;
        bool carry_level = false;  // append the sender's full level counter
        int d_value = -1;          // source-side dissemination payload
        int logn_value = -1;
        long value = -1;  // t1
        std::vector<std::uint64_t> messages;
    };

    BroadcastCore() = default;
    BroadcastCore(const BroadcastLabel& label, bool is_source, Extras extras);

    Action on_round(long rel);
    void on_reception(long rel, const Reception& r);

    bool informed() const { return informed_; }
    long informed_rel_round() const { return informed_rel_; }  // 0 for the source
    int learned_level() const { return my_level_; }
    int learned_d() const { return d_; }
    int learned_logn() const { return logn_; }
    const Payload& accepted() const { return accepted_; }

private:
    Payload make_broadcast_payload() const;

    BroadcastLabel label_;
    bool is_source_ = false;
    Extras extras_;

    bool informed_ = false;
    long informed_rel_ = -1;
    bool membership_ = false;       // current dominating-set membership
    long feedback_block_ = -1;      // block of broadcast-step acceptance, for feedback duty
    bool got_stay_ = false, got_go_ = false, got_fast_ = false, got_rescue_ = false;
    int my_level_ = -1;  // learned full level (dissemination); 0 at the source
    int d_ = -1, logn_ = -1;
    Payload accepted_;
};

// Levelled executor program over the unified 5-step grid; Fast/Rescue steps
// stay silent unless the matching bits ever arrive, so the same machine runs
// the executor, fast, and express label tables.
std::unique_ptr<NodeProgram> levelled_executor_program(const BroadcastLabel& label, bool is_source,
                                                       int msg_id = 1);
std::unique_ptr<NodeProgram> fast_program(const BroadcastLabel& label, bool is_source, int msg_id = 1);
std::unique_ptr<NodeProgram> express_program(const BroadcastLabel& label, bool is_source, int msg_id = 1);

// Acknowledged variant: Stop relay along the marked path, then the source
// re-broadcasts t1 on a fresh grid; every node reports termination 2*t1.
class AcknowledgedProgram : public NodeProgram {
public:
    AcknowledgedProgram(const BroadcastLabel& label, bool is_source, BroadcastCore::Extras run1_extras);

    Action on_round(long round) override;
    void on_reception(long round, const Reception& r) override;

    bool informed() const { return run1_.informed(); }
    long termination_round() const { return have_t1_ ? 2 * t1_ : -1; }
    long t1() const { return have_t1_ ? t1_ : -1; }
    int learned_level() const { return run1_.learned_level(); }
    int learned_d() const { return run1_.learned_d(); }
    int learned_logn() const { return run1_.learned_logn(); }

private:
    BroadcastLabel label_;
    bool is_source_;
    BroadcastCore run1_, run2_;
    BroadcastCore::Extras run1_extras_;
    long stop_round_ = -1;  // when to emit Stop
    bool sent_stop_ = false;
    bool have_t1_ = false;
    long t1_ = -1;
};

std::unique_ptr<NodeProgram> acknowledged_program(const BroadcastLabel& label, bool is_source);

// Builds one program per node from a label table (broadcast protocols).
enum class BroadcastVariant { executor, fast, express, acknowledged };
std::vector<std::unique_ptr<NodeProgram>> broadcast_programs(const LabelTable& labels, Node source,
                                                             BroadcastVariant variant);

}  // namespace radionet
