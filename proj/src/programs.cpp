#include "radionet/programs.hpp"

#include "radionet/util.hpp"

namespace radionet {

BroadcastCore::BroadcastCore(const BroadcastLabel& label, bool is_source, Extras extras)
    : label_(label), is_source_(is_source), extras_(std::move(extras)) {
    if (is_source_) {
        informed_ = true;
        informed_rel_ = 0;
        membership_ = label_.join;  // the source consults Join for block 0
        my_level_ = 0;
        d_ = extras_.d_value;
        logn_ = extras_.logn_value;
    }
}

Payload BroadcastCore::make_broadcast_payload() const {
    Payload p;
    if (is_source_) {
        p.kind = extras_.kind;
        p.msg_id = extras_.msg_id;
        p.d_value = extras_.d_value;
        p.logn_value = extras_.logn_value;
        p.value = extras_.value;
        p.messages = extras_.messages;
    } else {
        p = accepted_;  // relay the accepted message content
    }
    p.sender_lev = label_.lev;
    p.level_value = extras_.carry_level ? my_level_ : -1;
    return p;
}

Action BroadcastCore::on_round(long rel) {
    if (rel < 0) return Action::listen();
    const long block = rel / 5;
    const int step = static_cast<int>(rel % 5);
    const int x = static_cast<int>(block % 3);

    if (step == 0) got_stay_ = got_go_ = got_fast_ = got_rescue_ = false;

    if (step == 1) {
        // Feedback duty: newly informed in this block's Broadcast step, with
        // at least one instruction bit to deliver.
        if (feedback_block_ == block && x == (label_.lev + 2) % 3 &&
            (label_.stay || label_.go || label_.fast || label_.rescue)) {
            Payload p;
            p.kind = Payload::Kind::feedback;
            p.sender_lev = label_.lev;
            p.stay = label_.stay;
            p.go = label_.go;
            p.fast = label_.fast;
            p.rescue = label_.rescue;
            return Action::send(p);
        }
        return Action::listen();
    }

    if (informed_ && membership_ && x == label_.lev) {
        if (step == 0) return Action::send(make_broadcast_payload());
        if (step == 2 && got_go_) return Action::send(make_broadcast_payload());
        if (step == 3 && got_fast_) return Action::send(make_broadcast_payload());
        if (step == 4 && got_rescue_) return Action::send(make_broadcast_payload());
    }
    return Action::listen();
}

void BroadcastCore::on_reception(long rel, const Reception& r) {
    if (rel < 0) return;
    const long block = rel / 5;
    const int step = static_cast<int>(rel % 5);
    const int x = static_cast<int>(block % 3);

    if (r.is_message) {
        const Payload& m = r.msg;
        if (!informed_ && m.kind == extras_.kind && m.sender_lev == (label_.lev + 2) % 3) {
            informed_ = true;
            informed_rel_ = rel;
            accepted_ = m;
            if (extras_.carry_level && m.level_value >= 0) my_level_ = m.level_value + 1;
            if (m.d_value >= 0) d_ = m.d_value;
            if (m.logn_value >= 0) logn_ = m.logn_value;
            if (step == 0) feedback_block_ = block;
            membership_ = label_.join;  // effective from the next block, gated by class
        } else if (m.kind == Payload::Kind::feedback && step == 1 && informed_ && membership_ &&
                   x == label_.lev && m.sender_lev == (label_.lev + 1) % 3) {
            got_stay_ = m.stay;
            got_go_ = m.go;
            got_fast_ = m.fast;
            got_rescue_ = m.rescue;
        }
    }

    // Stay decides membership for the class's next block; silence means leave.
    if (step == 4 && x == label_.lev && informed_ && membership_) membership_ = got_stay_;
}

namespace {

class ExecutorProgram : public NodeProgram {
public:
    ExecutorProgram(const BroadcastLabel& label, bool is_source, int msg_id) {
        BroadcastCore::Extras e;
        e.msg_id = msg_id;
        core_ = BroadcastCore(label, is_source, e);
    }
    Action on_round(long round) override { return core_.on_round(round); }
    void on_reception(long round, const Reception& r) override { core_.on_reception(round, r); }

private:
    BroadcastCore core_;
};

}  // namespace

std::unique_ptr<NodeProgram> levelled_executor_program(const BroadcastLabel& label, bool is_source,
                                                       int msg_id) {
    return std::make_unique<ExecutorProgram>(label, is_source, msg_id);
}
std::unique_ptr<NodeProgram> fast_program(const BroadcastLabel& label, bool is_source, int msg_id) {
    return std::make_unique<ExecutorProgram>(label, is_source, msg_id);
}
std::unique_ptr<NodeProgram> express_program(const BroadcastLabel& label, bool is_source, int msg_id) {
    return std::make_unique<ExecutorProgram>(label, is_source, msg_id);
}

AcknowledgedProgram::AcknowledgedProgram(const BroadcastLabel& label, bool is_source,
                                         BroadcastCore::Extras run1_extras)
    : label_(label), is_source_(is_source), run1_extras_(run1_extras) {
    RN_CHECK(label.has_ack, "acknowledged program needs ack-extended labels");
    run1_ = BroadcastCore(label, is_source, run1_extras);
}

Action AcknowledgedProgram::on_round(long round) {
    // Stop emission takes the round for itself; everything else is silent then.
    if (!sent_stop_ && stop_round_ == round) {
        sent_stop_ = true;
        Payload p;
        p.kind = Payload::Kind::stop;
        p.sender_lev = label_.lev;
        return Action::send(p);
    }
    if (have_t1_) return run2_.on_round(round - t1_ - 1);
    return run1_.on_round(round);
}

void AcknowledgedProgram::on_reception(long round, const Reception& r) {
    if (r.is_message && r.msg.kind == Payload::Kind::stop && !have_t1_) {
        if (is_source_) {
            // t1: the round the source hears Stop. Start the re-broadcast grid.
            have_t1_ = true;
            t1_ = round;
            BroadcastCore::Extras e;
            e.kind = Payload::Kind::t1;
            e.msg_id = run1_extras_.msg_id;
            e.carry_level = run1_extras_.carry_level;
            e.d_value = run1_.learned_d();
            e.logn_value = run1_.learned_logn();
            e.value = t1_;
            run2_ = BroadcastCore(label_, true, e);
            return;
        }
        if (label_.on_path && !label_.terminal && !sent_stop_ && stop_round_ < 0) stop_round_ = round + 1;
    }
    if (!have_t1_ && r.is_message && r.msg.kind == Payload::Kind::t1 && r.msg.value >= 0 &&
        r.msg.sender_lev == (label_.lev + 2) % 3) {
        // Learn t1 and join the re-broadcast on its grid.
        have_t1_ = true;
        t1_ = r.msg.value;
        BroadcastCore::Extras e;
        e.kind = Payload::Kind::t1;
        e.msg_id = run1_extras_.msg_id;
        e.carry_level = run1_extras_.carry_level;
        e.value = t1_;
        run2_ = BroadcastCore(label_, false, e);
        run2_.on_reception(round - t1_ - 1, r);
        return;
    }
    if (have_t1_) {
        run2_.on_reception(round - t1_ - 1, r);
        return;
    }
    run1_.on_reception(round, r);
    // Terminal: Stop goes out directly after the block of its acceptance.
    if (label_.terminal && run1_.informed() && stop_round_ < 0 && !sent_stop_)
        stop_round_ = 5 * (run1_.informed_rel_round() / 5 + 1);
}

std::unique_ptr<NodeProgram> acknowledged_program(const BroadcastLabel& label, bool is_source) {
    BroadcastCore::Extras e;
    return std::make_unique<AcknowledgedProgram>(label, is_source, e);
}

std::vector<std::unique_ptr<NodeProgram>> broadcast_programs(const LabelTable& labels, Node source,
                                                             BroadcastVariant variant) {
    std::vector<std::unique_ptr<NodeProgram>> out;
    out.reserve(labels.size());
    for (int v = 0; v < labels.size(); ++v) {
        if (variant == BroadcastVariant::acknowledged)
            out.push_back(acknowledged_program(labels.bcast[v], v == source));
        else
            out.push_back(levelled_executor_program(labels.bcast[v], v == source));
    }
    return out;
}

}  // namespace radionet
