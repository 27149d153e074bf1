#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "radionet/graph.hpp"
#include "radionet/oracle.hpp"
#include "radionet/programs.hpp"
#include "radionet/sim.hpp"
#include "radionet/util.hpp"

using namespace radionet;

namespace {

struct RunOut {
    Trace trace;
    std::vector<long> when;  // trace informed times
};

RunOut run_with_labels(const Graph& g, const LabelTable& labels, Node source, long horizon) {
    auto programs = broadcast_programs(labels, source, BroadcastVariant::executor);
    RunOut out;
    out.trace = run(g, programs, horizon);
    auto levels = bfs_levels(g, source);
    out.when = informed_times(out.trace, g, source, levelled_accept(levels));
    return out;
}

// Engine informed-times must equal the oracle's co-simulated ones.
void check_engine_matches_oracle(const Graph& g, const LabelTable& labels, const OracleState& st) {
    auto out = run_with_labels(g, labels, st.source, st.rounds_used + 35);
    auto oracle_when = st.informed_rounds();
    for (Node v = 0; v < g.node_count(); ++v) {
        CAPTURE(v);
        CHECK(out.when[v] == oracle_when[v]);
    }
    // silence after the completion block
    long quiet_from = 5 * (st.last_inform_block + 1);
    for (long r = quiet_from; r < out.trace.rounds; ++r)
        CHECK(out.trace.per_round[static_cast<std::size_t>(r)].tx.empty());
}

std::vector<GraphFamilySpec> small_family() {
    std::vector<std::string> specs = {
        "path:n=4",  "path:n=9",           "star:n=7",          "cbt:n=15",
        "cbt:n=24",  "grid:rows=3,cols=5", "star-path:D=3,delta=4",
        "random:n=60,p=0.08,seed=5", "random:n=90,p=0.05,seed=11",
    };
    std::vector<GraphFamilySpec> out;
    for (const auto& s : specs) out.push_back(GraphFamilySpec::parse(s));
    return out;
}

}  // namespace

TEST_CASE("levelled executor: engine reproduces the oracle") {
    for (const auto& spec : small_family()) {
        CAPTURE(spec.to_string());
        auto g = generate(spec);
        auto r = assign_executor_labels(g, 0, GoMode::constructive);
        check_engine_matches_oracle(g, r.labels, r.state);
    }
}

TEST_CASE("fast broadcast: engine reproduces the oracle and deadlines hold") {
    for (const auto& spec : small_family()) {
        CAPTURE(spec.to_string());
        auto g = generate(spec);
        auto r = assign_fast_labels(g, 0);
        check_engine_matches_oracle(g, r.labels, r.state);
        auto out = run_with_labels(g, r.labels, 0, r.state.rounds_used + 35);
        for (Node v = 1; v < g.node_count(); ++v)
            CHECK(out.when[v] / 5 <= r.state.x[v]);
    }
}

TEST_CASE("express broadcast: engine reproduces the oracle") {
    for (const auto& spec : small_family()) {
        CAPTURE(spec.to_string());
        auto g = generate(spec);
        auto r = assign_express_labels(g, 0, 1234);
        REQUIRE(r.ok);
        check_engine_matches_oracle(g, r.labels, r.state);
    }
}

TEST_CASE("feedback silence: all-zero instruction bits never transmit in the Feedback step") {
    auto g = generate(GraphFamilySpec::parse("random:n=70,p=0.07,seed=3"));
    auto r = assign_executor_labels(g, 0, GoMode::constructive);
    auto programs = broadcast_programs(r.labels, 0, BroadcastVariant::executor);
    auto tr = run(g, programs, r.state.rounds_used + 35);
    for (long round = 1; round < tr.rounds; round += 5)  // feedback steps
        for (const auto& tx : tr.per_round[static_cast<std::size_t>(round)].tx) {
            const auto& l = r.labels.bcast[tx.node];
            CHECK((l.stay || l.go || l.fast || l.rescue));
        }
}

TEST_CASE("acknowledged broadcast") {
    SUBCASE("path(4): stop relays back, everyone agrees on 2*t1") {
        auto g = generate(GraphFamilySpec::parse("path:n=4"));
        auto base = assign_executor_labels(g, 0, GoMode::constructive);
        auto plain = broadcast_programs(base.labels, 0, BroadcastVariant::executor);
        auto tr0 = run(g, plain, base.state.rounds_used + 10);
        auto labels = assign_ack_bits(base.labels, tr0, g, bfs_tree(g, 0));

        auto programs = broadcast_programs(labels, 0, BroadcastVariant::acknowledged);
        long horizon = 6 * (base.state.rounds_used + 10) + 60;
        auto tr = run(g, programs, horizon);

        std::vector<long> terms;
        for (auto& p : programs)
            terms.push_back(dynamic_cast<AcknowledgedProgram*>(p.get())->termination_round());
        for (long t : terms) {
            CHECK(t == terms[0]);
            CHECK(t >= 0);
        }
        // t1 exceeds the completion block's end by at most the path length
        long t1 = dynamic_cast<AcknowledgedProgram*>(programs[0].get())->t1();
        long completion_end = 5 * (base.state.last_inform_block + 1) - 1;
        CHECK(t1 <= completion_end + 3);
        // silence after 2*t1
        for (long r = terms[0] + 1; r < tr.rounds; ++r)
            CHECK(tr.per_round[static_cast<std::size_t>(r)].tx.empty());
    }

    SUBCASE("random graphs: agreement, silence, and path-only stop traffic") {
        std::mt19937_64 rng(77);
        for (int rep = 0; rep < 4; ++rep) {
            GraphFamilySpec spec;
            spec.family = GraphFamilySpec::Family::random_connected;
            spec.n = 60;
            spec.p = 0.08;
            spec.seed = rng();
            auto g = generate(spec);
            auto base = assign_fast_labels(g, 0);
            auto plain = broadcast_programs(base.labels, 0, BroadcastVariant::executor);
            auto tr0 = run(g, plain, base.state.rounds_used + 10);
            auto tree = bfs_tree(g, 0);
            auto labels = assign_ack_bits(base.labels, tr0, g, tree);

            auto programs = broadcast_programs(labels, 0, BroadcastVariant::acknowledged);
            long horizon = 4 * (base.state.rounds_used + eccentricity(g, 0) * 2 + 20) + 40;
            auto tr = run(g, programs, horizon);

            long term = -2;
            for (auto& p : programs) {
                long t = dynamic_cast<AcknowledgedProgram*>(p.get())->termination_round();
                if (term == -2) term = t;
                CHECK(t == term);
            }
            CHECK(term >= 0);
            // stop transmissions only from on-path nodes
            for (long r = 0; r < tr.rounds; ++r)
                for (const auto& tx : tr.per_round[static_cast<std::size_t>(r)].tx)
                    if (tx.kind == Payload::Kind::stop) CHECK(labels.bcast[tx.node].on_path);
            // every node ends up informed in the t1 run too (same relative dynamics)
            auto levels = bfs_levels(g, 0);
            auto when_t1 = informed_times(tr, g, 0, levelled_accept(levels, Payload::Kind::t1));
            for (Node v = 1; v < g.node_count(); ++v) CHECK(when_t1[v] >= 0);
        }
    }
}
