#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "radionet/graph.hpp"
#include "radionet/sim.hpp"

using namespace radionet;

namespace {

// Scripted program: transmits a fixed payload on the given rounds.
class Scripted : public NodeProgram {
public:
    Scripted(std::vector<long> rounds, Payload p) : when_(std::move(rounds)), p_(std::move(p)) {}
    Action on_round(long round) override {
        for (long w : when_)
            if (w == round) return Action::send(p_);
        return Action::listen();
    }
    void on_reception(long round, const Reception& r) override {
        if (r.is_message) got_.emplace_back(round, r.msg);
    }
    std::vector<std::pair<long, Payload>> got_;

private:
    std::vector<long> when_;
    Payload p_;
};

Payload bcast(int lev, int id = 1) {
    Payload p;
    p.kind = Payload::Kind::broadcast;
    p.sender_lev = lev;
    p.msg_id = id;
    return p;
}

}  // namespace

TEST_CASE("reception rule") {
    // triangle plus pendant: 0-1, 0-2, 1-2, 2-3
    auto g = Graph::from_edges(4, {{0, 1}, {0, 2}, {1, 2}, {2, 3}});

    SUBCASE("exactly one transmitting neighbor delivers") {
        std::vector<std::unique_ptr<NodeProgram>> ps;
        ps.push_back(std::make_unique<Scripted>(std::vector<long>{0}, bcast(0)));
        for (int i = 0; i < 3; ++i) ps.push_back(std::make_unique<Scripted>(std::vector<long>{}, bcast(0)));
        auto tr = run(g, ps, 1);
        auto* p1 = dynamic_cast<Scripted*>(ps[1].get());
        auto* p3 = dynamic_cast<Scripted*>(ps[3].get());
        CHECK(p1->got_.size() == 1);
        CHECK(p3->got_.empty());  // not a neighbor of 0
        CHECK(tr.per_round[0].tx.size() == 1);
        CHECK(tr.per_round[0].rx.size() == 2);  // nodes 1 and 2
    }

    SUBCASE("two transmitting neighbors collide into silence") {
        std::vector<std::unique_ptr<NodeProgram>> ps;
        ps.push_back(std::make_unique<Scripted>(std::vector<long>{0}, bcast(0)));
        ps.push_back(std::make_unique<Scripted>(std::vector<long>{0}, bcast(1)));
        ps.push_back(std::make_unique<Scripted>(std::vector<long>{}, bcast(0)));
        ps.push_back(std::make_unique<Scripted>(std::vector<long>{}, bcast(0)));
        auto tr = run(g, ps, 1);
        auto* p2 = dynamic_cast<Scripted*>(ps[2].get());
        auto* p3 = dynamic_cast<Scripted*>(ps[3].get());
        CHECK(p2->got_.empty());  // hears both 0 and 1
        CHECK(p3->got_.empty());  // hears nothing at all
        CHECK(tr.per_round[0].rx.empty());
    }

    SUBCASE("a transmitter hears silence that round") {
        std::vector<std::unique_ptr<NodeProgram>> ps;
        ps.push_back(std::make_unique<Scripted>(std::vector<long>{0}, bcast(0)));
        ps.push_back(std::make_unique<Scripted>(std::vector<long>{0}, bcast(1)));
        ps.push_back(std::make_unique<Scripted>(std::vector<long>{}, bcast(0)));
        ps.push_back(std::make_unique<Scripted>(std::vector<long>{}, bcast(0)));
        run(g, ps, 1);
        auto* p0 = dynamic_cast<Scripted*>(ps[0].get());
        CHECK(p0->got_.empty());  // neighbor 1 transmitted, but 0 was busy transmitting
    }
}

TEST_CASE("replay and serialization") {
    auto g = generate(GraphFamilySpec::parse("path:n=4"));
    auto build = [&]() {
        std::vector<std::unique_ptr<NodeProgram>> ps;
        ps.push_back(std::make_unique<Scripted>(std::vector<long>{0, 2}, bcast(0)));
        ps.push_back(std::make_unique<Scripted>(std::vector<long>{1}, bcast(1)));
        ps.push_back(std::make_unique<Scripted>(std::vector<long>{3}, bcast(2)));
        ps.push_back(std::make_unique<Scripted>(std::vector<long>{}, bcast(0)));
        return ps;
    };
    auto ps = build();
    auto tr = run(g, ps, 6);

    SUBCASE("identical inputs replay bit-identically") {
        auto ps2 = build();
        auto res = replay(tr, g, ps2);
        CHECK(res.ok);
        auto ps3 = build();
        CHECK(serialize_trace(run(g, ps3, 6)) == serialize_trace(tr));
    }

    SUBCASE("a tampered trace reports the divergence point") {
        Trace bad = tr;
        bad.per_round[1].tx[0].digest ^= 1;
        auto ps2 = build();
        auto res = replay(bad, g, ps2);
        CHECK(!res.ok);
        CHECK(res.round == 1);
        CHECK(res.node == 1);
    }

    SUBCASE("shorter horizon matches as a prefix") {
        auto ps2 = build();
        auto tr2 = run(g, ps2, 4);
        for (int r = 0; r < 4; ++r) CHECK(tr2.per_round[r] == tr.per_round[r]);
    }

    SUBCASE("serialize/parse round trip") {
        tr.grid.push_back({0, 5, {"broadcast", "feedback", "go", "fast", "rescue"}});
        auto text = serialize_trace(tr);
        auto back = parse_trace(text);
        back.grid = tr.grid;
        CHECK(back == tr);
        CHECK(serialize_trace(back) == text);
    }
}

TEST_CASE("informed_times under the levelled rule") {
    auto g = generate(GraphFamilySpec::parse("path:n=4"));
    std::vector<int> level = {0, 1, 2, 3};

    std::vector<std::unique_ptr<NodeProgram>> ps;
    ps.push_back(std::make_unique<Scripted>(std::vector<long>{0}, bcast(0)));
    ps.push_back(std::make_unique<Scripted>(std::vector<long>{1}, bcast(1)));
    // node 2 transmits with a same-level tag: node 3 must ignore it
    ps.push_back(std::make_unique<Scripted>(std::vector<long>{2}, bcast(0)));
    ps.push_back(std::make_unique<Scripted>(std::vector<long>{}, bcast(0)));
    auto tr = run(g, ps, 4);

    auto when = informed_times(tr, g, 0, levelled_accept(level));
    CHECK(when[0] == 0);  // the source by fiat
    CHECK(when[1] == 0);
    CHECK(when[2] == 1);
    CHECK(when[3] == -1);  // only heard a wrong-level tag
}

TEST_CASE("isomorphic relabeling produces the isomorphic trace") {
    // path 0-1-2 versus relabeled path 2-0-1 (old->new: 0->2, 1->0, 2->1)
    auto g1 = Graph::from_edges(3, {{0, 1}, {1, 2}});
    auto g2 = Graph::from_edges(3, {{2, 0}, {0, 1}});
    auto mk = [&](int a, int b, int c) {
        std::vector<std::unique_ptr<NodeProgram>> ps(3);
        ps[a] = std::make_unique<Scripted>(std::vector<long>{0}, bcast(0));
        ps[b] = std::make_unique<Scripted>(std::vector<long>{1}, bcast(1));
        ps[c] = std::make_unique<Scripted>(std::vector<long>{}, bcast(2));
        return ps;
    };
    auto ps1 = mk(0, 1, 2);
    auto ps2 = mk(2, 0, 1);
    auto t1 = run(g1, ps1, 2);
    auto t2 = run(g2, ps2, 2);
    int perm[3] = {2, 0, 1};
    for (long r = 0; r < 2; ++r) {
        REQUIRE(t1.per_round[r].tx.size() == t2.per_round[r].tx.size());
        REQUIRE(t1.per_round[r].rx.size() == t2.per_round[r].rx.size());
        for (std::size_t i = 0; i < t1.per_round[r].tx.size(); ++i) {
            auto a = t1.per_round[r].tx[i];
            bool found = false;
            for (auto b : t2.per_round[r].tx)
                if (b.node == perm[a.node] && b.digest == a.digest) found = true;
            CHECK(found);
        }
    }
}
