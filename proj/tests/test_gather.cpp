#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "radionet/gather.hpp"
#include "radionet/graph.hpp"
#include "radionet/hrt.hpp"
#include "radionet/util.hpp"

using namespace radionet;

TEST_CASE("s-coloring") {
    SUBCASE("star leaves take all colors") {
        auto g = generate(GraphFamilySpec::parse("star:n=6"));
        auto t = bfs_tree(g, 0);
        auto col = assign_s_coloring(g, t);
        CHECK(col.color_count == 5);
        std::set<int> seen(col.s.begin() + 1, col.s.end());
        CHECK(seen == std::set<int>{0, 1, 2, 3, 4});
    }
    SUBCASE("path needs one color") {
        auto g = generate(GraphFamilySpec::parse("path:n=7"));
        auto t = bfs_tree(g, 0);
        auto col = assign_s_coloring(g, t);
        CHECK(col.color_count == 1);
        for (int c : col.s) CHECK(c == 0);
    }
    SUBCASE("same-level conflict through a parent edge gets distinct colors") {
        // r=0; level1: a=1,b=2; level2: u=3 under a, w=4 under b; extra edge (u, b)=(3,2).
        auto g = Graph::from_edges(5, {{0, 1}, {0, 2}, {1, 3}, {2, 4}, {3, 2}});
        auto t = bfs_tree(g, 0);
        REQUIRE(t.parent[4] == 2);
        auto col = assign_s_coloring(g, t);
        CHECK(col.s[3] != col.s[4]);
    }
    SUBCASE("properties hold on random graphs") {
        std::mt19937_64 rng(13);
        for (int rep = 0; rep < 8; ++rep) {
            GraphFamilySpec spec;
            spec.family = GraphFamilySpec::Family::random_connected;
            spec.n = 80;
            spec.p = 0.06;
            spec.seed = rng();
            auto g = generate(spec);
            auto built = build_2hrt(g, 0);
            auto col = assign_s_coloring(g, built.tree);  // internal exhaustive verification
            CHECK(col.color_count >= 1);
        }
    }
}

TEST_CASE("compute_schedule examples") {
    SUBCASE("fast leaf at the last level transmits in block 0") {
        auto g = generate(GraphFamilySpec::parse("path:n=4"));
        auto built = build_2hrt(g, 0);
        auto col = assign_s_coloring(g, built.tree);
        auto sched = compute_schedule(built.tree, built.heights, col, 3);
        CHECK(sched.t[3] == 0);  // level 3, h2 0, fast
        CHECK(sched.t[2] == 1);
        CHECK(sched.t[1] == 2);
        CHECK(sched.t[0] == -1);  // sink excluded
    }
    SUBCASE("slow node formula with spacing 4") {
        RootedTree t;
        t.root = 0;
        t.parent = {-1, 0, 1, 2, 2, 1, 5, 5};
        t.level = {0, 1, 2, 3, 3, 2, 3, 3};
        t.rebuild_children();
        TwoHeightMap h = compute_two_heights(t);
        REQUIRE(h.h2[2] == 1);  // two leaf children tie
        SColoring col;
        col.s = {0, 0, 2, 0, 1, 1, 0, 1};
        col.color_count = 3;  // spacing 4
        auto sched = compute_schedule(t, h, col, 3);
        CHECK(!h.fast_edge(t, 2));  // h2(1) = 2 via the level-2 tie
        CHECK(sched.t[2] == (3 - 2) + 1 * 4 + (2 + 1));
    }
    SUBCASE("fast nodes land on the spacing grid") {
        std::mt19937_64 rng(19);
        for (int rep = 0; rep < 6; ++rep) {
            GraphFamilySpec spec;
            spec.family = GraphFamilySpec::Family::random_connected;
            spec.n = 70;
            spec.p = 0.07;
            spec.seed = rng();
            auto g = generate(spec);
            auto built = build_2hrt(g, 0);
            auto col = assign_s_coloring(g, built.tree);
            auto sched = compute_schedule(built.tree, built.heights, col, eccentricity(g, 0));
            for (Node v = 1; v < g.node_count(); ++v) {
                long off = sched.t[v] - (sched.d - built.tree.level[v]);
                if (built.heights.fast_edge(built.tree, v))
                    CHECK(off % sched.spacing == 0);
                else
                    CHECK(off % sched.spacing != 0);
            }
        }
    }
}

TEST_CASE("centralized gathering") {
    SUBCASE("path: pipeline completes within 3D rounds") {
        auto g = generate(GraphFamilySpec::parse("path:n=4"));
        auto built = build_2hrt(g, 0);
        auto col = assign_s_coloring(g, built.tree);
        auto sched = compute_schedule(built.tree, built.heights, col, 3);
        auto res = run_gather_centralized(g, built.tree, built.heights, sched, 0);
        CHECK(res.rounds <= 3 * 3);
        CHECK(res.sets[0].size() == 4);
    }
    SUBCASE("star: leaves transmit in distinct blocks") {
        auto g = generate(GraphFamilySpec::parse("star:n=6"));
        auto built = build_2hrt(g, 0);
        auto col = assign_s_coloring(g, built.tree);
        auto sched = compute_schedule(built.tree, built.heights, col, 1);
        std::set<long> blocks;
        for (Node v = 1; v < 6; ++v) blocks.insert(sched.t[v]);
        CHECK(blocks.size() == 5);
        auto res = run_gather_centralized(g, built.tree, built.heights, sched, 0);
        CHECK(res.sets[0].size() == 6);
    }
    SUBCASE("corollary bound when C <= max degree") {
        std::mt19937_64 rng(29);
        for (int rep = 0; rep < 6; ++rep) {
            GraphFamilySpec spec;
            spec.family = GraphFamilySpec::Family::random_connected;
            spec.n = 100;
            spec.p = 0.05;
            spec.seed = rng();
            auto g = generate(spec);
            auto built = build_2hrt(g, 0);
            auto col = assign_s_coloring(g, built.tree);
            auto sched = compute_schedule(built.tree, built.heights, col, eccentricity(g, 0));
            auto res = run_gather_centralized(g, built.tree, built.heights, sched, 0);
            CHECK(res.sets[0].size() == static_cast<std::size_t>(g.node_count()));
            if (col.color_count <= g.max_degree()) {
                long d = diameter_exact(g);
                long bound = 3 * d + 6 * (g.max_degree() + 1) * clog(g.node_count()) + 3;
                CHECK(res.rounds <= bound);
            }
        }
    }
}

TEST_CASE("dissemination phase") {
    auto g = generate(GraphFamilySpec::parse("path:n=4"));
    auto gl = assign_gather_labels(g, 0, BroadcastMode::executor_constructive, 1);
    auto dis = disseminate_parameters(g, 0, gl.labels, DissemMode::oracle_injected_d);
    SUBCASE("levels learned along the chain") {
        CHECK(dis.learned_levels == std::vector<int>{0, 1, 2, 3});
    }
    SUBCASE("identical D and tau everywhere") {
        for (Node v = 0; v < 4; ++v) {
            CHECK(dis.learned_d[v] == 3);
            CHECK(dis.termination_rounds[v] == 2 * dis.t1);
        }
        CHECK(dis.tau == 2 * dis.t1 + 1);
    }
    SUBCASE("levels equal BFS levels on random graphs") {
        std::mt19937_64 rng(41);
        for (int rep = 0; rep < 3; ++rep) {
            GraphFamilySpec spec;
            spec.family = GraphFamilySpec::Family::random_connected;
            spec.n = 50;
            spec.p = 0.09;
            spec.seed = rng();
            auto h = generate(spec);
            auto hl = assign_gather_labels(h, 0, BroadcastMode::fast, 1);
            auto d2 = disseminate_parameters(h, 0, hl.labels, DissemMode::oracle_injected_d);
            auto lv = bfs_levels(h, 0);
            for (Node v = 0; v < h.node_count(); ++v) CHECK(d2.learned_levels[v] == lv[v]);
        }
    }
    SUBCASE("stub mode reserves the window") {
        auto dis2 = disseminate_parameters(g, 0, gl.labels, DissemMode::stub_size_learning);
        long window = 15 * clog2sq(4);
        for (long r = 0; r < window; ++r)
            CHECK(dis2.trace.per_round[static_cast<std::size_t>(r)].tx.empty());
        CHECK(dis2.tau > window);
        CHECK(dis2.learned_levels == std::vector<int>{0, 1, 2, 3});
    }
}

TEST_CASE("distributed gathering and gossip") {
    SUBCASE("path(4): all messages everywhere") {
        auto g = generate(GraphFamilySpec::parse("path:n=4"));
        GossipConfig cfg;
        cfg.mode = BroadcastMode::executor_constructive;
        auto res = gossip_pipeline(g, 0, cfg);
        for (Node v = 0; v < 4; ++v) {
            CHECK(res.final_sets[v].size() == 4);
            CHECK(res.final_sets[v].count(res.own_messages[v]) == 1);
        }
    }
    SUBCASE("leaf learns h2=0 without receptions; sink counts its degree") {
        auto g = generate(GraphFamilySpec::parse("star:n=5"));
        GossipConfig cfg;
        cfg.mode = BroadcastMode::executor_constructive;
        auto res = gossip_pipeline(g, 0, cfg);
        auto built = build_2hrt(g, 0);
        for (Node v = 0; v < 5; ++v) CHECK(res.learned_h2[v] == built.heights.h2[v]);
        CHECK(res.sink_gather_receptions == 4);
    }
    SUBCASE("learned h2 equals tree h2 before t(v); schedule matches GatherCentr") {
        std::mt19937_64 rng(53);
        for (int rep = 0; rep < 4; ++rep) {
            GraphFamilySpec spec;
            spec.family = GraphFamilySpec::Family::random_connected;
            spec.n = 60;
            spec.p = 0.08;
            spec.seed = rng();
            auto g = generate(spec);
            GossipConfig cfg;
            cfg.mode = rep % 2 ? BroadcastMode::fast : BroadcastMode::express;
            cfg.seed = rng();
            auto res = gossip_pipeline(g, 0, cfg);
            const auto& built = res.labels.hrt;
            for (Node v = 0; v < g.node_count(); ++v) {
                CAPTURE(v);
                CHECK(res.final_sets[v].size() == static_cast<std::size_t>(g.node_count()));
                CHECK(res.learned_h2[v] == built.heights.h2[v]);
                if (v != 0) {
                    CHECK(res.t_blocks[v] == res.labels.schedule.t[v]);
                    CHECK(res.h2_learned_rounds[v] < res.tau + 3 * res.labels.schedule.t[v]);
                    CHECK(res.transmitted_rounds[v] ==
                          res.tau + 3 * res.labels.schedule.t[v] + built.tree.level[v] % 3);
                }
            }
            CHECK(res.sink_gather_receptions == g.degree(0));
        }
    }
    SUBCASE("gather-only stops after phase 2") {
        auto g = generate(GraphFamilySpec::parse("cbt:n=15"));
        GossipConfig cfg;
        cfg.mode = BroadcastMode::fast;
        cfg.gather_only = true;
        auto res = gossip_pipeline(g, 0, cfg);
        CHECK(res.gathered_sets[0].size() == 15);
        for (long r = res.phase2_end; r < res.trace.rounds; ++r)
            CHECK(res.trace.per_round[static_cast<std::size_t>(r)].tx.empty());
    }
    SUBCASE("stub size-learning mode works end to end") {
        auto g = generate(GraphFamilySpec::parse("grid:rows=3,cols=4"));
        GossipConfig cfg;
        cfg.mode = BroadcastMode::fast;
        cfg.dissem = DissemMode::stub_size_learning;
        auto res = gossip_pipeline(g, 0, cfg);
        for (Node v = 0; v < g.node_count(); ++v)
            CHECK(res.final_sets[v].size() == static_cast<std::size_t>(g.node_count()));
        long window = 15 * clog2sq(g.node_count());
        for (long r = 0; r < window; ++r)
            CHECK(res.trace.per_round[static_cast<std::size_t>(r)].tx.empty());
    }
}
