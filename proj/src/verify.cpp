#include "radionet/verify.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "radionet/hrt.hpp"
#include "radionet/util.hpp"

namespace radionet {

bool Report::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

void Report::add(const std::string& name, bool pass, const std::string& detail) {
    checks.push_back({name, pass, detail});
}

std::string Report::render() const {
    std::ostringstream os;
    for (const auto& c : checks) {
        os << (c.pass ? "[pass] " : "[FAIL] ") << c.name;
        if (!c.detail.empty()) os << " -- " << c.detail;
        os << '\n';
    }
    for (const auto& [k, v] : metrics) os << k << " = " << v << '\n';
    return os.str();
}

namespace {

std::string at(long round, Node node) {
    std::ostringstream os;
    os << "round " << round << ", node " << node;
    return os.str();
}

}  // namespace

void check_reception_soundness(Report& rep, const Graph& g, const Trace& trace) {
    bool ok = true;
    std::string detail;
    std::vector<char> tx_flag(g.node_count(), 0);
    std::vector<std::uint64_t> tx_digest(g.node_count(), 0);
    for (long r = 0; r < trace.rounds && ok; ++r) {
        const auto& rec = trace.per_round[static_cast<std::size_t>(r)];
        for (const auto& t : rec.tx) {
            tx_flag[t.node] = 1;
            tx_digest[t.node] = t.digest;
        }
        for (const auto& rx : rec.rx) {
            int count = 0;
            Node sender = -1;
            for (Node u : g.neighbors(rx.node))
                if (tx_flag[u]) {
                    ++count;
                    sender = u;
                }
            if (count != 1 || tx_digest[sender] != rx.digest || tx_flag[rx.node]) {
                ok = false;
                detail = at(r, rx.node);
                break;
            }
        }
        for (const auto& t : rec.tx) tx_flag[t.node] = 0;
    }
    rep.add("trace/reception-soundness", ok, detail);
}

namespace {

void check_common_broadcast(Report& rep, const Graph& g, const LabelTable& labels,
                            const OracleState& state, const Trace& trace) {
    const int n = g.node_count();
    check_reception_soundness(rep, g, trace);

    // Engine informed times equal the oracle schedule; everyone informed.
    auto when = informed_times(trace, g, state.source, levelled_accept(state.level));
    auto oracle_when = state.informed_rounds();
    {
        bool ok = true;
        std::string detail;
        for (Node v = 0; v < n; ++v) {
            if (when[v] < 0 || when[v] != oracle_when[v]) {
                ok = false;
                detail = at(when[v], v);
                break;
            }
        }
        rep.add("broadcast/oracle-agreement", ok, detail);
    }

    // Levelled acceptance: a first delivery always comes from one level up.
    {
        bool ok = true;
        std::string detail;
        for (long r = 0; r < trace.rounds && ok; ++r)
            for (const auto& rx : trace.per_round[static_cast<std::size_t>(r)].rx)
                if (rx.kind == Payload::Kind::broadcast && when[rx.node] == r &&
                    rx.sender_lev != (state.level[rx.node] - 1 + 3) % 3) {
                    ok = false;
                    detail = at(r, rx.node);
                    break;
                }
        rep.add("broadcast/levelled-acceptance", ok, detail);
    }

    // Label widths (Table 1).
    {
        bool ok = true;
        int expect = labels.bcast[0].has_ack ? 9 : 7;
        for (Node v = 0; v < n; ++v) ok &= labels.bcast[v].width() == expect;
        rep.add("labels/width-" + std::to_string(expect), ok);
    }

    // Feedback step: transmitters carry an instruction bit, and each dominator
    // hears at most one transmitting neighbor.
    {
        bool silent_ok = true, unique_ok = true;
        std::string sd, ud;
        std::vector<char> txf(n, 0);
        for (const auto& brec : state.history) {
            long round = 5 * brec.block + 1;
            if (round >= trace.rounds) break;
            const auto& rec = trace.per_round[static_cast<std::size_t>(round)];
            for (const auto& t : rec.tx) {
                txf[t.node] = 1;
                const auto& l = labels.bcast[t.node];
                if (!(l.stay || l.go || l.fast || l.rescue)) {
                    silent_ok = false;
                    sd = at(round, t.node);
                }
            }
            for (Node v : brec.dom) {
                int cnt = 0;
                for (Node u : g.neighbors(v)) cnt += txf[u];
                if (cnt > 1) {
                    unique_ok = false;
                    ud = at(round, v);
                }
            }
            for (const auto& t : rec.tx) txf[t.node] = 0;
        }
        rep.add("feedback/zero-bits-silent", silent_ok, sd);
        rep.add("feedback/at-most-one-per-dominator", unique_ok, ud);
    }

    // Executor progress: every block with a dominating set informs someone.
    {
        bool ok = true;
        std::string detail;
        for (const auto& brec : state.history)
            if (!brec.dom.empty() && brec.informed_broadcast.empty()) {
                ok = false;
                detail = "block " + std::to_string(brec.block);
                break;
            }
        rep.add("executor/progress-per-block", ok, detail);
    }

    // Silence after the completion block.
    {
        bool ok = true;
        std::string detail;
        long quiet_from = 5 * (state.last_inform_block + 1);
        for (long r = quiet_from; r < trace.rounds && ok; ++r)
            if (!trace.per_round[static_cast<std::size_t>(r)].tx.empty()) {
                ok = false;
                detail = at(r, trace.per_round[static_cast<std::size_t>(r)].tx[0].node);
            }
        rep.add("broadcast/silence-after-completion", ok, detail);
    }
}

// Blocks of headroom between each node's inform time and its deadline,
// bucketed by powers of two. Only nodes with a deadline participate.
std::string slack_histogram(const OracleState& state, const std::vector<long>& deadline) {
    std::map<int, long> buckets;
    for (std::size_t v = 0; v < deadline.size(); ++v) {
        if (static_cast<Node>(v) == state.source || deadline[v] < 0) continue;
        long slack = deadline[v] - state.informed_block[v];
        if (slack < 0) continue;
        buckets[ceil_log2(slack + 1)] += 1;
    }
    std::ostringstream os;
    for (auto& [k, count] : buckets) os << "[<2^" << k << "]:" << count << ' ';
    std::string s = os.str();
    if (!s.empty()) s.pop_back();
    return s;
}

void check_stage_frontiers(Report& rep, const OracleState& state) {
    bool ok = true;
    std::string detail;
    for (const auto& sf : state.stage_frontier)
        if (sf.b_end != 0) {
            ok = false;
            detail = "stage " + std::to_string(sf.stage) + ", level " + std::to_string(sf.level) +
                     ", left " + std::to_string(sf.b_end);
            break;
        }
    rep.add("constructive/stage-frontier-empties", ok, detail);
}

// Deadline-step checks shared by the fast (x) and express (z) variants.
void check_deadline_steps(Report& rep, const Graph& g, const OracleState& state, const Trace& trace,
                          const std::vector<long>& deadline) {
    const int n = g.node_count();
    RootedTree tree;
    tree.root = state.source;
    tree.parent = state.parent;
    tree.level = state.level;
    tree.rebuild_children();

    auto fast_edge = [&](Node v) {
        return state.parent[v] >= 0 && state.h2[v] == state.h2[state.parent[v]];
    };

    // Eligible children per block: fast-edge, deadline == b, uninformed before b.
    std::map<long, std::vector<Node>> eligible;
    for (Node v = 0; v < n; ++v)
        if (v != state.source && fast_edge(v) && deadline[v] >= 0 &&
            state.informed_block[v] >= deadline[v])
            eligible[deadline[v]].push_back(v);

    bool charac_ok = true, inject_ok = true, collision_ok = true;
    std::string cd, id, xd;
    for (const auto& brec : state.history) {
        std::vector<char> in_dom(n, 0);
        for (Node v : brec.dom) in_dom[v] = 1;
        auto elig_it = eligible.find(brec.block);
        std::vector<Node> elig =
            elig_it == eligible.end() ? std::vector<Node>{} : elig_it->second;

        // Fast-step transmitters: exactly the dominating parents of eligible children.
        std::set<Node> expect_fast;
        std::vector<Node> rescued;
        for (Node v : elig) {
            Node p = state.parent[v];
            if (in_dom[p])
                expect_fast.insert(p);
            else
                rescued.push_back(v);
        }
        std::set<Node> got_fast(brec.fast_tx.begin(), brec.fast_tx.end());
        if (got_fast != expect_fast) {
            charac_ok = false;
            cd = "block " + std::to_string(brec.block);
        }

        // Rescue-step transmitters admit an injective assignment onto the
        // rescued children (level, adjacency, fast-edge constraints).
        {
            const auto& vb = brec.rescue_tx;
            std::vector<std::vector<int>> cand(vb.size());
            for (std::size_t i = 0; i < vb.size(); ++i)
                for (std::size_t j = 0; j < rescued.size(); ++j) {
                    Node u = vb[i], v = rescued[j];
                    if (state.level[v] == state.level[u] + 1 && g.has_edge(u, v)) cand[i].push_back(static_cast<int>(j));
                }
            // Kuhn's matching, small sides.
            std::vector<int> match_r(rescued.size(), -1);
            std::vector<char> used;
            std::function<bool(int)> try_match = [&](int i) -> bool {
                for (int j : cand[static_cast<std::size_t>(i)]) {
                    if (used[static_cast<std::size_t>(j)]) continue;
                    used[static_cast<std::size_t>(j)] = 1;
                    if (match_r[static_cast<std::size_t>(j)] < 0 || try_match(match_r[static_cast<std::size_t>(j)])) {
                        match_r[static_cast<std::size_t>(j)] = i;
                        return true;
                    }
                }
                return false;
            };
            int matched = 0;
            for (std::size_t i = 0; i < vb.size(); ++i) {
                used.assign(rescued.size(), 0);
                if (try_match(static_cast<int>(i))) ++matched;
            }
            if (matched != static_cast<int>(vb.size())) {
                inject_ok = false;
                id = "block " + std::to_string(brec.block);
            }
        }

        // Intended receivers hear exactly one neighbor in their step.
        for (Node v : elig) {
            int step = in_dom[state.parent[v]] ? 3 : 4;
            long round = 5 * brec.block + step;
            if (round >= trace.rounds) continue;
            const auto& rec = trace.per_round[static_cast<std::size_t>(round)];
            int cnt = 0;
            for (const auto& t : rec.tx)
                if (g.has_edge(t.node, v)) ++cnt;
            if (cnt != 1) {
                collision_ok = false;
                xd = at(round, v);
            }
        }
    }
    rep.add("deadline/fast-step-characterization", charac_ok, cd);
    rep.add("deadline/rescue-injective-assignment", inject_ok, id);
    rep.add("deadline/receiver-collision-free", collision_ok, xd);
}

}  // namespace

Report verify_broadcast(const Graph& g, const LabelTable& labels, const OracleState& state,
                        const Trace& trace, GoMode go_mode, DeadlineMode deadline) {
    Report rep;
    const int n = g.node_count();
    check_common_broadcast(rep, g, labels, state, trace);
    if (go_mode == GoMode::constructive) check_stage_frontiers(rep, state);

    if (deadline == DeadlineMode::fast_x) {
        bool ok = true;
        std::string detail;
        for (Node v = 0; v < n; ++v)
            if (v != state.source && state.informed_block[v] > state.x[v]) {
                ok = false;
                detail = "node " + std::to_string(v);
                break;
            }
        rep.add("fast/x-deadline-per-node", ok, detail);
        rep.metrics["deadline-slack-histogram"] = slack_histogram(state, state.x);

        int h2root = state.h2.empty() ? 0 : state.h2[state.source];
        long block_bound = 3 * (static_cast<long>(*std::max_element(state.level.begin(), state.level.end())) +
                                30 * clog2sq(n) * h2root) +
                           2;
        rep.add("fast/total-blocks-bound", state.last_inform_block <= block_bound,
                std::to_string(state.last_inform_block) + " <= " + std::to_string(block_bound));
        check_deadline_steps(rep, g, state, trace, state.x);
    } else if (deadline == DeadlineMode::express_z) {
        bool interval_ok = true, deadline_ok = true, residue_ok = true;
        std::string idt, ddt, rdt;
        for (Node v = 0; v < n; ++v) {
            if (v == state.source || state.parent[v] < 0) continue;
            Node p = state.parent[v];
            if (state.h2[v] == state.h2[p]) {
                if (!(state.z[p] < state.z[v] && state.z[v] <= state.z[p] + 7)) {
                    interval_ok = false;
                    idt = "edge (" + std::to_string(p) + "," + std::to_string(v) + ")";
                }
                if (state.informed_block[v] > state.z[v]) {
                    deadline_ok = false;
                    ddt = "node " + std::to_string(v);
                }
            }
        }
        for (Node u = 0; u < n && residue_ok; ++u)
            for (Node v = u + 1; v < n; ++v)
                if (u != state.source && v != state.source && state.z[u] >= 0 && state.z[u] == state.z[v] &&
                    state.level[u] == state.level[v] && state.h2[u] != state.h2[v]) {
                    residue_ok = false;
                    rdt = "nodes " + std::to_string(u) + "," + std::to_string(v);
                    break;
                }
        rep.add("express/z-interval-per-fast-edge", interval_ok, idt);
        rep.add("express/z-deadline-per-fast-edge", deadline_ok, ddt);
        rep.add("express/same-z-level-same-h2", residue_ok, rdt);
        rep.metrics["deadline-slack-histogram"] = slack_histogram(state, state.z);
        check_deadline_steps(rep, g, state, trace, state.z);
    }
    return rep;
}

Report verify_acknowledged(const Graph& g, const LabelTable& labels, const OracleState& state,
                           const Trace& trace, const std::vector<long>& termination_rounds, long t1) {
    Report rep;
    check_reception_soundness(rep, g, trace);

    {
        bool ok = !termination_rounds.empty();
        std::string detail;
        for (std::size_t v = 0; v < termination_rounds.size(); ++v)
            if (termination_rounds[v] != 2 * t1 || t1 < 0) {
                ok = false;
                detail = "node " + std::to_string(v);
                break;
            }
        rep.add("ack/common-termination-2t1", ok, detail);
    }
    {
        // t1 exceeds the completion block's end by at most the path length <= ecc.
        long completion_end = 5 * (state.last_inform_block + 1) - 1;
        long ecc = *std::max_element(state.level.begin(), state.level.end());
        rep.add("ack/t1-bound", t1 <= completion_end + ecc,
                std::to_string(t1) + " <= " + std::to_string(completion_end) + " + " + std::to_string(ecc));
    }
    {
        bool ok = true;
        std::string detail;
        for (long r = 0; r < trace.rounds && ok; ++r)
            for (const auto& tx : trace.per_round[static_cast<std::size_t>(r)].tx)
                if (tx.kind == Payload::Kind::stop && !labels.bcast[tx.node].on_path) {
                    ok = false;
                    detail = at(r, tx.node);
                    break;
                }
        rep.add("ack/stop-only-on-path", ok, detail);
    }
    {
        bool ok = true;
        std::string detail;
        for (long r = 2 * t1 + 1; r >= 0 && r < trace.rounds && ok; ++r)
            if (!trace.per_round[static_cast<std::size_t>(r)].tx.empty()) {
                ok = false;
                detail = at(r, trace.per_round[static_cast<std::size_t>(r)].tx[0].node);
            }
        rep.add("ack/silence-after-2t1", ok, detail);
    }
    {
        // The t1 run re-informs every node.
        auto when = informed_times(trace, g, state.source, levelled_accept(state.level, Payload::Kind::t1));
        bool ok = true;
        std::string detail;
        for (Node v = 0; v < g.node_count(); ++v)
            if (v != state.source && when[v] < 0) {
                ok = false;
                detail = "node " + std::to_string(v);
                break;
            }
        rep.add("ack/t1-delivered-everywhere", ok, detail);
    }
    return rep;
}

Report verify_gossip(const Graph& g, Node sink, const GossipResult& res, bool gather_only) {
    Report rep;
    const int n = g.node_count();
    const auto& tree = res.labels.hrt.tree;
    const auto& heights = res.labels.hrt.heights;
    const auto& sched = res.labels.schedule;
    const auto& col = res.labels.coloring;

    check_reception_soundness(rep, g, res.trace);

    // Coloring clauses, re-verified from the emitted labels.
    {
        bool sib_ok = true, conflict_ok = true;
        for (Node v = 0; v < n; ++v)
            for (Node a : tree.children[v])
                for (Node b : tree.children[v])
                    if (a != b && col.s[a] == col.s[b]) sib_ok = false;
        for (Node u = 0; u < n; ++u) {
            if (u == sink) continue;
            for (Node y : g.neighbors(u)) {
                if (tree.level[y] != tree.level[u] - 1) continue;
                for (Node w : tree.children[y])
                    if (w != u && col.s[w] == col.s[u]) conflict_ok = false;
            }
        }
        rep.add("coloring/siblings-distinct", sib_ok);
        rep.add("coloring/no-parent-edge-conflict", conflict_ok);
    }

    // Distributed t map equals the centralized schedule.
    {
        bool ok = true;
        std::string detail;
        for (Node v = 0; v < n; ++v)
            if (v != sink && res.t_blocks[v] != sched.t[v]) {
                ok = false;
                detail = "node " + std::to_string(v);
                break;
            }
        rep.add("gather/t-map-agreement", ok, detail);
    }

    // Each non-sink node transmits exactly one gather tuple, in its block+step.
    {
        bool once_ok = true, slot_ok = true;
        std::string od, sd;
        std::vector<int> count(n, 0);
        for (long r = 0; r < res.trace.rounds; ++r)
            for (const auto& tx : res.trace.per_round[static_cast<std::size_t>(r)].tx)
                if (tx.kind == Payload::Kind::gather) ++count[tx.node];
        for (Node v = 0; v < n; ++v) {
            int expect = v == sink ? 0 : 1;
            if (count[v] != expect) {
                once_ok = false;
                od = "node " + std::to_string(v);
            }
            if (v != sink && res.transmitted_rounds[v] !=
                                 res.tau + 3 * sched.t[v] + tree.level[v] % 3) {
                slot_ok = false;
                sd = "node " + std::to_string(v);
            }
        }
        rep.add("gather/transmit-exactly-once", once_ok, od);
        rep.add("gather/slot-agreement", slot_ok, sd);
    }

    // No collisions at tree parents: every child's transmission is received.
    {
        bool ok = true;
        std::string detail;
        for (Node v = 0; v < n && ok; ++v) {
            if (v == sink) continue;
            long r = res.transmitted_rounds[v];
            if (r < 0 || r >= res.trace.rounds) {
                ok = false;
                detail = "node " + std::to_string(v);
                break;
            }
            const auto& rec = res.trace.per_round[static_cast<std::size_t>(r)];
            Node p = tree.parent[v];
            bool heard = false;
            for (const auto& rx : rec.rx)
                if (rx.node == p) heard = true;
            if (!heard) {
                ok = false;
                detail = at(r, p);
            }
        }
        rep.add("gather/parent-collision-free", ok, detail);
    }

    // Simultaneous same-level fast transmissions never collide (Observation).
    {
        bool ok = true;
        std::string detail;
        std::map<std::pair<int, int>, std::vector<Node>> groups;
        for (Node v = 0; v < n; ++v)
            if (v != sink && heights.fast_edge(tree, v)) groups[{tree.level[v], heights.h2[v]}].push_back(v);
        for (auto& [key, nodes] : groups) {
            for (Node u : nodes)
                for (Node w : nodes) {
                    if (u >= w) continue;
                    if (sched.t[u] != sched.t[w]) continue;
                    // both transmit simultaneously; both parents must hear
                    for (Node x : {u, w}) {
                        long r = res.transmitted_rounds[x];
                        if (r < 0) continue;
                        bool heard = false;
                        for (const auto& rx : res.trace.per_round[static_cast<std::size_t>(r)].rx)
                            if (rx.node == tree.parent[x]) heard = true;
                        if (!heard) {
                            ok = false;
                            detail = at(r, tree.parent[x]);
                        }
                    }
                }
        }
        rep.add("gather/simultaneous-fast-pairs", ok, detail);
    }

    // 2-height learning: exact and before block t(v).
    {
        bool exact_ok = true, early_ok = true;
        std::string ed, td;
        for (Node v = 0; v < n; ++v) {
            if (res.learned_h2[v] != heights.h2[v]) {
                exact_ok = false;
                ed = "node " + std::to_string(v);
            }
            if (v != sink && res.h2_learned_rounds[v] >= res.tau + 3 * sched.t[v]) {
                early_ok = false;
                td = "node " + std::to_string(v);
            }
        }
        rep.add("gather/h2-learned-exactly", exact_ok, ed);
        rep.add("gather/h2-learned-before-t", early_ok, td);
    }

    // Subtree completeness at transmission time follows from the per-parent
    // delivery check; validate the final sets directly.
    {
        std::vector<std::set<std::uint64_t>> subtree(n);
        std::vector<Node> order(n);
        for (Node v = 0; v < n; ++v) order[v] = v;
        std::sort(order.begin(), order.end(), [&](Node a, Node b) { return tree.level[a] > tree.level[b]; });
        for (Node v : order) {
            subtree[v].insert(res.own_messages[v]);
            for (Node c : tree.children[v]) subtree[v].insert(subtree[c].begin(), subtree[c].end());
        }
        bool ok = true;
        std::string detail;
        for (Node v = 0; v < n; ++v)
            if (!std::includes(res.gathered_sets[v].begin(), res.gathered_sets[v].end(),
                               subtree[v].begin(), subtree[v].end())) {
                ok = false;
                detail = "node " + std::to_string(v);
                break;
            }
        rep.add("gather/subtree-complete", ok, detail);
        rep.add("gather/sink-holds-all",
                res.gathered_sets[sink].size() == static_cast<std::size_t>(n));
        rep.add("gather/sink-degree-receptions", res.sink_gather_receptions == g.degree(sink),
                std::to_string(res.sink_gather_receptions) + " vs deg " + std::to_string(g.degree(sink)));
    }

    // Label widths: non-sink gather labels within a + b*ceil(log Delta).
    {
        int delta = g.max_degree();
        int cap = 16 + 3 * clog(delta);
        bool ok = true;
        int maxw = 0;
        for (Node v = 0; v < n; ++v) {
            if (res.labels.labels.gather[v].sink_degree >= 0) continue;
            int w = gather_label_width(res.labels.labels.gather[v]);
            maxw = std::max(maxw, w);
            if (col.color_count <= delta) ok &= w <= cap;
        }
        rep.add("labels/gather-width-bound", ok,
                "max " + std::to_string(maxw) + ", cap " + std::to_string(cap));
        if (col.color_count > delta)
            rep.metrics["coloring-count-exceeds-delta"] = std::to_string(col.color_count);
    }

    if (!gather_only) {
        bool ok = true;
        std::string detail;
        for (Node v = 0; v < n; ++v)
            if (res.final_sets[v].size() != static_cast<std::size_t>(n)) {
                ok = false;
                detail = "node " + std::to_string(v);
                break;
            }
        rep.add("gossip/all-messages-everywhere", ok, detail);
    }

    // Per-phase round counts for the gossip report.
    if (res.tau >= 0) {
        rep.metrics["phase1-dissemination-rounds"] = std::to_string(res.tau);
        rep.metrics["phase2-window-rounds"] = std::to_string(res.phase2_end - res.tau);
        if (!gather_only && res.rounds_used > res.phase2_end)
            rep.metrics["phase3-distribution-rounds"] = std::to_string(res.rounds_used - res.phase2_end);
        rep.metrics["total-active-rounds"] = std::to_string(res.rounds_used);
    }

    // Round accounting for the gather window (Corollary bound when C <= Delta).
    {
        long window_blocks = sched.max_block() + 1;
        rep.metrics["gather-window-blocks"] = std::to_string(window_blocks);
        if (col.color_count <= g.max_degree()) {
            long bound = 3L * diameter_exact(g) + 6L * (g.max_degree() + 1) * clog(n) + 3;
            rep.add("gather/rounds-corollary-bound", 3 * window_blocks <= bound,
                    std::to_string(3 * window_blocks) + " <= " + std::to_string(bound));
        }
    }
    return rep;
}

}  // namespace radionet
