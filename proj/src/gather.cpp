#include "radionet/gather.hpp"

#include <algorithm>
#include <map>

#include "radionet/util.hpp"

namespace radionet {

SColoring assign_s_coloring(const Graph& g, const RootedTree& t) {
    const int n = g.node_count();
    SColoring col;
    col.s.assign(n, 0);
    std::vector<std::vector<Node>> by_level(t.max_level() + 1);
    for (Node v = 0; v < n; ++v) by_level[t.level[v]].push_back(v);

    for (int l = 1; l <= t.max_level(); ++l) {
        for (Node v : by_level[l]) {  // ids ascend within a level
            std::set<int> forbidden;
            // Colored children of any lower neighbor: covers siblings and the
            // "edge (v, p(w))" conflicts in one sweep.
            for (Node y : g.neighbors(v))
                if (t.level[y] == l - 1)
                    for (Node w : t.children[y])
                        if (w < v) forbidden.insert(col.s[w]);
            // Colored same-level nodes adjacent to p(v): the "edge (w, p(v))" side.
            for (Node w : g.neighbors(t.parent[v]))
                if (t.level[w] == l && w < v) forbidden.insert(col.s[w]);
            int c = 0;
            while (forbidden.count(c)) ++c;
            col.s[v] = c;
            col.color_count = std::max(col.color_count, c + 1);
        }
    }
    if (n == 1) col.color_count = 1;

    // Both coloring properties, verified exhaustively.
    for (Node v = 0; v < n; ++v)
        for (Node u : t.children[v])
            for (Node w : t.children[v])
                RN_CHECK(u == w || col.s[u] != col.s[w], "s-coloring: sibling collision");
    for (Node u = 0; u < n; ++u) {
        if (u == t.root) continue;
        for (Node y : g.neighbors(u)) {
            if (t.level[y] != t.level[u] - 1) continue;
            for (Node w : t.children[y])
                RN_CHECK(w == u || col.s[w] != col.s[u], "s-coloring: conflict through a parent edge");
        }
    }
    return col;
}

GatherSchedule compute_schedule(const RootedTree& t, const TwoHeightMap& h, const SColoring& col, int d) {
    GatherSchedule sched;
    sched.spacing = col.color_count + 1;
    sched.d = d;
    sched.t.assign(t.parent.size(), -1);
    for (Node v = 0; v < static_cast<Node>(t.parent.size()); ++v) {
        if (t.parent[v] < 0) continue;  // sink excluded
        long base = d - t.level[v] + static_cast<long>(h.h2[v]) * sched.spacing;
        sched.t[v] = h.fast_edge(t, v) ? base : base + col.s[v] + 1;
    }
    return sched;
}

long GatherSchedule::max_block() const {
    long m = 0;
    for (long x : t) m = std::max(m, x);
    return m;
}

CentralGatherResult run_gather_centralized(const Graph& g, const RootedTree& tree, const TwoHeightMap& h,
                                           const GatherSchedule& sched, Node sink) {
    const int n = g.node_count();
    RN_CHECK(tree.root == sink, "gather: tree must be rooted at the sink");
    CentralGatherResult res;
    res.sets.resize(n);
    for (Node v = 0; v < n; ++v) res.sets[v].insert(gossip_message_token(v));

    const long blocks = sched.max_block() + 1;
    res.rounds = 3 * blocks;
    res.trace.rounds = res.rounds;
    res.trace.per_round.resize(static_cast<std::size_t>(res.rounds));
    res.trace.grid.push_back({0, 3, {"gather-0", "gather-1", "gather-2"}});

    // Subtree message sets for the completeness assertion.
    std::vector<std::set<std::uint64_t>> subtree(n);
    {
        std::vector<Node> order(n);
        for (Node v = 0; v < n; ++v) order[v] = v;
        std::sort(order.begin(), order.end(), [&](Node a, Node b) { return tree.level[a] > tree.level[b]; });
        for (Node v : order) {
            subtree[v].insert(gossip_message_token(v));
            for (Node c : tree.children[v])
                subtree[v].insert(subtree[c].begin(), subtree[c].end());
        }
    }

    std::vector<char> transmits(n);
    for (long block = 0; block < blocks; ++block) {
        for (int step = 0; step < 3; ++step) {
            long round = 3 * block + step;
            auto& rec = res.trace.per_round[static_cast<std::size_t>(round)];
            std::fill(transmits.begin(), transmits.end(), 0);
            std::vector<std::pair<Node, Payload>> sent;
            for (Node v = 0; v < n; ++v) {
                if (v == sink || sched.t[v] != block || tree.level[v] % 3 != step) continue;
                // Every node holds its full subtree before its block.
                RN_CHECK(std::includes(res.sets[v].begin(), res.sets[v].end(), subtree[v].begin(),
                                       subtree[v].end()),
                         "gather: subtree incomplete at t(v)");
                transmits[v] = 1;
                Payload p;
                p.kind = Payload::Kind::gather;
                p.sender_lev = tree.level[v] % 3;
                p.h2_value = h.h2[v];
                p.s_value = 0;  // centralized variant carries no label fields
                p.level_value = tree.level[v];
                p.messages.assign(res.sets[v].begin(), res.sets[v].end());
                rec.tx.push_back({v, p.kind, p.sender_lev, p.digest()});
                sent.emplace_back(v, std::move(p));
            }
            std::vector<int> payload_of(n, -1);
            for (std::size_t i = 0; i < sent.size(); ++i) payload_of[sent[i].first] = static_cast<int>(i);
            for (Node v = 0; v < n; ++v) {
                if (transmits[v]) continue;
                Node sender = -1;
                int count = 0;
                for (Node u : g.neighbors(v))
                    if (transmits[u]) {
                        ++count;
                        sender = u;
                        if (count > 1) break;
                    }
                if (count != 1) {
                    // A parent must never lose a transmitting child to a collision.
                    if (count > 1)
                        for (Node c : tree.children[v])
                            RN_CHECK(!transmits[c], "gather: collision at a tree parent");
                    continue;
                }
                const Payload& p = sent[static_cast<std::size_t>(payload_of[sender])].second;
                rec.rx.push_back({v, p.kind, p.sender_lev, p.digest()});
                if (tree.level[sender] == tree.level[v] + 1)
                    res.sets[v].insert(p.messages.begin(), p.messages.end());
            }
        }
    }
    RN_CHECK(res.sets[sink].size() == static_cast<std::size_t>(n), "gather: sink set incomplete");
    return res;
}

std::uint64_t gossip_message_token(Node v) { return splitmix64(0xabcd1234u + static_cast<std::uint64_t>(v)); }

GatherProgram::GatherProgram(Config cfg)
    : cfg_(std::move(cfg)),
      ack_(cfg_.label.bcast, cfg_.is_sink,
           [&] {
               BroadcastCore::Extras e;
               e.kind = Payload::Kind::broadcast;
               e.msg_id = 1;
               e.carry_level = true;
               if (cfg_.is_sink && cfg_.stub_window == 0) {
                   e.d_value = cfg_.label.diameter_hint;
                   e.logn_value = cfg_.label.logn_hint;
               }
               return e;
           }()) {
    if (cfg_.label.s_prime < 0) {  // leaf flag doubles as h2 = 0
        h2_known_ = true;
        h2_ = 0;
        h2_learned_round_ = 0;
    }
    messages_.insert(cfg_.own_message);
}

long GatherProgram::tau() const {
    long t = ack_.termination_round();
    return t < 0 ? -1 : cfg_.stub_window + t + 1;
}

long GatherProgram::gather_window() const {
    // 3D + 3*spacing*(logn+1) rounds, computable from learned parameters.
    long spacing = cfg_.label.spacing_base + 1;
    return 3L * (d_ + spacing * (logn_ + 1));
}

long GatherProgram::phase2_end() const { return tau() < 0 ? -1 : tau() + gather_window(); }

long GatherProgram::my_t_block() const {
    if (cfg_.is_sink || !h2_known_ || d_ < 0 || level_ < 0) return -1;
    long spacing = cfg_.label.spacing_base + 1;
    long base = d_ - level_ + static_cast<long>(h2_) * spacing;
    return cfg_.label.fast_flag ? base : base + cfg_.label.s + 1;
}

std::set<std::uint64_t> GatherProgram::final_messages() const {
    if (cfg_.is_sink || !cfg_.run_distribution) return messages_;
    if (run3_started_ && run3_.informed()) {
        const auto& m = run3_.accepted().messages;
        return {m.begin(), m.end()};
    }
    return {};
}

Action GatherProgram::on_round(long round) {
    long rel = round - cfg_.stub_window;
    if (rel < 0) return Action::listen();  // reserved Size Learning window
    if (rel == 0 && cfg_.stub_window > 0) {
        d_ = cfg_.injected_d;
        logn_ = cfg_.injected_logn;
    }
    if (cfg_.is_sink && level_ < 0) {
        level_ = 0;
        if (cfg_.stub_window == 0) {
            d_ = cfg_.label.diameter_hint;
            logn_ = cfg_.label.logn_hint;
        }
    }

    long t = tau();
    if (t < 0 || round < t) return ack_.on_round(rel);

    if (round < phase2_end()) {
        long gr = round - t;
        long block = gr / 3;
        int step = static_cast<int>(gr % 3);
        long mine = my_t_block();
        if (!cfg_.is_sink && !transmitted_ && mine >= 0 && block == mine && step == level_ % 3) {
            transmitted_ = true;
            transmitted_round_ = round;
            Payload p;
            p.kind = Payload::Kind::gather;
            p.sender_lev = level_ % 3;
            p.h2_value = h2_;
            p.s_value = cfg_.label.s;
            p.level_value = level_;
            p.messages.assign(messages_.begin(), messages_.end());
            return Action::send(p);
        }
        return Action::listen();
    }

    if (!cfg_.run_distribution) return Action::listen();
    if (!run3_started_) {
        run3_started_ = true;
        BroadcastCore::Extras e;
        e.kind = Payload::Kind::broadcast;
        e.msg_id = 2;
        e.messages.assign(messages_.begin(), messages_.end());
        run3_ = BroadcastCore(cfg_.label.bcast, cfg_.is_sink, e);
    }
    return run3_.on_round(round - phase2_end());
}

void GatherProgram::on_reception(long round, const Reception& r) {
    long rel = round - cfg_.stub_window;
    if (rel < 0) return;

    long t = tau();
    if (t < 0 || round < t) {
        ack_.on_reception(rel, r);
        if (level_ < 0 && ack_.learned_level() >= 0) level_ = ack_.learned_level();
        if (d_ < 0) d_ = ack_.learned_d();
        if (logn_ < 0) logn_ = ack_.learned_logn();
        return;
    }
    if (round < phase2_end()) {
        if (r.is_message && r.msg.kind == Payload::Kind::gather && r.msg.level_value == level_ + 1) {
            ++gather_receptions_;
            messages_.insert(r.msg.messages.begin(), r.msg.messages.end());
            if (!h2_known_ && r.msg.s_value == cfg_.label.s_prime) {
                h2_ = r.msg.h2_value + cfg_.label.b;
                h2_known_ = true;
                h2_learned_round_ = round;
            }
        }
        return;
    }
    if (run3_started_) run3_.on_reception(round - phase2_end(), r);
}

GatherLabelResult assign_gather_labels(const Graph& g, Node sink, BroadcastMode mode, std::uint64_t seed,
                                       int retry_budget, int bound_c) {
    GatherLabelResult out;
    out.hrt = build_2hrt(g, sink);
    out.coloring = assign_s_coloring(g, out.hrt.tree);
    out.schedule = compute_schedule(out.hrt.tree, out.hrt.heights, out.coloring, eccentricity(g, sink));

    LabelTable bcast;
    if (mode == BroadcastMode::express) {
        auto r = assign_express_labels(g, sink, seed, retry_budget, bound_c);
        out.express_rounds = r.rounds;
        out.express_attempts = r.attempts;
        out.express_ok = r.ok;
        bcast = std::move(r.labels);
        out.bcast_state = std::move(r.state);
    } else if (mode == BroadcastMode::fast) {
        auto r = assign_fast_labels(g, sink);
        bcast = std::move(r.labels);
        out.bcast_state = std::move(r.state);
    } else {
        auto r = assign_executor_labels(g, sink, GoMode::constructive);
        bcast = std::move(r.labels);
        out.bcast_state = std::move(r.state);
    }

    // Ack bits come from a plain run of the assigned labels.
    if (g.node_count() > 1) {
        auto programs = broadcast_programs(bcast, sink, BroadcastVariant::executor);
        long horizon = std::max<long>(1, out.bcast_state.rounds_used + 5);
        Trace trace = run(g, programs, horizon);
        bcast = assign_ack_bits(bcast, trace, g, out.hrt.tree);
    } else {
        for (auto& l : bcast.bcast) l.has_ack = true;
        bcast.bcast[sink].on_path = true;
        bcast.bcast[sink].terminal = true;
    }

    out.labels = std::move(bcast);
    out.labels.gather.assign(g.node_count(), {});
    const auto& tree = out.hrt.tree;
    const auto& h = out.hrt.heights;
    for (Node v = 0; v < g.node_count(); ++v) {
        GatherLabel& gl = out.labels.gather[v];
        gl.spacing_base = out.coloring.color_count;
        gl.s = out.coloring.s[v];
        gl.fast_flag = tree.parent[v] >= 0 && h.fast_edge(tree, v);
        gl.leaf_flag = tree.children[v].empty();
        if (gl.leaf_flag) {
            gl.s_prime = -1;
            gl.b = -1;
        } else {
            Node top = -1;
            for (Node c : tree.children[v])  // lowest id among h2 maximizers
                if (top < 0 || h.h2[c] > h.h2[top]) top = c;
            gl.s_prime = out.coloring.s[top];
            gl.b = h.h2[v] - h.h2[top];
            RN_CHECK(gl.b == 0 || gl.b == 1, "gather labels: b(v) outside {0,1}");
        }
        gl.bcast = out.labels.bcast[v];
    }
    out.labels.gather[sink].sink_degree = g.degree(sink);
    out.labels.gather[sink].diameter_hint = eccentricity(g, sink);
    out.labels.gather[sink].logn_hint = clog(g.node_count());
    return out;
}

namespace {

std::vector<std::unique_ptr<NodeProgram>> gather_programs(const Graph& g, Node sink,
                                                          const GatherLabelResult& labels,
                                                          const GossipConfig& cfg,
                                                          std::vector<GatherProgram*>& handles) {
    std::vector<std::unique_ptr<NodeProgram>> programs;
    handles.clear();
    for (Node v = 0; v < g.node_count(); ++v) {
        GatherProgram::Config pc;
        pc.label = labels.labels.gather[v];
        pc.is_sink = v == sink;
        pc.own_message = gossip_message_token(v);
        pc.run_distribution = !cfg.gather_only;
        if (cfg.dissem == DissemMode::stub_size_learning) {
            pc.stub_window = 15 * clog2sq(g.node_count());
            pc.injected_d = eccentricity(g, sink);
            pc.injected_logn = clog(g.node_count());
        }
        auto p = std::make_unique<GatherProgram>(std::move(pc));
        handles.push_back(p.get());
        programs.push_back(std::move(p));
    }
    return programs;
}

}  // namespace

namespace {

// Reserves the Size-Learning round budget: silence for `window` rounds, then
// the inner program runs with injected global parameters.
class DelayedAck : public NodeProgram {
public:
    DelayedAck(std::unique_ptr<AcknowledgedProgram> inner, long window, int injected_d)
        : inner_(std::move(inner)), window_(window), injected_d_(injected_d) {}
    Action on_round(long round) override {
        if (round < window_) return Action::listen();
        return inner_->on_round(round - window_);
    }
    void on_reception(long round, const Reception& r) override {
        if (round >= window_) inner_->on_reception(round - window_, r);
    }
    AcknowledgedProgram& inner() { return *inner_; }
    int learned_d() const { return injected_d_ >= 0 ? injected_d_ : inner_->learned_d(); }
    long window() const { return window_; }

private:
    std::unique_ptr<AcknowledgedProgram> inner_;
    long window_;
    int injected_d_;
};

}  // namespace

DisseminationResult disseminate_parameters(const Graph& g, Node sink, const LabelTable& labels,
                                           DissemMode mode) {
    DisseminationResult out;
    const long window = mode == DissemMode::stub_size_learning ? 15 * clog2sq(g.node_count()) : 0;
    std::vector<std::unique_ptr<NodeProgram>> programs;
    std::vector<DelayedAck*> handles;
    for (Node v = 0; v < g.node_count(); ++v) {
        BroadcastCore::Extras e;
        e.kind = Payload::Kind::broadcast;
        e.carry_level = true;
        if (v == sink && mode == DissemMode::oracle_injected_d) {
            e.d_value = labels.gather.empty() ? eccentricity(g, sink) : labels.gather[sink].diameter_hint;
            e.logn_value = clog(g.node_count());
        }
        int injected = mode == DissemMode::stub_size_learning ? eccentricity(g, sink) : -1;
        auto inner = std::make_unique<AcknowledgedProgram>(labels.bcast[v], v == sink, e);
        auto p = std::make_unique<DelayedAck>(std::move(inner), window, injected);
        handles.push_back(p.get());
        programs.push_back(std::move(p));
    }
    long horizon = window + 16 * (eccentricity(g, sink) + 5 * clog2sq(g.node_count())) + 64;
    out.trace = run(g, programs, horizon);
    out.trace.grid.push_back({window, 5, {"broadcast", "feedback", "go", "fast", "rescue"}});
    for (Node v = 0; v < g.node_count(); ++v) {
        out.learned_levels.push_back(handles[v]->inner().learned_level());
        out.learned_d.push_back(handles[v]->learned_d());
        long term = handles[v]->inner().termination_round();
        out.termination_rounds.push_back(term < 0 ? -1 : term + window);
    }
    out.t1 = handles[sink]->inner().t1();
    out.tau = out.t1 < 0 ? -1 : window + 2 * out.t1 + 1;
    return out;
}

GossipResult gossip_pipeline(const Graph& g, Node sink, const GossipConfig& cfg) {
    GossipResult res;
    res.labels = assign_gather_labels(g, sink, cfg.mode, cfg.seed, cfg.retry_budget, cfg.bound_c);

    std::vector<GatherProgram*> handles;
    auto programs = gather_programs(g, sink, res.labels, cfg, handles);

    // Tight horizon from the deterministic pipeline arithmetic: t1, then the
    // gather window, then the distribution run (same relative length as the
    // dissemination run), plus visible-silence slack.
    const long n = g.node_count();
    const long ecc = eccentricity(g, sink);
    const long spacing = res.labels.coloring.color_count + 1;
    long horizon = 16;
    if (n > 1) {
        const auto& st = res.labels.bcast_state;
        long beta = st.last_inform_block;
        long t1_est = 5 * (beta + 1) + ecc;
        long tau_est = 2 * t1_est + 1;
        long gather_rounds = 3L * (ecc + spacing * (clog(n) + 1));
        horizon = tau_est + gather_rounds + st.rounds_used + 40;
        if (cfg.dissem == DissemMode::stub_size_learning) horizon += 15 * clog2sq(n);
    }

    res.trace = run(g, programs, horizon);
    res.trace.grid.push_back({0, 5, {"broadcast", "feedback", "go", "fast", "rescue"}});

    res.tau = handles[sink]->tau();
    res.phase2_end = handles[sink]->phase2_end();
    if (res.tau >= 0) {
        res.trace.grid.push_back({res.tau, 3, {"gather-0", "gather-1", "gather-2"}});
        if (!cfg.gather_only && res.phase2_end >= 0)
            res.trace.grid.push_back({res.phase2_end, 5, {"broadcast", "feedback", "go", "fast", "rescue"}});
    }

    for (Node v = 0; v < n; ++v) {
        res.final_sets.push_back(handles[v]->final_messages());
        res.gathered_sets.push_back(handles[v]->gathered());
        res.learned_h2.push_back(handles[v]->learned_h2());
        res.h2_learned_rounds.push_back(handles[v]->h2_learned_round());
        res.t_blocks.push_back(handles[v]->my_t_block());
        res.transmitted_rounds.push_back(handles[v]->transmitted_round());
        res.own_messages.push_back(gossip_message_token(v));
    }
    res.sink_gather_receptions = handles[sink]->gather_receptions();
    for (long r = res.trace.rounds - 1; r >= 0; --r)
        if (!res.trace.per_round[static_cast<std::size_t>(r)].tx.empty()) {
            res.rounds_used = r + 1;
            break;
        }
    return res;
}

}  // namespace radionet
