#include "radionet/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "radionet/util.hpp"

namespace radionet {

BipartiteSelection derandomize_bipartite(const BipartiteInstance& inst) {
    const int a_n = inst.a_size;
    const int b_n = static_cast<int>(inst.b_adj.size());
    RN_CHECK(a_n >= 1, "derandomize: A must be nonempty");
    for (const auto& adj : inst.b_adj) RN_CHECK(!adj.empty(), "derandomize: B node with degree 0");

    std::vector<std::vector<int>> a_adj(a_n);
    int max_deg = 0;
    for (int b = 0; b < b_n; ++b) {
        for (int a : inst.b_adj[b]) a_adj[a].push_back(b);
        max_deg = std::max(max_deg, static_cast<int>(inst.b_adj[b].size()));
    }

    const int la = clog(a_n);
    BipartiteSelection best;
    long best_count = -1;

    std::vector<int> chosen(b_n), undecided(b_n);
    std::vector<char> a_in(a_n);
    std::vector<double> qpow(static_cast<std::size_t>(max_deg) + 1);

    for (int j = 1; j <= la; ++j) {
        const double p = std::ldexp(1.0, -j);
        const double q = 1.0 - p;
        qpow[0] = 1.0;
        for (int k = 1; k <= max_deg; ++k) qpow[k] = qpow[k - 1] * q;

        // P[b ends with exactly one chosen neighbor] given current partial choice.
        auto prob = [&](int b) -> double {
            if (chosen[b] >= 2) return 0.0;
            int u = undecided[b];
            if (chosen[b] == 1) return qpow[u];
            return u == 0 ? 0.0 : static_cast<double>(u) * p * qpow[u - 1];
        };

        for (int b = 0; b < b_n; ++b) {
            chosen[b] = 0;
            undecided[b] = static_cast<int>(inst.b_adj[b].size());
        }
        std::fill(a_in.begin(), a_in.end(), 0);

        for (int a = 0; a < a_n; ++a) {
            double delta_in = 0.0, delta_out = 0.0;
            for (int b : a_adj[a]) {
                double before = prob(b);
                --undecided[b];
                ++chosen[b];
                delta_in += prob(b) - before;
                --chosen[b];
                delta_out += prob(b) - before;
                ++undecided[b];
            }
            if (delta_in >= delta_out) {
                a_in[a] = 1;
                for (int b : a_adj[a]) {
                    --undecided[b];
                    ++chosen[b];
                }
            } else {
                for (int b : a_adj[a]) --undecided[b];
            }
        }

        long count = 0;
        for (int b = 0; b < b_n; ++b)
            if (chosen[b] == 1) ++count;
        if (count > best_count) {
            best_count = count;
            best.a_prime.clear();
            best.b_prime.clear();
            for (int a = 0; a < a_n; ++a)
                if (a_in[a]) best.a_prime.push_back(a);
            for (int b = 0; b < b_n; ++b)
                if (chosen[b] == 1) best.b_prime.push_back(b);
        }
    }

    // Exactly-one property and the size guarantee, checked on every call.
    for (int b : best.b_prime) {
        int hits = 0;
        for (int a : inst.b_adj[b])
            if (std::binary_search(best.a_prime.begin(), best.a_prime.end(), a)) ++hits;
        RN_CHECK(hits == 1, "derandomize: B' node without exactly one A' neighbor");
    }
    RN_CHECK(static_cast<long>(best.b_prime.size()) * 15 * la >= b_n,
             "derandomize: |B'| guarantee violated");
    return best;
}

std::vector<Node> minimal_dominating(const std::vector<Node>& candidates, const std::vector<Node>& frontier,
                                     const Graph& g) {
    if (frontier.empty()) return {};
    std::vector<char> is_candidate(g.node_count(), 0), in_frontier(g.node_count(), 0);
    for (Node v : candidates) is_candidate[v] = 1;
    for (Node f : frontier) in_frontier[f] = 1;

    std::vector<int> cover_count(g.node_count(), 0);
    for (Node f : frontier) {
        for (Node u : g.neighbors(f))
            if (is_candidate[u]) ++cover_count[f];
        RN_CHECK(cover_count[f] >= 1, "minimal_dominating: uncovered frontier node");
    }

    std::vector<Node> kept(candidates);
    std::sort(kept.begin(), kept.end());
    std::vector<char> removed(g.node_count(), 0);
    for (auto it = kept.rbegin(); it != kept.rend(); ++it) {
        Node v = *it;
        bool removable = true;
        for (Node f : g.neighbors(v))
            if (in_frontier[f] && cover_count[f] <= 1) {
                removable = false;
                break;
            }
        if (removable) {
            removed[v] = 1;
            for (Node f : g.neighbors(v))
                if (in_frontier[f]) --cover_count[f];
        }
    }
    std::vector<Node> out;
    for (Node v : kept)
        if (!removed[v]) out.push_back(v);
    return out;
}

long fast_deadline_x(int level, int h2_root, int h2_v, long n) {
    long l2 = clog2sq(n);
    return 3 * (static_cast<long>(level) + 30 * l2 * (h2_root - h2_v)) + ((level - 1) % 3 + 3) % 3;
}

long express_residue_y(int level, int h2_root, int h2_v) {
    return 6 * (static_cast<long>(level) + (h2_root - h2_v)) + ((level - 1) % 3 + 3) % 3;
}

std::vector<long> OracleState::informed_rounds() const {
    std::vector<long> out(informed_block.size(), -1);
    for (std::size_t v = 0; v < informed_block.size(); ++v) {
        if (informed_block[v] == -1)
            out[v] = 0;  // source, informed at the start
        else if (informed_block[v] >= 0)
            out[v] = informed_block[v] * 5 + informed_step[v];
    }
    return out;
}

namespace {

// Shared co-simulation behind the executor, fast, and express oracles. Labels
// are written as events happen; Stay/Join resolve retroactively three blocks
// later, when the class's next dominating set is pruned.
class ExecutorSim {
public:
    ExecutorSim(const Graph& g, Node source, GoMode go_mode, DeadlineMode deadline, std::uint64_t seed)
        : g_(g), n_(g.node_count()), go_mode_(go_mode), deadline_(deadline), rng_(seed) {
        state_.source = source;
        state_.T = 15 * clog2sq(n_);
        state_.level = bfs_levels(g, source);
        state_.informed_block.assign(n_, -2);
        state_.informed_step.assign(n_, -2);
        labels_.bcast.assign(n_, {});
        for (Node v = 0; v < n_; ++v) labels_.bcast[v].lev = state_.level[v] % 3;

        informed_.assign(n_, 0);
        in_dom_.assign(n_, 0);
        stage_a_.assign(n_, 0);
        informed_[source] = 1;
        state_.informed_block[source] = -1;
        state_.informed_step[source] = -1;
        recruits_.push_back(source);  // Join is consulted for DOM_0

        if (deadline_ != DeadlineMode::none) {
            auto hrt = build_2hrt(g, source);
            tree_ = std::move(hrt.tree);
            heights_ = std::move(hrt.heights);
            state_.parent = tree_.parent;
            state_.h2 = heights_.h2;
            if (deadline_ == DeadlineMode::fast_x) {
                state_.x.assign(n_, -1);
                for (Node v = 0; v < n_; ++v) {
                    if (v == source) continue;
                    state_.x[v] = fast_deadline_x(state_.level[v], heights_.h2[source], heights_.h2[v], n_);
                    if (heights_.fast_edge(tree_, v)) case_agenda_[state_.x[v]].push_back(v);
                }
            } else {
                zmod_ = 6 * clog(n_);
                state_.y.assign(n_, -1);
                state_.z.assign(n_, -1);
                for (Node v = 0; v < n_; ++v)
                    state_.y[v] = express_residue_y(state_.level[v], heights_.h2[source], heights_.h2[v]);
                state_.z[source] = 1;
                resolve_z_chain(source);
            }
        }
    }

    void run() {
        const long budget = 3L * n_ + 24;
        for (long b = 0;; ++b) {
            bool done = informed_count_ == n_ && pending_stay_.empty() && recruits_.empty();
            if (done) break;
            RN_CHECK(b <= budget, "executor oracle: block budget exceeded");
            block(b);
        }
        if (go_mode_ == GoMode::constructive)
            finalize_stage_records(current_stage_);
        // Deadline sweeps (agenda checks cannot run past early termination).
        if (deadline_ == DeadlineMode::fast_x) {
            for (Node v = 0; v < n_; ++v)
                if (v != state_.source)
                    RN_CHECK(state_.informed_block[v] <= state_.x[v], "fast broadcast: x(v) deadline missed");
        } else if (deadline_ == DeadlineMode::express_z) {
            for (Node v = 0; v < n_; ++v)
                if (v != state_.source && heights_.fast_edge(tree_, v)) {
                    RN_CHECK(state_.z[v] >= 0, "express: z unresolved for a fast-edge child");
                    RN_CHECK(state_.informed_block[v] <= state_.z[v], "express: z(v) deadline missed");
                }
        }
    }

    ExecutorOracleResult take() && { return {std::move(labels_), std::move(state_)}; }

private:
    // Express z: fast-edge children anchor strictly after the parent's z; slow
    // ones self-anchor strictly after their own informed block.
    void resolve_z_chain(Node head) {
        std::vector<Node> stack{head};
        while (!stack.empty()) {
            Node v = stack.back();
            stack.pop_back();
            for (Node c : tree_.children[v]) {
                if (!heights_.fast_edge(tree_, c)) continue;
                state_.z[c] = next_residue(state_.y[c], state_.z[v]);
                case_agenda_[state_.z[c]].push_back(c);
                stack.push_back(c);
            }
        }
    }

    long next_residue(long y, long strictly_after) const {
        long r = ((y % zmod_) + zmod_) % zmod_;
        long base = strictly_after + 1;
        return base + (((r - base) % zmod_) + zmod_) % zmod_;
    }

    void block(long b) {
        const int x = static_cast<int>(b % 3);
        BlockRecord rec;
        rec.block = b;

        // Pool: this class's survivors plus the recruits informed in block b-1.
        std::vector<Node> pool;
        for (Node v = 0; v < n_; ++v)
            if (in_dom_[v] && state_.level[v] % 3 == x) pool.push_back(v);
        for (Node u : recruits_) {
            RN_CHECK(state_.level[u] % 3 == x, "executor oracle: recruit in the wrong class");
            pool.push_back(u);
        }
        std::sort(pool.begin(), pool.end());
        pool.erase(std::unique(pool.begin(), pool.end()), pool.end());

        // Levelled frontier of this class, grouped per level.
        std::map<int, std::vector<Node>> frontier_by_level;
        for (Node f = 0; f < n_; ++f) {
            if (informed_[f] || state_.level[f] % 3 != (x + 1) % 3) continue;
            for (Node u : g_.neighbors(f))
                if (informed_[u] && state_.level[u] == state_.level[f] - 1) {
                    frontier_by_level[state_.level[f] - 1].push_back(f);
                    break;
                }
        }

        std::vector<Node> dom;
        {
            std::map<int, std::vector<Node>> pool_by_level;
            for (Node v : pool) pool_by_level[state_.level[v]].push_back(v);
            for (auto& [l, fr] : frontier_by_level) {
                auto it = pool_by_level.find(l);
                RN_CHECK(it != pool_by_level.end(), "executor oracle: frontier with empty pool");
                auto mins = minimal_dominating(it->second, fr, g_);
                dom.insert(dom.end(), mins.begin(), mins.end());
            }
            std::sort(dom.begin(), dom.end());
        }

        // Membership updates and retroactive Stay/Join bits.
        std::vector<char> in_new(n_, 0);
        for (Node v : dom) in_new[v] = 1;
        for (Node v : pool) in_dom_[v] = in_new[v];
        for (Node u : recruits_) labels_.bcast[u].join = in_new[u] != 0;
        recruits_.clear();
        if (auto it = pending_stay_.find(b); it != pending_stay_.end()) {
            for (auto [v, w] : it->second) labels_.bcast[w].stay = in_new[v] != 0;
            pending_stay_.erase(it);
        }

        if (go_mode_ == GoMode::constructive && b % state_.T == 0) {
            finalize_stage_records(b / state_.T - 1);
            std::fill(stage_a_.begin(), stage_a_.end(), 0);
            for (Node v = 0; v < n_; ++v)
                if (in_dom_[v]) stage_a_[v] = 1;
            record_stage_start(b / state_.T);
        }

        rec.dom = dom;

        // Broadcast step.
        auto informed_now = deliver(dom, rec.informed_broadcast, b, 0);

        // Feedback node of each dominator: lowest-id node it uniquely informed.
        std::map<Node, Node> feedback;
        for (Node w : informed_now) {
            Node informer = informer_of_[w];
            auto it = feedback.find(informer);
            if (it == feedback.end() || w < it->second) feedback[informer] = w;
        }
        for (Node v : dom) {
            RN_CHECK(feedback.count(v), "executor oracle: dominator without a uniquely informed node");
            rec.feedback.emplace_back(v, feedback[v]);
            pending_stay_[b + 3].emplace_back(v, feedback[v]);
        }

        // Go bits for this block.
        std::vector<Node> go_tx;
        if (go_mode_ == GoMode::constructive) {
            go_tx = constructive_go(dom);
        } else {
            int p_r = 1 + static_cast<int>(rng_() % static_cast<std::uint64_t>(clog(n_)));
            double prob = std::ldexp(1.0, -p_r);
            for (Node v : dom) {
                double coin = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
                if (coin < prob) go_tx.push_back(v);
            }
        }
        for (Node v : go_tx) labels_.bcast[feedback.at(v)].go = true;
        rec.go_tx = go_tx;

        // Fast/Rescue bits scheduled for this block.
        std::vector<Node> fast_tx, rescue_tx;
        if (auto it = case_agenda_.find(b); it != case_agenda_.end()) {
            for (Node v : it->second) {
                if (informed_[v]) continue;  // informed early: no bit changes caused by v
                Node p = tree_.parent[v];
                RN_CHECK(informed_[p], "deadline case: parent uninformed at the ultimate block");
                if (in_new[p]) {
                    labels_.bcast[feedback.at(p)].fast = true;
                    fast_tx.push_back(p);
                } else {
                    Node rescuer = -1;
                    for (Node u : g_.neighbors(v))
                        if (in_new[u] && state_.level[u] == state_.level[p]) {
                            rescuer = u;
                            break;
                        }
                    RN_CHECK(rescuer >= 0, "deadline case 2: no dominating-set rescuer");
                    labels_.bcast[feedback.at(rescuer)].rescue = true;
                    rescue_tx.push_back(rescuer);
                }
            }
        }
        auto dedup = [](std::vector<Node>& v) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
        };
        dedup(fast_tx);
        dedup(rescue_tx);
        rec.fast_tx = fast_tx;
        rec.rescue_tx = rescue_tx;

        auto new_go = deliver(go_tx, rec.informed_go, b, 2);
        auto new_fast = deliver(fast_tx, rec.informed_fast, b, 3);
        auto new_rescue = deliver(rescue_tx, rec.informed_rescue, b, 4);

        // In-run deadline assertions for this block's agenda.
        if (auto it = case_agenda_.find(b); it != case_agenda_.end())
            for (Node v : it->second)
                RN_CHECK(informed_[v], deadline_ == DeadlineMode::fast_x
                                           ? "fast broadcast: x(v) deadline missed"
                                           : "express broadcast: z(v) deadline missed");

        for (auto* lst : {&informed_now, &new_go, &new_fast, &new_rescue})
            for (Node u : *lst) {
                recruits_.push_back(u);
                if (deadline_ == DeadlineMode::express_z && !heights_.fast_edge(tree_, u)) {
                    state_.z[u] = next_residue(state_.y[u], b);
                    resolve_z_chain(u);
                }
            }
        std::sort(recruits_.begin(), recruits_.end());

        state_.history.push_back(std::move(rec));
    }

    // One transmission step under the collision rule, levelled acceptance.
    std::vector<Node> deliver(const std::vector<Node>& tx, std::vector<Node>& record, long b, int step) {
        std::vector<Node> fresh;
        if (tx.empty()) return fresh;
        std::vector<char> transmits(n_, 0);
        for (Node v : tx) transmits[v] = 1;
        for (Node f = 0; f < n_; ++f) {
            if (informed_[f] || transmits[f]) continue;
            Node sender = -1;
            int count = 0;
            for (Node u : g_.neighbors(f))
                if (transmits[u]) {
                    ++count;
                    sender = u;
                    if (count > 1) break;
                }
            if (count == 1 && state_.level[sender] == state_.level[f] - 1) {
                informed_[f] = 1;
                ++informed_count_;
                state_.informed_block[f] = b;
                state_.informed_step[f] = step;
                informer_of_[f] = sender;
                state_.last_inform_block = std::max(state_.last_inform_block, b);
                state_.rounds_used = std::max(state_.rounds_used, 5 * b + step + 1);
                fresh.push_back(f);
                record.push_back(f);
            }
        }
        return fresh;
    }

    // Stage-scoped bipartite Go assignment; mid-stage arrivals stay silent in
    // Go steps until the next stage boundary.
    std::vector<Node> constructive_go(const std::vector<Node>& dom) {
        std::vector<Node> go_tx;
        std::map<int, std::vector<Node>> a_by_level;
        for (Node v : dom)
            if (stage_a_[v]) a_by_level[state_.level[v]].push_back(v);
        for (auto& [l, a_nodes] : a_by_level) {
            std::vector<Node> b_nodes;
            {
                std::vector<char> seen(n_, 0);
                for (Node v : a_nodes)
                    for (Node f : g_.neighbors(v))
                        if (!informed_[f] && !seen[f] && state_.level[f] == l + 1) {
                            seen[f] = 1;
                            b_nodes.push_back(f);
                        }
            }
            if (b_nodes.empty()) continue;
            std::sort(b_nodes.begin(), b_nodes.end());
            BipartiteInstance inst;
            inst.a_size = static_cast<int>(a_nodes.size());
            inst.b_adj.resize(b_nodes.size());
            std::vector<int> a_index;
            a_index.assign(n_, -1);
            for (int i = 0; i < inst.a_size; ++i) a_index[a_nodes[i]] = i;
            for (std::size_t bi = 0; bi < b_nodes.size(); ++bi)
                for (Node u : g_.neighbors(b_nodes[bi]))
                    if (a_index[u] >= 0) inst.b_adj[bi].push_back(a_index[u]);
            auto sel = derandomize_bipartite(inst);
            for (int ai : sel.a_prime) go_tx.push_back(a_nodes[ai]);
        }
        std::sort(go_tx.begin(), go_tx.end());
        return go_tx;
    }

    void record_stage_start(long stage) {
        current_stage_ = stage;
        stage_b_start_.clear();
        for (Node v = 0; v < n_; ++v) {
            if (!stage_a_[v]) continue;
            int l = state_.level[v];
            for (Node f : g_.neighbors(v))
                if (!informed_[f] && state_.level[f] == l + 1) stage_b_start_[l].insert(f);
        }
    }

    void finalize_stage_records(long stage) {
        if (stage < 0 || stage_done_ == stage) return;
        stage_done_ = stage;
        for (auto& [l, b0] : stage_b_start_) {
            StageLevelRecord r;
            r.stage = stage;
            r.level = l;
            r.b_start = static_cast<long>(b0.size());
            std::set<Node> left;
            for (Node v = 0; v < n_; ++v) {
                if (!stage_a_[v] || !in_dom_[v] || state_.level[v] != l) continue;
                for (Node f : g_.neighbors(v))
                    if (!informed_[f] && state_.level[f] == l + 1) left.insert(f);
            }
            r.b_end = static_cast<long>(left.size());
            state_.stage_frontier.push_back(r);
        }
    }

    const Graph& g_;
    int n_;
    GoMode go_mode_;
    DeadlineMode deadline_;
    std::mt19937_64 rng_;
    LabelTable labels_;
    OracleState state_;
    RootedTree tree_;
    TwoHeightMap heights_;
    long zmod_ = 6;

    std::vector<char> informed_, in_dom_, stage_a_;
    int informed_count_ = 1;
    std::map<Node, Node> informer_of_;
    std::vector<Node> recruits_;
    std::map<long, std::vector<std::pair<Node, Node>>> pending_stay_;
    std::map<long, std::vector<Node>> case_agenda_;
    long current_stage_ = -1;
    long stage_done_ = -2;
    std::map<int, std::set<Node>> stage_b_start_;
};

}  // namespace

ExecutorOracleResult assign_executor_labels(const Graph& g, Node source, GoMode mode, std::uint64_t seed) {
    ExecutorSim sim(g, source, mode, DeadlineMode::none, seed);
    sim.run();
    return std::move(sim).take();
}

ExecutorOracleResult assign_fast_labels(const Graph& g, Node source) {
    ExecutorSim sim(g, source, GoMode::constructive, DeadlineMode::fast_x, 0);
    sim.run();
    return std::move(sim).take();
}

ExpressOracleResult assign_express_labels(const Graph& g, Node source, std::uint64_t seed, int retry_budget,
                                          int bound_c) {
    RN_CHECK(retry_budget >= 1, "express: retry budget must be >= 1");
    const long n = g.node_count();
    const long bound = bound_c * (eccentricity(g, source) + clog2sq(n));
    ExpressOracleResult best;
    for (int attempt = 0; attempt < retry_budget; ++attempt) {
        std::uint64_t s = splitmix64(seed + static_cast<std::uint64_t>(attempt));
        ExecutorSim sim(g, source, GoMode::express, DeadlineMode::express_z, s);
        sim.run();
        auto r = std::move(sim).take();
        long rounds = r.state.rounds_used;
        if (best.attempts == 0 || rounds < best.rounds) {
            best.labels = std::move(r.labels);
            best.state = std::move(r.state);
            best.rounds = rounds;
            best.seed_used = s;
        }
        best.attempts = attempt + 1;
        if (rounds <= bound) {
            best.ok = true;
            break;
        }
    }
    return best;
}

LabelTable assign_ack_bits(const LabelTable& labels, const Trace& trace, const Graph& g,
                           const RootedTree& tree) {
    auto when = informed_times(trace, g, tree.root, levelled_accept(tree.level));
    Node latest = tree.root;  // n == 1 degenerates to the root itself
    long best = -1;
    for (Node v = 0; v < g.node_count(); ++v) {
        RN_CHECK(when[v] >= 0, "ack bits: trace does not inform every node");
        if (v == tree.root) continue;  // the source never *receives* the message
        if (when[v] > best) {          // strict: ties resolve to the lowest id
            best = when[v];
            latest = v;
        }
    }
    LabelTable out = labels;
    for (auto& l : out.bcast) {
        l.has_ack = true;
        l.on_path = false;
        l.terminal = false;
    }
    for (Node w = latest; w >= 0; w = tree.parent[w]) out.bcast[w].on_path = true;
    out.bcast[latest].terminal = true;
    if (out.has_gather())
        for (Node v = 0; v < out.size(); ++v) out.gather[v].bcast = out.bcast[v];
    return out;
}

}  // namespace radionet
