#include "radionet/harness.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "radionet/programs.hpp"
#include "radionet/util.hpp"

namespace radionet {

std::string ExperimentConfig::key() const {
    std::ostringstream os;
    os << protocol << '|' << graph << '|' << source << '|' << seed << '|' << express_c << '|'
       << retry_budget << '|' << dissem;
    return os.str();
}

namespace {

std::string meta_json_for(const ExperimentConfig& cfg, long horizon) {
    std::ostringstream os;
    os << "{\"protocol\":\"" << cfg.protocol << "\",\"graph\":\"" << cfg.graph << "\",\"source\":"
       << cfg.source << ",\"seed\":" << cfg.seed << ",\"express_c\":" << cfg.express_c
       << ",\"retry_budget\":" << cfg.retry_budget << ",\"dissem\":\"" << cfg.dissem
       << "\",\"horizon\":" << horizon << "}\n";
    return os.str();
}

std::string json_field(const std::string& meta, const std::string& key) {
    auto pos = meta.find("\"" + key + "\":");
    RN_CHECK(pos != std::string::npos, "meta: missing field " + key);
    pos += key.size() + 3;
    bool quoted = meta[pos] == '"';
    if (quoted) ++pos;
    auto end = meta.find_first_of(quoted ? "\"" : ",}", pos);
    return meta.substr(pos, end - pos);
}

struct BroadcastRunParts {
    LabelTable labels;
    OracleState state;
    Trace trace;
    long horizon = 0;
    GoMode go_mode = GoMode::constructive;
    DeadlineMode deadline = DeadlineMode::none;
    long express_rounds = -1;
    int express_attempts = 0;
    bool express_ok = true;
};

BroadcastRunParts run_broadcast_protocol(const Graph& g, const ExperimentConfig& cfg) {
    BroadcastRunParts parts;
    if (cfg.protocol == "executor-constructive") {
        auto r = assign_executor_labels(g, cfg.source, GoMode::constructive);
        parts.labels = std::move(r.labels);
        parts.state = std::move(r.state);
    } else if (cfg.protocol == "fast") {
        auto r = assign_fast_labels(g, cfg.source);
        parts.labels = std::move(r.labels);
        parts.state = std::move(r.state);
        parts.deadline = DeadlineMode::fast_x;
    } else if (cfg.protocol == "express") {
        auto r = assign_express_labels(g, cfg.source, cfg.seed, cfg.retry_budget, cfg.express_c);
        parts.labels = std::move(r.labels);
        parts.state = std::move(r.state);
        parts.go_mode = GoMode::express;
        parts.deadline = DeadlineMode::express_z;
        parts.express_rounds = r.rounds;
        parts.express_attempts = r.attempts;
        parts.express_ok = r.ok;
    } else {
        throw parse_error("unknown broadcast protocol '" + cfg.protocol + "'");
    }
    parts.horizon = parts.state.rounds_used + 35;
    auto programs = broadcast_programs(parts.labels, cfg.source, BroadcastVariant::executor);
    parts.trace = run(g, programs, parts.horizon);
    parts.trace.grid.push_back({0, 5, {"broadcast", "feedback", "go", "fast", "rescue"}});
    return parts;
}

}  // namespace

RunArtifacts run_experiment(const ExperimentConfig& cfg) {
    RunArtifacts art;
    auto spec = GraphFamilySpec::parse(cfg.graph);
    Graph g = generate(spec);
    art.graph_text = save_graph_string(g);
    art.n = g.node_count();
    art.max_degree = g.max_degree();
    art.diameter = diameter_exact(g);

    const long n = art.n;
    const long l2 = clog2sq(n);
    const long lg = clog(n);

    if (cfg.protocol == "gather" || cfg.protocol == "gossip") {
        GossipConfig gc;
        gc.seed = cfg.seed;
        gc.retry_budget = cfg.retry_budget;
        gc.bound_c = cfg.express_c;
        gc.mode = BroadcastMode::express;
        gc.dissem = cfg.dissem == "stub-size-learning" ? DissemMode::stub_size_learning
                                                       : DissemMode::oracle_injected_d;
        gc.gather_only = cfg.protocol == "gather";
        auto res = gossip_pipeline(g, cfg.source, gc);
        art.report = verify_gossip(g, cfg.source, res, gc.gather_only);
        if (!res.labels.express_ok) art.report.add("express/round-budget", false, "resampling exhausted");
        art.labels_text = res.labels.labels.save();
        art.trace_text = serialize_trace(res.trace);
        art.meta_json = meta_json_for(cfg, res.trace.rounds);
        art.rounds = res.rounds_used;
        if (cfg.protocol == "gather") {
            art.bound = 3 * art.diameter + 6 * (art.max_degree + 1) * lg + 3;
            art.rounds = 3 * (res.labels.schedule.max_block() + 1);
        } else {
            art.bound = art.diameter + art.max_degree * lg + l2;
        }
        art.ratio = art.bound > 0 ? static_cast<double>(art.rounds) / static_cast<double>(art.bound) : 0.0;
        art.pass = art.report.all_pass();
        return art;
    }

    auto parts = run_broadcast_protocol(g, cfg);
    art.report = verify_broadcast(g, parts.labels, parts.state, parts.trace, parts.go_mode, parts.deadline);
    if (cfg.protocol == "express") {
        art.report.metrics["express-attempts"] = std::to_string(parts.express_attempts);
        art.report.add("express/round-budget", parts.express_ok,
                       std::to_string(parts.express_rounds) + " rounds");
    }
    art.labels_text = parts.labels.save();
    art.trace_text = serialize_trace(parts.trace);
    art.meta_json = meta_json_for(cfg, parts.horizon);
    art.rounds = parts.state.rounds_used;
    if (cfg.protocol == "executor-constructive")
        art.bound = std::max<long>(1, art.diameter * l2);
    else if (cfg.protocol == "fast")
        art.bound = art.diameter + std::min<long>(art.diameter, lg) * l2;
    else
        art.bound = art.diameter + l2;
    art.ratio = static_cast<double>(art.rounds) / static_cast<double>(art.bound);
    art.pass = art.report.all_pass();
    return art;
}

Report verify_stored(const std::string& graph_text, const std::string& labels_text,
                     const std::string& trace_text, const std::string& meta_json) {
    Report rep;
    Graph g = load_graph_string(graph_text);
    LabelTable stored = LabelTable::load(labels_text);
    Trace stored_trace = parse_trace(trace_text);

    ExperimentConfig cfg;
    cfg.protocol = json_field(meta_json, "protocol");
    cfg.graph = json_field(meta_json, "graph");
    cfg.source = std::stoi(json_field(meta_json, "source"));
    cfg.seed = std::stoull(json_field(meta_json, "seed"));
    cfg.express_c = std::stoi(json_field(meta_json, "express_c"));
    cfg.retry_budget = std::stoi(json_field(meta_json, "retry_budget"));
    cfg.dissem = json_field(meta_json, "dissem");

    // The stored graph must match its spec.
    rep.add("verify/graph-matches-spec", save_graph_string(generate(GraphFamilySpec::parse(cfg.graph))) ==
                                             save_graph_string(g));

    if (cfg.protocol == "gather" || cfg.protocol == "gossip") {
        GossipConfig gc;
        gc.seed = cfg.seed;
        gc.retry_budget = cfg.retry_budget;
        gc.bound_c = cfg.express_c;
        gc.dissem = cfg.dissem == "stub-size-learning" ? DissemMode::stub_size_learning
                                                       : DissemMode::oracle_injected_d;
        gc.gather_only = cfg.protocol == "gather";
        auto res = gossip_pipeline(g, cfg.source, gc);
        rep.add("verify/labels-regenerate", res.labels.labels == stored);
        bool same = serialize_trace(res.trace) == trace_text;
        rep.add("verify/trace-replays", same);
        auto inner = verify_gossip(g, cfg.source, res, gc.gather_only);
        rep.checks.insert(rep.checks.end(), inner.checks.begin(), inner.checks.end());
        return rep;
    }

    auto parts = run_broadcast_protocol(g, cfg);
    rep.add("verify/labels-regenerate", parts.labels == stored);
    {
        auto programs = broadcast_programs(stored, cfg.source, BroadcastVariant::executor);
        auto replayed = replay(stored_trace, g, programs);
        std::string detail;
        if (!replayed.ok)
            detail = "diverges at round " + std::to_string(replayed.round) + ", node " +
                     std::to_string(replayed.node);
        rep.add("verify/trace-replays", replayed.ok, detail);
    }
    auto inner = verify_broadcast(g, parts.labels, parts.state, parts.trace, parts.go_mode, parts.deadline);
    rep.checks.insert(rep.checks.end(), inner.checks.begin(), inner.checks.end());
    return rep;
}

std::string csv_header() { return "family,n,D,Delta,protocol,rounds,bound,ratio,pass\n"; }

std::string sweep_csv(const std::vector<ExperimentConfig>& configs) {
    std::vector<std::pair<std::string, std::string>> rows(configs.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int i = 0; i < static_cast<int>(configs.size()); ++i) {
        const auto& cfg = configs[static_cast<std::size_t>(i)];
        auto art = run_experiment(cfg);
        std::ostringstream os;
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4f", art.ratio);
        os << cfg.graph << ',' << art.n << ',' << art.diameter << ',' << art.max_degree << ','
           << cfg.protocol << ',' << art.rounds << ',' << art.bound << ',' << buf << ','
           << (art.pass ? "1" : "0") << '\n';
        rows[static_cast<std::size_t>(i)] = {cfg.key(), os.str()};
    }
    std::sort(rows.begin(), rows.end());  // order-independent merge
    std::string out = csv_header();
    for (auto& [k, line] : rows) out += line;
    return out;
}

std::string LowerBoundReport::render() const {
    std::ostringstream os;
    os << "star-path hub leaves: " << distinct_s << " distinct s-values (delta = " << delta << ")\n"
       << "max gather label width: " << label_width << " bits >= ceil(log delta) = " << log_delta
       << "\n"
       << (pass ? "[pass]" : "[FAIL]") << " lower-bound demo\n";
    return os.str();
}

LowerBoundReport lower_bound_demo(int d, int delta) {
    LowerBoundReport out;
    out.delta = delta;
    GraphFamilySpec spec;
    spec.family = GraphFamilySpec::Family::star_path;
    spec.diameter = d;
    spec.delta = delta;
    Graph g = generate(spec);
    auto labels = assign_gather_labels(g, 0, BroadcastMode::fast, 1);

    // The hub's leaf children must take delta distinct s-values.
    Node hub = d - 1;
    std::set<int> values;
    for (Node leaf : labels.hrt.tree.children[hub])
        if (labels.hrt.tree.children[leaf].empty()) values.insert(labels.labels.gather[leaf].s);
    out.distinct_s = static_cast<int>(values.size());
    out.label_width = labels.labels.max_width();
    out.log_delta = ceil_log2(delta);
    out.pass = out.distinct_s == delta && out.label_width >= out.log_delta;
    return out;
}

}  // namespace radionet
