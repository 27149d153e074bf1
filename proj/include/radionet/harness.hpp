#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "radionet/gather.hpp"
#include "radionet/graph.hpp"
#include "radionet/verify.hpp"

namespace radionet {

struct ExperimentConfig {
    std::string graph;  // family spec string, e.g. "star-path:D=3,delta=4"
    std::string protocol = "fast";  // executor-constructive | fast | express | gather | gossip
    Node source = 0;
    std::uint64_t seed = 1;
    int express_c = 60;
    int retry_budget = 50;
    std::string dissem = "oracle-injected-d";  // or "stub-size-learning"

    std::string key() const;  // deterministic sort key for sweep merges
};

struct RunArtifacts {
    Report report;
    std::string graph_text;
    std::string labels_text;
    std::string trace_text;
    std::string meta_json;

    // CSV row material
    int n = 0, diameter = 0, max_degree = 0;
    long rounds = 0;
    long bound = 0;  // protocol model value (denominator of the fit)
    double ratio = 0.0;
    bool pass = false;
};

// Oracle -> simulate -> verify, end to end for one config.
RunArtifacts run_experiment(const ExperimentConfig& cfg);

// Re-checks stored artifacts: labels must regenerate from the meta, the trace
// must replay bit-identically, and the invariant suite must pass.
Report verify_stored(const std::string& graph_text, const std::string& labels_text,
                     const std::string& trace_text, const std::string& meta_json);

// CSV columns: family,n,D,Delta,protocol,rounds,bound,ratio,pass.
std::string sweep_csv(const std::vector<ExperimentConfig>& configs);
std::string csv_header();

struct LowerBoundReport {
    int delta = 0;
    int distinct_s = 0;
    int label_width = 0;
    int log_delta = 0;
    bool pass = false;
    std::string render() const;
};
LowerBoundReport lower_bound_demo(int d, int delta);

}  // namespace radionet
