#pragma once

#include <map>
#include <string>
#include <vector>

#include "radionet/gather.hpp"
#include "radionet/graph.hpp"
#include "radionet/labels.hpp"
#include "radionet/oracle.hpp"
#include "radionet/sim.hpp"

namespace radionet {

struct CheckResult {
    std::string name;   // lemma-level identifier
    bool pass = false;
    std::string detail;  // trace locator on failure, measurement otherwise
};

struct Report {
    std::vector<CheckResult> checks;
    std::map<std::string, std::string> metrics;

    bool all_pass() const;
    void add(const std::string& name, bool pass, const std::string& detail = "");
    std::string render() const;  // deterministic, no timestamps
};

// Trace-only soundness: every recorded reception has exactly one transmitting
// neighbor that round, with a matching digest.
void check_reception_soundness(Report& rep, const Graph& g, const Trace& trace);

// Full suite for an executor/fast/express run (labels + oracle state + trace).
Report verify_broadcast(const Graph& g, const LabelTable& labels, const OracleState& state,
                        const Trace& trace, GoMode go_mode, DeadlineMode deadline);

// Acknowledged-broadcast overlay: agreement on 2*t1, path-only Stop traffic,
// silence afterwards, and the t1 <= completion + |P| bound.
Report verify_acknowledged(const Graph& g, const LabelTable& labels, const OracleState& state,
                           const Trace& trace, const std::vector<long>& termination_rounds, long t1);

// Gather/gossip suite over the pipeline outputs.
Report verify_gossip(const Graph& g, Node sink, const GossipResult& res, bool gather_only);

}  // namespace radionet
