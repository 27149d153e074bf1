#pragma once

#include <optional>
#include <string>
#include <vector>

#include "radionet/graph.hpp"

namespace radionet {

// BFS spanning tree; parent[root] == -1, level holds graph distances.
struct RootedTree {
    Node root = 0;
    std::vector<Node> parent;
    std::vector<int> level;
    std::vector<std::vector<Node>> children;

    int max_level() const;
    void rebuild_children();
};

struct TwoHeightMap {
    std::vector<int> h2;

    bool fast_edge(const RootedTree& t, Node v) const {  // edge (p(v), v)
        return t.parent[v] >= 0 && h2[v] == h2[t.parent[v]];
    }
    int max_h2() const;
};

// Deterministic parent rule: lowest-id neighbor on the previous level.
RootedTree bfs_tree(const Graph& g, Node root);

TwoHeightMap compute_two_heights(const RootedTree& t);

// (*) violation at level l: u != u' with h2(u)=h2(u')=h2(p(u))=h2(p(u')) and a
// common neighbor v one level up. Type a: v is a parent of one of them (roles
// normalized so that v == p(u_prime) and u is the node to reparent).
struct Violation {
    enum class Type { a, b };
    Type type;
    Node u;
    Node u_prime;
    Node v;
};

std::optional<Violation> find_violation(const Graph& g, const RootedTree& t, const TwoHeightMap& h, int l);

// Applies the elimination step and incrementally refreshes h2 on affected
// ancestors. Levels are untouched (v sits one level above u by construction).
void fix_violation(const Graph& g, RootedTree& t, TwoHeightMap& h, const Violation& viol);

// Sum of h2 over fast-edge nodes at level l (the paper's S_G(T,l)).
long potential(const Graph& g, const RootedTree& t, const TwoHeightMap& h, int l);

// Exhaustive (*) check over all levels; empty result iff the tree is a 2-HRT.
std::vector<Violation> check_star_property(const Graph& g, const RootedTree& t, const TwoHeightMap& h);
std::vector<Violation> check_star_property_serial(const Graph& g, const RootedTree& t, const TwoHeightMap& h);

struct Hrt {
    RootedTree tree;
    TwoHeightMap heights;
};

// Violation elimination level by level, largest level first.
Hrt build_2hrt(const Graph& g, Node root);

struct FastTrackDecomposition {
    std::vector<std::vector<Node>> tracks;  // root-to-v path split into maximal fast runs
    int slow_edges = 0;
};
FastTrackDecomposition fast_track_decomposition(const RootedTree& t, const TwoHeightMap& h, Node v);

// Debug dump: one line "v parent level h2 edgeclass" per node.
std::string dump_tree(const RootedTree& t, const TwoHeightMap& h);

}  // namespace radionet
