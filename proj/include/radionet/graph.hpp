#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace radionet {

using Node = int;

// Simple undirected connected graph with sorted per-node neighbor lists.
// Construction validates simplicity, symmetry and connectivity.
class Graph {
public:
    Graph() = default;
    static Graph from_edges(int n, const std::vector<std::pair<Node, Node>>& edges);

    int node_count() const { return static_cast<int>(adj_.size()); }
    int edge_count() const { return edge_count_; }
    std::span<const Node> neighbors(Node v) const { return adj_[v]; }
    int degree(Node v) const { return static_cast<int>(adj_[v].size()); }
    int max_degree() const;
    bool has_edge(Node u, Node v) const;
    std::vector<std::pair<Node, Node>> edges() const;  // canonical (u < v, sorted)

private:
    std::vector<std::vector<Node>> adj_;
    int edge_count_ = 0;
};

struct GraphFamilySpec {
    enum class Family { path, star, complete_binary_tree, random_connected, grid, star_path };
    Family family = Family::path;
    int n = 0;                    // path / star / cbt / random
    double p = 0.0;               // random
    int rows = 0, cols = 0;       // grid
    int diameter = 0, delta = 0;  // star-path D, delta
    std::uint64_t seed = 0;

    // Parses CLI strings like "star-path:D=3,delta=4" or "random:n=50,p=0.1,seed=7".
    static GraphFamilySpec parse(std::string_view text);
    std::string to_string() const;
};

Graph generate(const GraphFamilySpec& spec);

struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Text format: "n m" header, then m lines "u v", 0-indexed.
Graph load_graph(std::istream& in);
Graph load_graph_string(const std::string& text);
void save_graph(const Graph& g, std::ostream& out);
std::string save_graph_string(const Graph& g);

// BFS distances from root; all reachable by construction.
std::vector<int> bfs_levels(const Graph& g, Node root);
int eccentricity(const Graph& g, Node root);

struct GraphStats {
    int n;
    int max_degree;
    int ecc_root;
    int diameter;  // exact, all-pairs BFS
};
GraphStats graph_stats(const Graph& g, Node root);

// All-pairs eccentricities; the OpenMP kernel and its serial reference.
std::vector<int> all_eccentricities(const Graph& g);
std::vector<int> all_eccentricities_serial(const Graph& g);
int diameter_exact(const Graph& g);

}  // namespace radionet
