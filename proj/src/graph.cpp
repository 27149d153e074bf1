#include "radionet/graph.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <queue>
#include <random>
#include <sstream>

#include "radionet/util.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace radionet {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw parse_error(msg);
}

bool connected(const std::vector<std::vector<Node>>& adj) {
    const int n = static_cast<int>(adj.size());
    if (n == 0) return false;
    std::vector<char> seen(n, 0);
    std::queue<Node> q;
    q.push(0);
    seen[0] = 1;
    int count = 1;
    while (!q.empty()) {
        Node v = q.front();
        q.pop();
        for (Node u : adj[v])
            if (!seen[u]) {
                seen[u] = 1;
                ++count;
                q.push(u);
            }
    }
    return count == n;
}

}  // namespace

Graph Graph::from_edges(int n, const std::vector<std::pair<Node, Node>>& edges) {
    require(n >= 1, "graph must have at least one node");
    Graph g;
    g.adj_.assign(n, {});
    for (auto [u, v] : edges) {
        require(u >= 0 && u < n && v >= 0 && v < n, "edge endpoint out of range");
        require(u != v, "self-loop rejected");
        g.adj_[u].push_back(v);
        g.adj_[v].push_back(u);
    }
    for (auto& nb : g.adj_) {
        std::sort(nb.begin(), nb.end());
        require(std::adjacent_find(nb.begin(), nb.end()) == nb.end(), "parallel edge rejected");
    }
    require(connected(g.adj_), "graph is disconnected");
    g.edge_count_ = static_cast<int>(edges.size());
    // Dedup count in case callers pass duplicates both ways round.
    int m = 0;
    for (int v = 0; v < n; ++v) m += g.degree(v);
    g.edge_count_ = m / 2;
    return g;
}

int Graph::max_degree() const {
    int d = 0;
    for (int v = 0; v < node_count(); ++v) d = std::max(d, degree(v));
    return d;
}

bool Graph::has_edge(Node u, Node v) const {
    const auto& nb = adj_[u];
    return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<std::pair<Node, Node>> Graph::edges() const {
    std::vector<std::pair<Node, Node>> out;
    out.reserve(edge_count_);
    for (int u = 0; u < node_count(); ++u)
        for (Node v : adj_[u])
            if (u < v) out.emplace_back(u, v);
    return out;
}

namespace {

Graph make_path(int n) {
    std::vector<std::pair<Node, Node>> e;
    for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
    return Graph::from_edges(n, e);
}

Graph make_star(int n) {
    std::vector<std::pair<Node, Node>> e;
    for (int i = 1; i < n; ++i) e.emplace_back(0, i);
    return Graph::from_edges(n, e);
}

Graph make_cbt(int n) {
    std::vector<std::pair<Node, Node>> e;
    for (int i = 1; i < n; ++i) e.emplace_back((i - 1) / 2, i);
    return Graph::from_edges(n, e);
}

Graph make_grid(int rows, int cols) {
    require(rows >= 1 && cols >= 1, "grid needs rows,cols >= 1");
    std::vector<std::pair<Node, Node>> e;
    auto id = [cols](int r, int c) { return r * cols + c; };
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) e.emplace_back(id(r, c), id(r, c + 1));
            if (r + 1 < rows) e.emplace_back(id(r, c), id(r + 1, c));
        }
    return Graph::from_edges(rows * cols, e);
}

// Paper family: nodes v_1..v_{D+delta}; path v_1..v_D, delta leaves on v_D.
Graph make_star_path(int d, int delta) {
    require(d >= 1 && delta >= 1, "star-path needs D >= 1 and delta >= 1");
    const int n = d + delta;
    std::vector<std::pair<Node, Node>> e;
    for (int i = 0; i + 1 < d; ++i) e.emplace_back(i, i + 1);
    for (int j = d; j < n; ++j) e.emplace_back(d - 1, j);
    return Graph::from_edges(n, e);
}

Graph make_random_connected(int n, double p, std::uint64_t seed) {
    require(n >= 1, "random graph needs n >= 1");
    require(p > 0.0 && p <= 1.0, "random graph needs p in (0,1]");
    for (int attempt = 0; attempt < 100; ++attempt) {
        std::mt19937_64 rng(seed + static_cast<std::uint64_t>(attempt));
        std::bernoulli_distribution coin(p);
        std::vector<std::pair<Node, Node>> e;
        std::vector<std::vector<Node>> adj(n);
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (coin(rng)) {
                    e.emplace_back(u, v);
                    adj[u].push_back(v);
                    adj[v].push_back(u);
                }
        if (n == 1 || connected(adj)) return Graph::from_edges(n, e);
    }
    throw parse_error("random-connected: no connected sample after 100 seeds");
}

}  // namespace

Graph generate(const GraphFamilySpec& spec) {
    using F = GraphFamilySpec::Family;
    switch (spec.family) {
        case F::path: return make_path(spec.n);
        case F::star: return make_star(spec.n);
        case F::complete_binary_tree: return make_cbt(spec.n);
        case F::random_connected: return make_random_connected(spec.n, spec.p, spec.seed);
        case F::grid: return make_grid(spec.rows, spec.cols);
        case F::star_path: return make_star_path(spec.diameter, spec.delta);
    }
    throw parse_error("unknown graph family");
}

namespace {

long parse_long(std::string_view s, const std::string& what) {
    long out = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    require(ec == std::errc() && ptr == s.data() + s.size(), "bad integer for " + what);
    return out;
}

double parse_double(std::string_view s, const std::string& what) {
    try {
        std::size_t pos = 0;
        double v = std::stod(std::string(s), &pos);
        require(pos == s.size(), "bad number for " + what);
        return v;
    } catch (const std::exception&) {
        throw parse_error("bad number for " + what);
    }
}

}  // namespace

GraphFamilySpec GraphFamilySpec::parse(std::string_view text) {
    GraphFamilySpec spec;
    auto colon = text.find(':');
    std::string_view name = text.substr(0, colon);
    using F = Family;
    if (name == "path")
        spec.family = F::path;
    else if (name == "star")
        spec.family = F::star;
    else if (name == "cbt" || name == "complete-binary-tree")
        spec.family = F::complete_binary_tree;
    else if (name == "random" || name == "random-connected")
        spec.family = F::random_connected;
    else if (name == "grid")
        spec.family = F::grid;
    else if (name == "star-path")
        spec.family = F::star_path;
    else
        throw parse_error("unknown graph family '" + std::string(name) + "'");

    std::string_view rest = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
    while (!rest.empty()) {
        auto comma = rest.find(',');
        std::string_view item = rest.substr(0, comma);
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        auto eq = item.find('=');
        require(eq != std::string_view::npos, "expected key=value in graph spec");
        std::string_view key = item.substr(0, eq);
        std::string_view val = item.substr(eq + 1);
        if (key == "n")
            spec.n = static_cast<int>(parse_long(val, "n"));
        else if (key == "p")
            spec.p = parse_double(val, "p");
        else if (key == "rows")
            spec.rows = static_cast<int>(parse_long(val, "rows"));
        else if (key == "cols")
            spec.cols = static_cast<int>(parse_long(val, "cols"));
        else if (key == "D" || key == "d")
            spec.diameter = static_cast<int>(parse_long(val, "D"));
        else if (key == "delta")
            spec.delta = static_cast<int>(parse_long(val, "delta"));
        else if (key == "seed")
            spec.seed = static_cast<std::uint64_t>(parse_long(val, "seed"));
        else
            throw parse_error("unknown graph spec key '" + std::string(key) + "'");
    }
    return spec;
}

std::string GraphFamilySpec::to_string() const {
    using F = Family;
    std::ostringstream os;
    switch (family) {
        case F::path: os << "path:n=" << n; break;
        case F::star: os << "star:n=" << n; break;
        case F::complete_binary_tree: os << "cbt:n=" << n; break;
        case F::random_connected: os << "random:n=" << n << ",p=" << p << ",seed=" << seed; break;
        case F::grid: os << "grid:rows=" << rows << ",cols=" << cols; break;
        case F::star_path: os << "star-path:D=" << diameter << ",delta=" << delta; break;
    }
    return os.str();
}

Graph load_graph(std::istream& in) {
    std::string line;
    int lineno = 0;
    auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++lineno;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty()) return true;
        }
        return false;
    };
    require(next_line(), "empty graph file");
    std::istringstream head(line);
    long n = -1, m = -1;
    require(static_cast<bool>(head >> n >> m), "line " + std::to_string(lineno) + ": expected 'n m' header");
    require(n >= 1 && m >= 0, "line " + std::to_string(lineno) + ": bad header values");
    std::vector<std::pair<Node, Node>> edges;
    edges.reserve(static_cast<std::size_t>(m));
    for (long i = 0; i < m; ++i) {
        require(next_line(), "unexpected end of file: expected " + std::to_string(m) + " edges");
        std::istringstream es(line);
        long u = -1, v = -1;
        require(static_cast<bool>(es >> u >> v), "line " + std::to_string(lineno) + ": expected 'u v'");
        require(u >= 0 && u < n && v >= 0 && v < n, "line " + std::to_string(lineno) + ": endpoint out of range");
        require(u != v, "line " + std::to_string(lineno) + ": self-loop");
        edges.emplace_back(static_cast<Node>(u), static_cast<Node>(v));
    }
    try {
        return Graph::from_edges(static_cast<int>(n), edges);
    } catch (const parse_error& e) {
        throw parse_error(std::string("graph rejected: ") + e.what());
    }
}

Graph load_graph_string(const std::string& text) {
    std::istringstream in(text);
    return load_graph(in);
}

void save_graph(const Graph& g, std::ostream& out) {
    auto es = g.edges();
    out << g.node_count() << ' ' << es.size() << '\n';
    for (auto [u, v] : es) out << u << ' ' << v << '\n';
}

std::string save_graph_string(const Graph& g) {
    std::ostringstream os;
    save_graph(g, os);
    return os.str();
}

std::vector<int> bfs_levels(const Graph& g, Node root) {
    std::vector<int> level(g.node_count(), -1);
    std::queue<Node> q;
    level[root] = 0;
    q.push(root);
    while (!q.empty()) {
        Node v = q.front();
        q.pop();
        for (Node u : g.neighbors(v))
            if (level[u] < 0) {
                level[u] = level[v] + 1;
                q.push(u);
            }
    }
    return level;
}

int eccentricity(const Graph& g, Node root) {
    auto lv = bfs_levels(g, root);
    int e = 0;
    for (int d : lv) e = std::max(e, d);
    return e;
}

std::vector<int> all_eccentricities_serial(const Graph& g) {
    std::vector<int> ecc(g.node_count());
    for (int v = 0; v < g.node_count(); ++v) ecc[v] = eccentricity(g, v);
    return ecc;
}

std::vector<int> all_eccentricities(const Graph& g) {
    const int n = g.node_count();
    std::vector<int> ecc(n);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16)
#endif
    for (int v = 0; v < n; ++v) ecc[v] = eccentricity(g, v);
    return ecc;
}

int diameter_exact(const Graph& g) {
    auto ecc = all_eccentricities(g);
    int d = 0;
    for (int e : ecc) d = std::max(d, e);
    return d;
}

GraphStats graph_stats(const Graph& g, Node root) {
    GraphStats s;
    s.n = g.node_count();
    s.max_degree = g.max_degree();
    s.ecc_root = eccentricity(g, root);
    s.diameter = diameter_exact(g);
    return s;
}

}  // namespace radionet
