#include "spinperc/graph.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include "spinperc/rng.hpp"

namespace spinperc {

Graph::Graph(int n_, std::vector<std::pair<int, int>> edges_)
    : n(n_), edges(std::move(edges_)) {
    if (n < 0) throw std::invalid_argument("graph: negative vertex count");
    std::set<std::pair<int, int>> seen;
    for (const auto& [u, v] : edges) {
        if (u == v) throw std::invalid_argument("graph: self-loop at vertex " + std::to_string(u));
        if (u > v) throw std::invalid_argument("graph: edge endpoints must satisfy u < v");
        if (u < 0 || v >= n) throw std::invalid_argument("graph: edge endpoint out of range");
        if (!seen.insert({u, v}).second)
            throw std::invalid_argument("graph: duplicate edge (" + std::to_string(u) + "," +
                                        std::to_string(v) + ")");
    }
}

int Graph::edge_index(int a, int b) const {
    if (a > b) std::swap(a, b);
    for (std::size_t i = 0; i < edges.size(); ++i)
        if (edges[i].first == a && edges[i].second == b) return static_cast<int>(i);
    return -1;
}

std::vector<std::vector<std::pair<int, int>>> adjacency_list(const Graph& g) {
    std::vector<std::vector<std::pair<int, int>>> adj(g.n);
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        auto [u, v] = g.edges[e];
        adj[u].push_back({v, static_cast<int>(e)});
        adj[v].push_back({u, static_cast<int>(e)});
    }
    for (auto& lst : adj) std::sort(lst.begin(), lst.end());
    return adj;
}

Graph make_path(int n) {
    if (n < 1) throw std::invalid_argument("make_path: n must be >= 1");
    std::vector<std::pair<int, int>> edges;
    edges.reserve(n - 1);
    for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
    return Graph(n, std::move(edges));
}

Graph make_complete(int n) {
    if (n < 1) throw std::invalid_argument("make_complete: n must be >= 1");
    std::vector<std::pair<int, int>> edges;
    edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges.push_back({i, j});
    return Graph(n, std::move(edges));
}

int grid_vertex(int i, int j, int h) { return i * h + j; }

Graph make_grid_box(int w, int h) {
    if (w < 1 || h < 1) throw std::invalid_argument("make_grid_box: dimensions must be >= 1");
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < w; ++i) {
        for (int j = 0; j < h; ++j) {
            int a = grid_vertex(i, j, h);
            if (j + 1 < h) edges.push_back({a, grid_vertex(i, j + 1, h)});
            if (i + 1 < w) edges.push_back({a, grid_vertex(i + 1, j, h)});
        }
    }
    std::sort(edges.begin(), edges.end());
    return Graph(w * h, std::move(edges));
}

bool er_pair_open(int n, double c, std::uint64_t seed, int i, int j) {
    if (i > j) std::swap(i, j);
    std::uint64_t h = hash_combine(seed, static_cast<std::uint64_t>(n));
    h = hash_combine(h, static_cast<std::uint64_t>(i));
    h = hash_combine(h, static_cast<std::uint64_t>(j));
    return to_unit(h) < c / static_cast<double>(n);
}

Graph make_er(int n, double c, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("make_er: n must be >= 1");
    if (c < 0.0 || c > static_cast<double>(n))
        throw std::invalid_argument("make_er: need 0 <= c <= n (edge probability c/n)");
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (er_pair_open(n, c, seed, i, j)) edges.push_back({i, j});
    return Graph(n, std::move(edges));
}

RegularTree make_regular_tree(int branching, int depth) {
    if (branching < 1) throw std::invalid_argument("make_regular_tree: branching must be >= 1");
    if (depth < 0) throw std::invalid_argument("make_regular_tree: depth must be >= 0");

    RegularTree t;
    t.branching = branching;
    t.depth = depth;
    t.level_begin.assign(depth + 2, 0);
    std::uint64_t total = 1, level = 1;
    for (int d = 0; d <= depth; ++d) {
        t.level_begin[d + 1] = static_cast<int>(total);
        if (d == depth) break;
        if (level > (std::uint64_t{1} << 40) / branching)
            throw std::invalid_argument("make_regular_tree: tree size overflows");
        level *= branching;
        total += level;
        if (total > (std::uint64_t{1} << 30))
            throw std::invalid_argument("make_regular_tree: tree size overflows");
    }

    int n = static_cast<int>(total);
    std::vector<std::pair<int, int>> edges;
    edges.reserve(n - 1);
    for (int d = 0; d < depth; ++d) {
        int first = t.level_begin[d], last = t.level_begin[d + 1];
        int child = t.level_begin[d + 1];
        for (int p = first; p < last; ++p)
            for (int k = 0; k < branching; ++k) edges.push_back({p, child++});
    }
    t.graph = Graph(n, std::move(edges));
    return t;
}

std::vector<int> RegularTree::level(int t) const {
    if (t < 0 || t > depth) throw std::invalid_argument("RegularTree::level: depth out of range");
    std::vector<int> out;
    for (int v = level_begin[t]; v < level_begin[t + 1]; ++v) out.push_back(v);
    return out;
}

std::vector<VertexPath> self_avoiding_paths(const Graph& g, int u, int v, int max_len) {
    if (u < 0 || u >= g.n || v < 0 || v >= g.n)
        throw std::invalid_argument("self_avoiding_paths: vertex out of range");
    if (u == v) throw std::invalid_argument("self_avoiding_paths: endpoints must differ");
    if (max_len < 1) throw std::invalid_argument("self_avoiding_paths: max_len must be >= 1");

    auto adj = adjacency_list(g);
    std::vector<VertexPath> out;
    std::vector<char> used(g.n, 0);
    VertexPath cur{u};
    used[u] = 1;

    // Neighbors are visited in ascending order, so the output is
    // lexicographic by vertex sequence.
    auto dfs = [&](auto&& self, int at) -> void {
        if (static_cast<int>(cur.size()) - 1 >= max_len) return;
        for (auto [nbr, e] : adj[at]) {
            (void)e;
            if (nbr == v) {
                cur.push_back(v);
                out.push_back(cur);
                cur.pop_back();
                continue;
            }
            if (used[nbr]) continue;
            used[nbr] = 1;
            cur.push_back(nbr);
            self(self, nbr);
            cur.pop_back();
            used[nbr] = 0;
        }
    };
    dfs(dfs, u);
    return out;
}

void DisjointSets::reset(int n) {
    parent_.resize(n);
    rank_.assign(n, 0);
    for (int i = 0; i < n; ++i) parent_[i] = i;
}

int DisjointSets::find(int a) {
    while (parent_[a] != a) {
        parent_[a] = parent_[parent_[a]];
        a = parent_[a];
    }
    return a;
}

void DisjointSets::unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
}

bool connected_under(const Graph& g, std::span<const char> open, int u,
                     std::span<const int> v_set) {
    if (open.size() != g.edges.size())
        throw std::invalid_argument("connected_under: one flag per edge required");
    if (v_set.empty()) throw std::invalid_argument("connected_under: empty target set");
    DisjointSets ds(g.n);
    for (std::size_t e = 0; e < g.edges.size(); ++e)
        if (open[e]) ds.unite(g.edges[e].first, g.edges[e].second);
    int ru = ds.find(u);
    for (int v : v_set)
        if (ds.find(v) == ru) return true;
    return false;
}

Graph parse_edge_list(std::istream& in) {
    std::string line;
    auto next_data_line = [&](std::string& out) -> bool {
        while (std::getline(in, line)) {
            std::size_t pos = line.find_first_not_of(" \t\r");
            if (pos == std::string::npos) continue;
            if (line[pos] == '#') continue;
            out = line;
            return true;
        }
        return false;
    };

    std::string header;
    if (!next_data_line(header)) throw std::invalid_argument("edge list: missing header line");
    std::istringstream hs(header);
    int n = 0;
    std::size_t m = 0;
    if (!(hs >> n >> m)) throw std::invalid_argument("edge list: header must be \"n m\"");

    std::vector<std::pair<int, int>> edges;
    edges.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        std::string data;
        if (!next_data_line(data))
            throw std::invalid_argument("edge list: expected " + std::to_string(m) + " edges, got " +
                                        std::to_string(i));
        std::istringstream es(data);
        int u = 0, v = 0;
        if (!(es >> u >> v)) throw std::invalid_argument("edge list: bad edge line \"" + data + "\"");
        edges.push_back({u, v});
    }
    return Graph(n, std::move(edges));
}

void write_edge_list(std::ostream& out, const Graph& g) {
    out << g.n << ' ' << g.edges.size() << '\n';
    for (const auto& [u, v] : g.edges) out << u << ' ' << v << '\n';
}

} // namespace spinperc
