#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace spinperc {

// Finite undirected graph. Vertices are 0..n-1; edges are stored as (u,v)
// pairs with u < v, and edge indices are positions in the list.
struct Graph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;

    Graph() = default;
    Graph(int n_, std::vector<std::pair<int, int>> edges_);

    std::size_t edge_count() const { return edges.size(); }
    // Index of the edge joining a and b, or -1.
    int edge_index(int a, int b) const;
};

// A self-avoiding walk: distinct vertices, consecutive pairs adjacent.
using VertexPath = std::vector<int>;

// Per-vertex neighbor list as (neighbor, edge index), sorted by neighbor.
std::vector<std::vector<std::pair<int, int>>> adjacency_list(const Graph& g);

Graph make_path(int n);
Graph make_complete(int n);

// w x h box of the square lattice; vertex (i,j) has index i*h + j.
Graph make_grid_box(int w, int h);
int grid_vertex(int i, int j, int h);

// G(n, c/n) with pair-keyed pseudo-randomness: the indicator of pair (i,j)
// depends only on (n, c, seed, i, j), so graphs are reproducible and
// independent of iteration order.
Graph make_er(int n, double c, std::uint64_t seed);
bool er_pair_open(int n, double c, std::uint64_t seed, int i, int j);

// Rooted b-ary tree of depth `depth` in breadth-first vertex order
// (root is vertex 0). `level_begin[t]` is the first vertex index at depth t.
struct RegularTree {
    Graph graph;
    int branching = 1;
    int depth = 0;
    std::vector<int> level_begin; // size depth + 2

    std::vector<int> level(int t) const;
    std::vector<int> leaves() const { return level(depth); }
};

RegularTree make_regular_tree(int branching, int depth);

// All simple paths from u to v with at most max_len edges, in lexicographic
// order of the vertex sequence. Empty if u and v are disconnected.
std::vector<VertexPath> self_avoiding_paths(const Graph& g, int u, int v, int max_len);

// Plain disjoint-set forest.
class DisjointSets {
public:
    explicit DisjointSets(int n) { reset(n); }
    void reset(int n);
    int find(int a);
    void unite(int a, int b);

private:
    std::vector<int> parent_;
    std::vector<int> rank_;
};

// True iff some vertex of v_set lies in the component of u spanned by the
// edges whose flag is set.
bool connected_under(const Graph& g, std::span<const char> open, int u,
                     std::span<const int> v_set);

// Edge-list text format: first line "n m", then one "u v" line per edge.
// Lines starting with '#' are comments. Serialization of a parsed graph is
// byte-identical to the input modulo comments.
Graph parse_edge_list(std::istream& in);
void write_edge_list(std::ostream& out, const Graph& g);

} // namespace spinperc
