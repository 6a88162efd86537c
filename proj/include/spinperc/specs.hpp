#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spinperc/channel.hpp"
#include "spinperc/graph.hpp"

namespace spinperc {

// Graph generator grammar: "path:N", "complete:N", "grid:WxH",
// "er:N:C:SEED", "tree:B:D". Parsed specs round-trip through to_string().
struct GraphSpec {
    enum class Family { path, complete, grid, er, tree };
    Family family = Family::path;
    std::int64_t a = 0;       // n, w, or b
    std::int64_t b = 0;       // h or depth
    double c = 0.0;           // ER mean degree
    std::uint64_t seed = 0;   // ER seed

    static GraphSpec parse(const std::string& text);
    std::string to_string() const;
    Graph build() const;
    // Percolation branching threshold of the family (p_c = 1/B): 1 for
    // paths, b for trees, 2 for the square grid, c for ER, n for K_n.
    double effective_branching() const;
};

// Per-edge channel file: one "u v spec" line per edge of the graph,
// '#' comments allowed. Every edge must be covered exactly once.
std::vector<EdgeChannel> parse_channel_file(const std::string& path, const Graph& g);
std::vector<EdgeChannel> parse_channel_lines(std::istream& in, const Graph& g);

// "0.5" (uniform) or a comma-separated list matching the edge count.
std::vector<double> parse_gamma_arg(const std::string& text, std::size_t edge_count);

// "1,2,5" -> {1,2,5}
std::vector<double> parse_double_list(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);

} // namespace spinperc
