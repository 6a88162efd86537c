#include "spinperc/specs.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace spinperc {
namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = s.find(sep, start);
        if (pos == std::string::npos) {
            parts.push_back(s.substr(start));
            break;
        }
        parts.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return parts;
}

std::int64_t parse_int_token(const std::string& t, const std::string& what) {
    try {
        std::size_t used = 0;
        long long v = std::stoll(t, &used);
        if (used != t.size()) throw std::invalid_argument(t);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(what + ": bad integer token \"" + t + "\"");
    }
}

double parse_double_token(const std::string& t, const std::string& what) {
    try {
        std::size_t used = 0;
        double v = std::stod(t, &used);
        if (used != t.size()) throw std::invalid_argument(t);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(what + ": bad numeric token \"" + t + "\"");
    }
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

} // namespace

GraphSpec GraphSpec::parse(const std::string& text) {
    auto parts = split(text, ':');
    const std::string what = "graph spec \"" + text + "\"";
    GraphSpec spec;
    if (parts.empty()) throw std::invalid_argument(what);
    const std::string& name = parts[0];
    if (name == "path" || name == "complete") {
        if (parts.size() != 2) throw std::invalid_argument(what + ": expected " + name + ":N");
        spec.family = name == "path" ? Family::path : Family::complete;
        spec.a = parse_int_token(parts[1], what);
    } else if (name == "grid") {
        if (parts.size() != 2) throw std::invalid_argument(what + ": expected grid:WxH");
        auto dims = split(parts[1], 'x');
        if (dims.size() != 2) throw std::invalid_argument(what + ": expected grid:WxH");
        spec.family = Family::grid;
        spec.a = parse_int_token(dims[0], what);
        spec.b = parse_int_token(dims[1], what);
    } else if (name == "er") {
        if (parts.size() != 4) throw std::invalid_argument(what + ": expected er:N:C:SEED");
        spec.family = Family::er;
        spec.a = parse_int_token(parts[1], what);
        spec.c = parse_double_token(parts[2], what);
        spec.seed = static_cast<std::uint64_t>(parse_int_token(parts[3], what));
    } else if (name == "tree") {
        if (parts.size() != 3) throw std::invalid_argument(what + ": expected tree:B:D");
        spec.family = Family::tree;
        spec.a = parse_int_token(parts[1], what);
        spec.b = parse_int_token(parts[2], what);
    } else {
        throw std::invalid_argument(what + ": unknown family \"" + name + "\"");
    }
    return spec;
}

std::string GraphSpec::to_string() const {
    std::ostringstream os;
    switch (family) {
        case Family::path: os << "path:" << a; break;
        case Family::complete: os << "complete:" << a; break;
        case Family::grid: os << "grid:" << a << 'x' << b; break;
        case Family::er: os << "er:" << a << ':' << c << ':' << seed; break;
        case Family::tree: os << "tree:" << a << ':' << b; break;
    }
    return os.str();
}

Graph GraphSpec::build() const {
    switch (family) {
        case Family::path: return make_path(static_cast<int>(a));
        case Family::complete: return make_complete(static_cast<int>(a));
        case Family::grid: return make_grid_box(static_cast<int>(a), static_cast<int>(b));
        case Family::er: return make_er(static_cast<int>(a), c, seed);
        case Family::tree: return make_regular_tree(static_cast<int>(a), static_cast<int>(b)).graph;
    }
    throw std::logic_error("unreachable");
}

double GraphSpec::effective_branching() const {
    switch (family) {
        case Family::path: return 1.0;
        case Family::complete: return static_cast<double>(a);
        case Family::grid: return 2.0;
        case Family::er: return c;
        case Family::tree: return static_cast<double>(a);
    }
    throw std::logic_error("unreachable");
}

std::vector<EdgeChannel> parse_channel_lines(std::istream& in, const Graph& g) {
    std::vector<EdgeChannel> channels(g.edges.size(), EdgeChannel::bsc(0.0));
    std::vector<char> covered(g.edges.size(), 0);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::istringstream ls(t);
        int u = 0, v = 0;
        std::string spec;
        if (!(ls >> u >> v >> spec))
            throw std::invalid_argument("channel file line " + std::to_string(lineno) +
                                        ": expected \"u v spec\"");
        int e = g.edge_index(u, v);
        if (e < 0)
            throw std::invalid_argument("channel file line " + std::to_string(lineno) + ": edge (" +
                                        std::to_string(u) + "," + std::to_string(v) +
                                        ") not in graph");
        if (covered[e])
            throw std::invalid_argument("channel file line " + std::to_string(lineno) +
                                        ": duplicate edge (" + std::to_string(u) + "," +
                                        std::to_string(v) + ")");
        channels[e] = parse_channel_spec(spec);
        covered[e] = 1;
    }
    for (std::size_t e = 0; e < covered.size(); ++e)
        if (!covered[e])
            throw std::invalid_argument("channel file: missing edge (" +
                                        std::to_string(g.edges[e].first) + "," +
                                        std::to_string(g.edges[e].second) + ")");
    return channels;
}

std::vector<EdgeChannel> parse_channel_file(const std::string& path, const Graph& g) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("channel file: cannot open \"" + path + "\"");
    return parse_channel_lines(in, g);
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    for (const auto& t : split(text, ','))
        out.push_back(parse_double_token(trim(t), "list \"" + text + "\""));
    return out;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    for (const auto& t : split(text, ','))
        out.push_back(static_cast<int>(parse_int_token(trim(t), "list \"" + text + "\"")));
    return out;
}

std::vector<double> parse_gamma_arg(const std::string& text, std::size_t edge_count) {
    auto values = parse_double_list(text);
    if (values.size() == 1) return std::vector<double>(edge_count, values[0]);
    if (values.size() != edge_count)
        throw std::invalid_argument("gamma: expected 1 or " + std::to_string(edge_count) +
                                    " values, got " + std::to_string(values.size()));
    return values;
}

} // namespace spinperc
