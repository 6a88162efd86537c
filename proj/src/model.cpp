#include "spinperc/model.hpp"

#include <set>
#include <stdexcept>
#include <string>

namespace spinperc {

SyncModel::SyncModel(Graph g, std::vector<EdgeChannel> ch)
    : graph(std::move(g)), channels(std::move(ch)) {
    if (channels.size() != graph.edges.size())
        throw std::invalid_argument("sync model: one channel per edge required");
}

SyncModel uniform_model(Graph g, const EdgeChannel& ch) {
    std::vector<EdgeChannel> channels(g.edges.size(), ch);
    return SyncModel(std::move(g), std::move(channels));
}

SyncModel with_virtual_vertex(const SyncModel& m, std::span<const int> targets) {
    if (targets.empty()) throw std::invalid_argument("virtual vertex: empty target set");
    std::set<int> seen;
    for (int v : targets) {
        if (v < 0 || v >= m.graph.n)
            throw std::invalid_argument("virtual vertex: target out of range");
        if (!seen.insert(v).second)
            throw std::invalid_argument("virtual vertex: duplicate target " + std::to_string(v));
    }
    int w = m.graph.n;
    auto edges = m.graph.edges;
    auto channels = m.channels;
    for (int v : seen) {
        edges.push_back({v, w});
        channels.push_back(EdgeChannel::bsc(0.0));
    }
    return SyncModel(Graph(w + 1, std::move(edges)), std::move(channels));
}

std::vector<double> channel_gammas(const SyncModel& m) {
    std::vector<double> gamma;
    gamma.reserve(m.channels.size());
    for (const auto& ch : m.channels) gamma.push_back(edge_chi2_info(ch));
    return gamma;
}

bool has_continuous_channel(const SyncModel& m) {
    for (const auto& ch : m.channels)
        if (ch.kind == ChannelKind::awgn) return true;
    return false;
}

} // namespace spinperc
