#pragma once

#include <span>
#include <vector>

#include "spinperc/channel.hpp"
#include "spinperc/graph.hpp"

namespace spinperc {

// A binary synchronization instance: uniform +-1 spins on the vertices,
// each edge observing the product of its endpoint spins through its channel.
struct SyncModel {
    Graph graph;
    std::vector<EdgeChannel> channels; // aligned with edge indices

    SyncModel() = default;
    SyncModel(Graph g, std::vector<EdgeChannel> ch);
};

SyncModel uniform_model(Graph g, const EdgeChannel& ch);

// Augmented model for set information: a virtual vertex n joined to every
// target by a noiseless edge. Original edge indices are preserved.
SyncModel with_virtual_vertex(const SyncModel& m, std::span<const int> targets);

// Per-edge chi-squared information, the percolation open probabilities
// coupled to the model.
std::vector<double> channel_gammas(const SyncModel& m);

bool has_continuous_channel(const SyncModel& m);

} // namespace spinperc
