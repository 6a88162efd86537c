#pragma once

#include <span>
#include <vector>

#include "spinperc/graph.hpp"
#include "spinperc/model.hpp"
#include "spinperc/types.hpp"

namespace spinperc {

// Bond percolation: each edge open independently with probability gamma_e.
struct PercolationSpec {
    Graph graph;
    std::vector<double> gamma;

    PercolationSpec() = default;
    PercolationSpec(Graph g, std::vector<double> gamma_);
};

// Open probabilities coupled to a synchronization model:
// gamma_e = edge_chi2_info(channel_e).
PercolationSpec percolation_from_model(const SyncModel& m);

// P(u ~ t) by enumerating all 2^m open/closed patterns (edges with
// gamma in {0,1} are resolved beforehand).
ProbResult exact_connection_prob(const PercolationSpec& spec, int u, std::span<const int> targets,
                                 const Budget& budget = {});

// Monte Carlo estimate; stderr is the binomial sqrt(p(1-p)/samples).
ProbResult mc_connection_prob(const PercolationSpec& spec, int u, std::span<const int> targets,
                              const McConfig& cfg);

// Union bound over self-avoiding u-v paths of at most max_len edges: the
// sum over paths of the product of edge gammas. May exceed 1, in which case
// the result is reported unclamped with the vacuous flag set.
ProbResult path_union_bound(const PercolationSpec& spec, int u, int v, int max_len,
                            const Budget& budget = {});

} // namespace spinperc
