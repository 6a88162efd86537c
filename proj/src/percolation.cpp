#include "spinperc/percolation.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>

#include "spinperc/rng.hpp"

namespace spinperc {
namespace {

struct Kahan {
    double s = 0.0, c = 0.0;
    void add(double x) {
        double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    double value() const { return s + c; }
};

void check_targets(const Graph& g, int u, std::span<const int> targets) {
    if (u < 0 || u >= g.n) throw std::invalid_argument("percolation: source vertex out of range");
    if (targets.empty()) throw std::invalid_argument("percolation: empty target set");
    for (int t : targets)
        if (t < 0 || t >= g.n)
            throw std::invalid_argument("percolation: target vertex out of range");
}

} // namespace

PercolationSpec::PercolationSpec(Graph g, std::vector<double> gamma_)
    : graph(std::move(g)), gamma(std::move(gamma_)) {
    if (gamma.size() != graph.edges.size())
        throw std::invalid_argument("percolation: one open probability per edge required");
    for (double p : gamma)
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("percolation: open probabilities must be in [0,1]");
}

PercolationSpec percolation_from_model(const SyncModel& m) {
    return PercolationSpec(m.graph, channel_gammas(m));
}

ProbResult exact_connection_prob(const PercolationSpec& spec, int u, std::span<const int> targets,
                                 const Budget& budget) {
    const Graph& g = spec.graph;
    check_targets(g, u, targets);

    // Resolve deterministic edges, enumerate the rest.
    std::vector<int> random_edges;
    std::vector<int> forced_open;
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        if (spec.gamma[e] >= 1.0)
            forced_open.push_back(static_cast<int>(e));
        else if (spec.gamma[e] > 0.0)
            random_edges.push_back(static_cast<int>(e));
    }
    int m = static_cast<int>(random_edges.size());
    if (m > budget.perc_edges)
        throw BudgetExceeded("exact percolation over 2^" + std::to_string(m) +
                             " edge patterns exceeds the configured cap");

    DisjointSets ds(g.n);
    Kahan acc;
    const std::uint64_t total = std::uint64_t{1} << m;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        double p = 1.0;
        for (int i = 0; i < m; ++i) {
            double ge = spec.gamma[random_edges[i]];
            p *= (mask >> i & 1) ? ge : 1.0 - ge;
        }
        ds.reset(g.n);
        for (int e : forced_open) ds.unite(g.edges[e].first, g.edges[e].second);
        for (int i = 0; i < m; ++i)
            if (mask >> i & 1) {
                int e = random_edges[i];
                ds.unite(g.edges[e].first, g.edges[e].second);
            }
        int ru = ds.find(u);
        for (int t : targets)
            if (ds.find(t) == ru) {
                acc.add(p);
                break;
            }
    }

    ProbResult r;
    r.value = acc.value();
    r.method = Method::exact;
    return r;
}

ProbResult mc_connection_prob(const PercolationSpec& spec, int u, std::span<const int> targets,
                              const McConfig& cfg) {
    const Graph& g = spec.graph;
    check_targets(g, u, targets);
    if (cfg.samples < 1) throw std::invalid_argument("mc: samples must be >= 1");
    if (cfg.workers < 1) throw std::invalid_argument("mc: workers must be >= 1");

    const int workers = static_cast<int>(std::min<std::uint64_t>(cfg.workers, cfg.samples));
    std::vector<std::uint64_t> hits(workers, 0);
    std::uint64_t base = cfg.samples / workers, rem = cfg.samples % workers;

    auto run_block = [&](int b, std::uint64_t count) {
        std::mt19937_64 rng(substream_seed(cfg.seed, static_cast<std::uint64_t>(b)));
        std::uniform_real_distribution<double> coin(0.0, 1.0);
        DisjointSets ds(g.n);
        std::uint64_t k = 0;
        for (std::uint64_t i = 0; i < count; ++i) {
            ds.reset(g.n);
            for (std::size_t e = 0; e < g.edges.size(); ++e)
                if (coin(rng) < spec.gamma[e]) ds.unite(g.edges[e].first, g.edges[e].second);
            int ru = ds.find(u);
            for (int t : targets)
                if (ds.find(t) == ru) {
                    ++k;
                    break;
                }
        }
        hits[b] = k;
    };

    if (workers == 1) {
        run_block(0, cfg.samples);
    } else {
        std::vector<std::thread> pool;
        for (int b = 0; b < workers; ++b)
            pool.emplace_back(run_block, b, base + (static_cast<std::uint64_t>(b) < rem ? 1 : 0));
        for (auto& t : pool) t.join();
    }

    std::uint64_t k = 0;
    for (auto h : hits) k += h;
    double phat = static_cast<double>(k) / static_cast<double>(cfg.samples);

    ProbResult r;
    r.value = phat;
    r.method = Method::monte_carlo;
    r.samples = cfg.samples;
    r.std_error = std::sqrt(phat * (1.0 - phat) / static_cast<double>(cfg.samples));
    return r;
}

ProbResult path_union_bound(const PercolationSpec& spec, int u, int v, int max_len,
                            const Budget& budget) {
    const Graph& g = spec.graph;
    if (u < 0 || u >= g.n || v < 0 || v >= g.n)
        throw std::invalid_argument("path_union_bound: vertex out of range");
    if (u == v) throw std::invalid_argument("path_union_bound: endpoints must differ");
    if (max_len < 1) throw std::invalid_argument("path_union_bound: max_len must be >= 1");

    // Same traversal order as self_avoiding_paths, but products are
    // accumulated in place and the walk count is capped.
    auto adj = adjacency_list(g);
    std::vector<char> used(g.n, 0);
    used[u] = 1;
    Kahan acc;
    std::uint64_t steps = 0;
    auto dfs = [&](auto&& self, int at, int depth, double prod) -> void {
        if (depth >= max_len) return;
        for (auto [nbr, e] : adj[at]) {
            if (++steps > budget.exact_terms)
                throw BudgetExceeded("path enumeration exceeds the configured cap of " +
                                     std::to_string(budget.exact_terms) + " steps");
            if (nbr == v) {
                acc.add(prod * spec.gamma[e]);
                continue;
            }
            if (used[nbr]) continue;
            used[nbr] = 1;
            self(self, nbr, depth + 1, prod * spec.gamma[e]);
            used[nbr] = 0;
        }
    };
    dfs(dfs, u, 0, 1.0);

    ProbResult r;
    r.value = acc.value();
    r.method = Method::path_bound;
    r.vacuous = r.value > 1.0;
    return r;
}

} // namespace spinperc
