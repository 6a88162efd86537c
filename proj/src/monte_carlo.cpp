#include "spinperc/monte_carlo.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "spinperc/rng.hpp"

namespace spinperc {
namespace {

struct BlockStats {
    double sum = 0.0;    // sum of h^2
    double sum_sq = 0.0; // sum of h^4
    std::uint64_t count = 0;
};

// One contiguous block of samples with its own substream. The inner
// posterior is exact, so h^2 is an unbiased draw of the integrand.
BlockStats run_block(const SyncModel& m, int u, int v, std::uint64_t seed, std::uint64_t block,
                     std::uint64_t count, std::uint64_t inner_cap) {
    std::mt19937_64 rng(substream_seed(seed, block));
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    PosteriorEngine engine(m, u, v, inner_cap);

    const Graph& g = m.graph;
    std::vector<int> x(g.n);
    std::vector<EdgeObservation> y(g.edges.size());

    BlockStats st;
    for (std::uint64_t i = 0; i < count; ++i) {
        x[0] = 1; // gauge
        for (int w = 1; w < g.n; ++w) x[w] = coin(rng) < 0.5 ? 1 : -1;
        for (std::size_t e = 0; e < g.edges.size(); ++e) {
            int xe = x[g.edges[e].first] * x[g.edges[e].second];
            y[e] = sample_output(m.channels[e], xe, rng);
        }
        double h = engine.pair_mean(y);
        double h2 = h * h;
        st.sum += h2;
        st.sum_sq += h2 * h2;
        ++st.count;
    }
    return st;
}

} // namespace

InfoResult mc_pairwise_chi2(const SyncModel& m, int u, int v, const McConfig& cfg,
                            const Budget& budget) {
    if (cfg.samples < 1) throw std::invalid_argument("mc: samples must be >= 1");
    if (cfg.workers < 1) throw std::invalid_argument("mc: workers must be >= 1");
    int free = static_free_count(m);
    if (free > 62 || (std::uint64_t{1} << free) > budget.inner_terms)
        throw BudgetExceeded("inner posterior enumeration over 2^" + std::to_string(free) +
                             " sign classes exceeds the configured cap");

    const int workers = static_cast<int>(std::min<std::uint64_t>(cfg.workers, cfg.samples));
    std::vector<BlockStats> stats(workers);
    std::uint64_t base = cfg.samples / workers, rem = cfg.samples % workers;

    if (workers == 1) {
        stats[0] = run_block(m, u, v, cfg.seed, 0, cfg.samples, budget.inner_terms);
    } else {
        std::vector<std::thread> pool;
        for (int b = 0; b < workers; ++b) {
            std::uint64_t count = base + (static_cast<std::uint64_t>(b) < rem ? 1 : 0);
            pool.emplace_back([&, b, count] {
                stats[b] = run_block(m, u, v, cfg.seed, static_cast<std::uint64_t>(b), count,
                                     budget.inner_terms);
            });
        }
        for (auto& t : pool) t.join();
    }

    // Combine in block order so the result does not depend on scheduling.
    double sum = 0.0, sum_sq = 0.0;
    std::uint64_t count = 0;
    for (const auto& st : stats) {
        sum += st.sum;
        sum_sq += st.sum_sq;
        count += st.count;
    }

    InfoResult r;
    r.method = Method::monte_carlo;
    r.samples = count;
    double mean = sum / static_cast<double>(count);
    r.value = mean;
    if (count > 1) {
        double var = (sum_sq - static_cast<double>(count) * mean * mean) /
                     static_cast<double>(count - 1);
        r.std_error = std::sqrt(std::max(0.0, var) / static_cast<double>(count));
    } else {
        r.std_error = 0.0;
    }
    return r;
}

InfoResult mc_set_chi2(const SyncModel& m, int u, std::span<const int> s, const McConfig& cfg,
                       const Budget& budget) {
    if (s.empty()) throw std::invalid_argument("mc_set_chi2: empty target set");
    for (int t : s)
        if (t == u) throw std::invalid_argument("mc_set_chi2: u must not belong to the set");
    if (s.size() == 1) return mc_pairwise_chi2(m, u, s[0], cfg, budget);
    SyncModel aug = with_virtual_vertex(m, s);
    return mc_pairwise_chi2(aug, u, aug.graph.n - 1, cfg, budget);
}

} // namespace spinperc
