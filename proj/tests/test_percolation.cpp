#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "spinperc/percolation.hpp"

using namespace spinperc;

namespace {

PercolationSpec uniform_spec(Graph g, double gamma) {
    std::vector<double> gs(g.edges.size(), gamma);
    return PercolationSpec(std::move(g), std::move(gs));
}

McConfig cfg(std::uint64_t samples, std::uint64_t seed, int workers = 1) {
    McConfig c;
    c.samples = samples;
    c.seed = seed;
    c.workers = workers;
    return c;
}

PercolationSpec random_spec(std::mt19937_64& rng, int n_max, int m_max) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int n = 2 + static_cast<int>(rng() % (n_max - 1));
    std::vector<std::pair<int, int>> all;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) all.push_back({i, j});
    std::shuffle(all.begin(), all.end(), rng);
    std::size_t m = 1 + rng() % std::min<std::size_t>(m_max, all.size());
    std::vector<std::pair<int, int>> edges(all.begin(), all.begin() + m);
    std::sort(edges.begin(), edges.end());
    std::vector<double> gamma;
    for (std::size_t e = 0; e < m; ++e) gamma.push_back(unit(rng));
    return PercolationSpec(Graph(n, edges), gamma);
}

} // namespace

TEST_CASE("exact connection probability: worked examples") {
    std::vector<int> t2{2};
    CHECK(exact_connection_prob(uniform_spec(make_path(3), 0.5), 0, t2).value ==
          doctest::Approx(0.25).epsilon(1e-14));

    std::vector<int> t1{1};
    // direct edge or the two-step detour: gamma + (1-gamma)*gamma^2
    CHECK(exact_connection_prob(uniform_spec(make_complete(3), 0.5), 0, t1).value ==
          doctest::Approx(0.625).epsilon(1e-14));

    // a deterministic path forces connection
    CHECK(exact_connection_prob(uniform_spec(make_path(4), 1.0), 0, {std::vector<int>{3}}).value ==
          1.0);
    CHECK(exact_connection_prob(uniform_spec(make_path(4), 0.0), 0, {std::vector<int>{3}}).value ==
          0.0);
}

TEST_CASE("exact connection probability matches the BFS oracle") {
    std::mt19937_64 rng(42);
    for (int iter = 0; iter < 80; ++iter) {
        PercolationSpec spec = random_spec(rng, 6, 9);
        int u = static_cast<int>(rng() % spec.graph.n);
        std::vector<int> targets{static_cast<int>(rng() % spec.graph.n)};
        while (targets[0] == u) targets[0] = static_cast<int>(rng() % spec.graph.n);
        double got = exact_connection_prob(spec, u, targets).value;
        double want = oracle::naive_connection_prob(spec, u, targets);
        CHECK(std::abs(got - want) < 1e-12);
    }
}

TEST_CASE("edge cap is enforced") {
    PercolationSpec spec = uniform_spec(make_complete(8), 0.5); // 28 edges
    std::vector<int> t{1};
    CHECK_THROWS_AS(exact_connection_prob(spec, 0, t), BudgetExceeded);
    // deterministic edges do not count against the cap
    PercolationSpec forced = uniform_spec(make_complete(8), 1.0);
    CHECK(exact_connection_prob(forced, 0, t).value == 1.0);
}

TEST_CASE("monte carlo connection probability") {
    std::vector<int> t1{1};
    SUBCASE("matches the exact triangle value") {
        ProbResult r = mc_connection_prob(uniform_spec(make_complete(3), 0.5), 0, t1,
                                          cfg(200000, 3, 2));
        CHECK(std::abs(r.value - 0.625) <= 4.0 * *r.std_error);
        CHECK(*r.samples == 200000);
    }
    SUBCASE("gamma zero gives exactly zero") {
        ProbResult r = mc_connection_prob(uniform_spec(make_complete(3), 0.0), 0, t1, cfg(5000, 1));
        CHECK(r.value == 0.0);
    }
    SUBCASE("deterministic given the config") {
        PercolationSpec spec = uniform_spec(make_grid_box(4, 4), 0.5);
        std::vector<int> t{15};
        ProbResult a = mc_connection_prob(spec, 0, t, cfg(20000, 7, 2));
        ProbResult b = mc_connection_prob(spec, 0, t, cfg(20000, 7, 2));
        CHECK(a.value == b.value);
    }
}

TEST_CASE("exact and monte carlo agree on random specs") {
    std::mt19937_64 rng(4242);
    int ok = 0;
    const int trials = 60;
    for (int iter = 0; iter < trials; ++iter) {
        PercolationSpec spec = random_spec(rng, 6, 12);
        int u = static_cast<int>(rng() % spec.graph.n);
        std::vector<int> targets{static_cast<int>(rng() % spec.graph.n)};
        while (targets[0] == u) targets[0] = static_cast<int>(rng() % spec.graph.n);
        double exact = exact_connection_prob(spec, u, targets).value;
        ProbResult mc = mc_connection_prob(spec, u, targets, cfg(20000, 50 + iter));
        if (std::abs(mc.value - exact) <= 4.0 * *mc.std_error + 1e-12) ++ok;
    }
    CHECK(ok >= trials - 3);
}

TEST_CASE("raising a single gamma never lowers the connection probability") {
    std::mt19937_64 rng(9);
    for (int iter = 0; iter < 10; ++iter) {
        PercolationSpec spec = random_spec(rng, 5, 7);
        int u = 0;
        std::vector<int> t{spec.graph.n - 1};
        double base = exact_connection_prob(spec, u, t).value;
        for (std::size_t e = 0; e < spec.gamma.size(); ++e) {
            PercolationSpec raised = spec;
            raised.gamma[e] = std::min(1.0, raised.gamma[e] + 0.3);
            CHECK(exact_connection_prob(raised, u, t).value >= base - 1e-12);
        }
    }
}

TEST_CASE("path union bound: worked examples") {
    SUBCASE("a path graph has a single path, so the bound is exact") {
        PercolationSpec spec = uniform_spec(make_path(4), 0.7);
        ProbResult bound = path_union_bound(spec, 0, 3, 5);
        double exact = exact_connection_prob(spec, 0, {std::vector<int>{3}}).value;
        CHECK(std::abs(bound.value - exact) < 1e-15);
        CHECK(bound.method == Method::path_bound);
        CHECK_FALSE(bound.vacuous);
    }
    SUBCASE("triangle: 0.5 + 0.25 over-counts the exact 0.625") {
        PercolationSpec spec = uniform_spec(make_complete(3), 0.5);
        ProbResult bound = path_union_bound(spec, 0, 1, 3);
        CHECK(bound.value == doctest::Approx(0.75).epsilon(1e-14));
        CHECK(bound.value >= 0.625);
    }
    SUBCASE("dense graphs go vacuous and get flagged") {
        PercolationSpec spec = uniform_spec(make_complete(4), 0.9);
        ProbResult bound = path_union_bound(spec, 0, 1, 3);
        CHECK(bound.value == doctest::Approx(0.9 + 2 * 0.81 + 2 * 0.729).epsilon(1e-14));
        CHECK(bound.vacuous);
    }
}

TEST_CASE("path union bound dominates the exact probability") {
    std::mt19937_64 rng(314);
    for (int iter = 0; iter < 40; ++iter) {
        PercolationSpec spec = random_spec(rng, 7, 12);
        int u = 0, v = spec.graph.n - 1;
        double exact = exact_connection_prob(spec, u, {std::vector<int>{v}}).value;
        double bound = path_union_bound(spec, u, v, spec.graph.n).value;
        CHECK(bound >= exact - 1e-12);
    }
}

TEST_CASE("on trees the union bound is exact") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    RegularTree t = make_regular_tree(3, 2);
    std::vector<double> gamma;
    for (std::size_t e = 0; e < t.graph.edges.size(); ++e) gamma.push_back(unit(rng));
    PercolationSpec spec(t.graph, gamma);
    for (int v : t.leaves()) {
        double bound = path_union_bound(spec, 0, v, 10).value;
        double exact = exact_connection_prob(spec, 0, {std::vector<int>{v}}).value;
        CHECK(std::abs(bound - exact) < 1e-12);
    }
}

TEST_CASE("grid: subcritical vs supercritical separation") {
    Graph g = make_grid_box(31, 31);
    int center = grid_vertex(15, 15, 31);
    std::vector<int> boundary;
    for (int i = 0; i < 31; ++i)
        for (int j = 0; j < 31; ++j)
            if (i == 0 || j == 0 || i == 30 || j == 30) boundary.push_back(grid_vertex(i, j, 31));
    ProbResult low =
        mc_connection_prob(uniform_spec(g, 0.45), center, boundary, cfg(30000, 17, 2));
    ProbResult high =
        mc_connection_prob(uniform_spec(g, 0.55), center, boundary, cfg(30000, 18, 2));
    CHECK(high.value - low.value > 10.0 * (*low.std_error + *high.std_error));
}
