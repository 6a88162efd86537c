#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "spinperc/exact.hpp"
#include "spinperc/monte_carlo.hpp"
#include "spinperc/percolation.hpp"

using namespace spinperc;

namespace {

McConfig cfg(std::uint64_t samples, std::uint64_t seed, int workers = 1) {
    McConfig c;
    c.samples = samples;
    c.seed = seed;
    c.workers = workers;
    return c;
}

} // namespace

TEST_CASE("estimates are reproducible to the last bit") {
    SyncModel m = uniform_model(make_complete(4), EdgeChannel::bsc(0.3));
    InfoResult a = mc_pairwise_chi2(m, 0, 1, cfg(5000, 9, 3));
    InfoResult b = mc_pairwise_chi2(m, 0, 1, cfg(5000, 9, 3));
    CHECK(a.value == b.value);
    CHECK(*a.std_error == *b.std_error);
    CHECK(*a.samples == 5000);

    // a different seed moves the estimate
    InfoResult c = mc_pairwise_chi2(m, 0, 1, cfg(5000, 10, 3));
    CHECK(a.value != c.value);
}

TEST_CASE("estimator agrees with the exact value on the path") {
    SyncModel m = uniform_model(make_path(4), EdgeChannel::bsc(0.25));
    double exact = 0.015625; // 0.5^6
    InfoResult r = mc_pairwise_chi2(m, 0, 3, cfg(100000, 4));
    CHECK(std::abs(r.value - exact) <= 4.0 * *r.std_error);
    CHECK(r.method == Method::monte_carlo);
}

TEST_CASE("estimator agrees with the quadrature on a single AWGN edge") {
    SyncModel m = uniform_model(make_path(2), EdgeChannel::awgn(0.5));
    InfoResult r = mc_pairwise_chi2(m, 0, 1, cfg(400000, 11, 2));
    CHECK(std::abs(r.value - awgn_f(0.5)) <= 4.0 * *r.std_error);
}

TEST_CASE("pure-noise models estimate exactly zero") {
    SyncModel m = uniform_model(make_complete(4), EdgeChannel::bsc(0.5));
    InfoResult r = mc_pairwise_chi2(m, 0, 1, cfg(2000, 1));
    CHECK(r.value == 0.0);
    CHECK(*r.std_error == 0.0);
}

TEST_CASE("set estimator") {
    SUBCASE("singleton sets delegate to the pairwise estimator") {
        SyncModel m = uniform_model(make_complete(4), EdgeChannel::bsc(0.3));
        std::vector<int> s{2};
        InfoResult via_set = mc_set_chi2(m, 0, s, cfg(4000, 6));
        InfoResult via_pair = mc_pairwise_chi2(m, 0, 2, cfg(4000, 6));
        CHECK(via_set.value == via_pair.value);
    }
    SUBCASE("tree root-to-leaves stays under the path-union bound") {
        RegularTree t = make_regular_tree(2, 3);
        SyncModel m = uniform_model(t.graph, EdgeChannel::bsc(0.3));
        auto leaves = t.leaves();
        InfoResult r = mc_set_chi2(m, 0, leaves, cfg(30000, 5, 2));
        double bound = std::pow(2.0 * 0.16, 3.0); // (b*gamma)^d
        CHECK(r.value <= bound + 4.0 * *r.std_error);
    }
    SUBCASE("erasure-only models estimate the connection probability") {
        Graph g = make_complete(4);
        SyncModel m = uniform_model(g, EdgeChannel::erasure(0.4));
        std::vector<int> s{1, 3};
        InfoResult r = mc_set_chi2(m, 0, s, cfg(40000, 8, 2));
        PercolationSpec spec(g, std::vector<double>(g.edges.size(), 0.4));
        double exact = exact_connection_prob(spec, 0, s).value;
        CHECK(std::abs(r.value - exact) <= 4.0 * *r.std_error);
    }
}

TEST_CASE("estimates live in [0,1] and stderr is at most 0.5/sqrt(samples)") {
    SyncModel m = uniform_model(make_complete(5), EdgeChannel::bsc(0.2));
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        InfoResult r = mc_pairwise_chi2(m, 0, 4, cfg(1000, seed));
        CHECK(r.value >= 0.0);
        CHECK(r.value <= 1.0);
        CHECK(*r.std_error <= 0.5 / std::sqrt(1000.0) + 1e-12);
    }
}

TEST_CASE("coverage: |MC - exact| <= 4 stderr in at least 95 of 100 seeds") {
    SyncModel m = uniform_model(make_path(3), EdgeChannel::bsc(0.3));
    double exact = exact_pairwise_chi2(m, 0, 2).value;
    int ok = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        InfoResult r = mc_pairwise_chi2(m, 0, 2, cfg(2000, seed));
        if (std::abs(r.value - exact) <= 4.0 * *r.std_error + 1e-12) ++ok;
    }
    CHECK(ok >= 95);
}

TEST_CASE("inner enumeration budget is enforced") {
    RegularTree t = make_regular_tree(2, 5); // 63 vertices
    SyncModel m = uniform_model(t.graph, EdgeChannel::bsc(0.25));
    auto leaves = t.leaves();
    CHECK_THROWS_AS(mc_set_chi2(m, 0, leaves, cfg(10, 1)), BudgetExceeded);

    // the default budget admits up to 2^21 inner terms
    Budget roomy;
    roomy.inner_terms = std::uint64_t{1} << 32;
    InfoResult r = mc_set_chi2(m, 0, leaves, cfg(2, 1), roomy);
    CHECK(r.value >= 0.0);
    CHECK(r.value <= 1.0);
}

TEST_CASE("worker split is part of the reproducibility key") {
    SyncModel m = uniform_model(make_complete(4), EdgeChannel::erasure(0.5));
    InfoResult one = mc_pairwise_chi2(m, 0, 1, cfg(6000, 3, 1));
    InfoResult three = mc_pairwise_chi2(m, 0, 1, cfg(6000, 3, 3));
    InfoResult three_again = mc_pairwise_chi2(m, 0, 1, cfg(6000, 3, 3));
    CHECK(three.value == three_again.value);
    // different partitions draw different substreams but stay consistent
    CHECK(std::abs(one.value - three.value) <=
          4.0 * (*one.std_error + *three.std_error) + 1e-12);
}
