#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "spinperc/channel.hpp"

using namespace spinperc;

TEST_CASE("likelihood: worked examples") {
    EdgeChannel bsc = EdgeChannel::bsc(0.25);
    CHECK(likelihood(bsc, EdgeObservation::make_spin(1), 1) == doctest::Approx(0.75));
    CHECK(likelihood(bsc, EdgeObservation::make_spin(-1), 1) == doctest::Approx(0.25));

    EdgeChannel era = EdgeChannel::erasure(0.3);
    CHECK(likelihood(era, EdgeObservation::make_erased(), 1) == doctest::Approx(0.7));
    CHECK(likelihood(era, EdgeObservation::make_erased(), -1) == doctest::Approx(0.7));
    CHECK(likelihood(era, EdgeObservation::make_spin(1), -1) == 0.0);

    EdgeChannel awgn = EdgeChannel::awgn(1.0);
    CHECK(likelihood(awgn, EdgeObservation::make_real(0.0), 1) ==
          doctest::Approx(likelihood(awgn, EdgeObservation::make_real(0.0), -1)));

    CHECK_THROWS_AS(likelihood(bsc, EdgeObservation::make_real(0.5), 1), std::invalid_argument);
    CHECK_THROWS_AS(likelihood(awgn, EdgeObservation::make_spin(1), 1), std::invalid_argument);
    CHECK_THROWS_AS(likelihood(bsc, EdgeObservation::make_spin(1), 2), std::invalid_argument);
}

TEST_CASE("parameter ranges are enforced") {
    CHECK_THROWS_AS(EdgeChannel::bsc(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(EdgeChannel::bsc(1.1), std::invalid_argument);
    CHECK_THROWS_AS(EdgeChannel::awgn(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(EdgeChannel::erasure(2.0), std::invalid_argument);
}

TEST_CASE("sampling: degenerate channels") {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 200; ++i) {
        auto y = sample_output(EdgeChannel::bsc(0.0), 1, rng);
        CHECK(y.kind == EdgeObservation::Kind::spin);
        CHECK(y.spin == 1);
    }
    for (int i = 0; i < 200; ++i) {
        auto y = sample_output(EdgeChannel::erasure(0.0), -1, rng);
        CHECK(y.kind == EdgeObservation::Kind::erased);
    }
}

TEST_CASE("sampling: empirical flip rate of BSC(0.25)") {
    std::mt19937_64 rng(7);
    EdgeChannel ch = EdgeChannel::bsc(0.25);
    int flips = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i)
        if (sample_output(ch, 1, rng).spin == -1) ++flips;
    CHECK(std::abs(flips / static_cast<double>(n) - 0.25) < 0.01);
}

TEST_CASE("symmetry transform: likelihood(T(y) | -x) == likelihood(y | x)") {
    for (auto ch : {EdgeChannel::bsc(0.2), EdgeChannel::bsc(0.0), EdgeChannel::erasure(0.6)}) {
        for (int k = 0; k < discrete_output_count(ch); ++k) {
            EdgeObservation y = discrete_output(ch, k);
            for (int x : {-1, 1})
                CHECK(likelihood(ch, apply_symmetry(ch, y), -x) == likelihood(ch, y, x));
        }
    }
    EdgeChannel awgn = EdgeChannel::awgn(0.7);
    for (double yv = -4.0; yv <= 4.0; yv += 0.25) {
        EdgeObservation y = EdgeObservation::make_real(yv);
        for (int x : {-1, 1})
            CHECK(likelihood(awgn, apply_symmetry(awgn, y), -x) ==
                  doctest::Approx(likelihood(awgn, y, x)).epsilon(1e-14));
    }
    // involution
    EdgeObservation y = EdgeObservation::make_spin(-1);
    CHECK(apply_symmetry(awgn, apply_symmetry(awgn, EdgeObservation::make_real(1.5))).value == 1.5);
    CHECK(apply_symmetry(EdgeChannel::bsc(0.1), apply_symmetry(EdgeChannel::bsc(0.1), y)).spin ==
          -1);
}

TEST_CASE("discrete normalization") {
    for (auto ch : {EdgeChannel::bsc(0.37), EdgeChannel::erasure(0.81)}) {
        for (int x : {-1, 1}) {
            double total = 0.0;
            for (int k = 0; k < discrete_output_count(ch); ++k)
                total += likelihood(ch, discrete_output(ch, k), x);
            CHECK(std::abs(total - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("edge information values") {
    CHECK(edge_chi2_info(EdgeChannel::bsc(0.5)) == 0.0);
    CHECK(edge_chi2_info(EdgeChannel::bsc(0.25)) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(edge_chi2_info(EdgeChannel::bsc(0.75)) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(edge_chi2_info(EdgeChannel::awgn(0.0)) == 0.0);
    CHECK(edge_chi2_info(EdgeChannel::erasure(0.3)) == 0.3);
    CHECK(edge_chi2_info(EdgeChannel::erasure(0.0)) == 0.0);

    double g = edge_chi2_info(EdgeChannel::awgn(0.5));
    CHECK(g > 0.0);
    CHECK(g <= 0.75); // lambda(lambda+1) at 0.5
}

TEST_CASE("edge information equals the generic I2 of the single-edge channel") {
    // I2(X_e; Y_e) = sum_y P(y) E[X|y]^2 by direct enumeration
    for (auto ch : {EdgeChannel::bsc(0.17), EdgeChannel::bsc(0.42), EdgeChannel::erasure(0.55),
                    EdgeChannel::erasure(1.0)}) {
        double total = 0.0;
        for (int k = 0; k < discrete_output_count(ch); ++k) {
            EdgeObservation y = discrete_output(ch, k);
            double lp = likelihood(ch, y, 1), lm = likelihood(ch, y, -1);
            double py = 0.5 * (lp + lm);
            if (py == 0.0) continue;
            double mean = 0.5 * (lp - lm) / py;
            total += py * mean * mean;
        }
        CHECK(std::abs(total - edge_chi2_info(ch)) < 1e-12);
    }
}

TEST_CASE("awgn_f: quadrature behaviour") {
    CHECK(awgn_f(0.0) == 0.0);

    // small-lambda slope: f(lambda) = lambda + o(lambda)
    double ratio = awgn_f(0.01) / 0.01;
    CHECK(ratio >= 0.9);
    CHECK(ratio <= 1.0);

    double prev = 0.0;
    for (double l : {0.1, 0.25, 0.5, 1.0, 2.0, 4.0}) {
        double f = awgn_f(l);
        CHECK(f > prev);
        CHECK(f < 1.0);
        CHECK(f <= l * (l + 1.0));
        prev = f;
    }

    // order stability (the integrand's poles slow convergence at large lambda)
    CHECK(std::abs(awgn_f(0.5, 60) - awgn_f(0.5, 160)) < 1e-9);
    CHECK(std::abs(awgn_f(2.0, 60) - awgn_f(2.0, 240)) < 1e-6);
    CHECK_THROWS_AS(awgn_f(0.5, 1), std::invalid_argument);
}

TEST_CASE("awgn_f matches a monte carlo oracle") {
    std::mt19937_64 rng(12);
    std::normal_distribution<double> z(0.0, 1.0);
    const double lambda = 0.5;
    const int n = 1000000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        double t = std::tanh(lambda + std::sqrt(lambda) * z(rng));
        sum += t * t;
        sum_sq += t * t * t * t;
    }
    double mean = sum / n;
    double se = std::sqrt((sum_sq / n - mean * mean) / n);
    CHECK(std::abs(awgn_f(lambda) - mean) < 3.0 * se);
}

TEST_CASE("channel spec grammar") {
    EdgeChannel ch = parse_channel_spec("bsc:0.25");
    CHECK(ch.kind == ChannelKind::bsc);
    CHECK(ch.param == 0.25);
    CHECK(parse_channel_spec("awgn:0.5").kind == ChannelKind::awgn);
    CHECK(parse_channel_spec("erasure:0.3").kind == ChannelKind::erasure);
    CHECK(parse_channel_spec(format_channel_spec(ch)).param == ch.param);

    CHECK_THROWS_WITH_AS(parse_channel_spec("bsc"), doctest::Contains("bsc"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_channel_spec("bsc:zzz"), doctest::Contains("zzz"),
                         std::invalid_argument);
    CHECK_THROWS_AS(parse_channel_spec("laplace:1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_channel_spec("bsc:1.5"), std::invalid_argument);
}
