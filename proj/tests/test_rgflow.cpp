#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "isingrg/rgflow.hpp"

using namespace isingrg;

TEST_CASE("coupling map point values") {
    CHECK(rgt_step(0.0) == 0.0);
    CHECK(rgt_step(1.0) == doctest::Approx(0.2168904152415136).epsilon(1e-14));
    CHECK(rgt_step(rgt_step(1.0)) == doctest::Approx(0.0116692993375207).epsilon(1e-12));
    CHECK_THROWS_AS(rgt_step(-0.2), std::domain_error);
}

TEST_CASE("coupling map is monotone and halves its argument") {
    double prev = rgt_step(0.0);
    for (double k = 0.1; k <= 3.01; k += 0.1) {
        const double next = rgt_step(k);
        CHECK(next > prev);
        CHECK(next >= 0.0);
        CHECK(next <= k / 2.0);
        prev = next;
    }
}

TEST_CASE("exact decimation map") {
    CHECK(exact_decimation_step(0.0) == 0.0);
    CHECK(exact_decimation_step(1.0) == doctest::Approx(0.6625013736789322).epsilon(1e-14));
    // Marginalizing the middle spin of a 3-site segment reproduces all four
    // boundary weights with a single effective coupling.
    for (double k : {0.2, 0.7, 1.5}) {
        const auto pair_sum = [&](int s1, int s3) {
            return std::exp(k * (s1 + s3)) + std::exp(-k * (s1 + s3));
        };
        CHECK(pair_sum(+1, +1) == pair_sum(-1, -1));
        CHECK(pair_sum(+1, -1) == pair_sum(-1, +1));
        const double k_eff = 0.5 * std::log(pair_sum(+1, +1) / pair_sum(+1, -1));
        CHECK(exact_decimation_step(k) == doctest::Approx(k_eff).epsilon(1e-13));
    }
    // The two maps differ away from the fixed point.
    CHECK(exact_decimation_step(1.0) != rgt_step(1.0));
}

TEST_CASE("trajectory bound K_n <= K_0 / 2^n") {
    for (double k0 : {0.0, 0.5, 1.0, 2.0, 3.0}) {
        const RgTrajectory traj = rg_trajectory(k0, 30);
        REQUIRE(traj.k_values.size() == 31);
        CHECK(traj.k_values[0] == k0);
        for (int n = 1; n <= 30; ++n)
            CHECK(traj.k_values[static_cast<std::size_t>(n)] <= k0 * std::ldexp(1.0, -n));
    }
    const RgTrajectory zero = rg_trajectory(0.0, 10);
    for (double k : zero.k_values) CHECK(k == 0.0);
    const RgTrajectory one = rg_trajectory(1.0, 2);
    CHECK(one.k_values[1] == doctest::Approx(0.2168904152415136).epsilon(1e-14));
    CHECK(one.k_values[2] == doctest::Approx(0.0116692993375207).epsilon(1e-12));
    CHECK(rg_trajectory(1.0, 10).k_values[10] <= std::ldexp(1.0, -10));
}

TEST_CASE("correlation remainders") {
    SUBCASE("identically zero cases") {
        const RemainderSeries zero = correlation_remainder(0.0, 0, 2, 8);
        for (double v : zero.values) CHECK(v == 0.0);
        CHECK(correlation_remainder(1.0, 0, 3, 0).values[0] == 0.0);
    }
    SUBCASE("tail ratios shrink below 0.6") {
        const RemainderSeries series = correlation_remainder(1.0, 0, 1, 8);
        for (std::size_t m = 4; m + 1 < series.values.size(); ++m) {
            const double cur = std::abs(series.values[m]);
            const double nxt = std::abs(series.values[m + 1]);
            CHECK((nxt == 0.0 || nxt / cur < 0.6));
        }
    }
    SUBCASE("both proof-side bounds hold") {
        for (double k0 : {0.5, 1.0, 2.0}) {
            for (int dx : {1, 2}) {
                const RemainderSeries series = correlation_remainder(k0, 0, dx, 12);
                for (std::size_t m = 0; m < series.values.size(); ++m) {
                    const double coarse_bound =
                        std::exp(2.0 * k0) * std::pow(k0 * std::ldexp(1.0, -(int)m), dx);
                    const double dilated_bound =
                        std::pow(std::tanh(k0), std::ldexp(static_cast<double>(dx), (int)m));
                    CHECK(std::abs(series.values[m]) <= coarse_bound + dilated_bound + 1e-18);
                }
            }
        }
    }
    SUBCASE("coincident sites rejected") {
        CHECK_THROWS_AS(correlation_remainder(1.0, 2, 2, 5), std::domain_error);
    }
}

TEST_CASE("observable remainders") {
    SUBCASE("flat observable gives all-zero series") {
        const ObservableRemainders obs = observable_remainders(1.0, {1, 1}, {1, 1}, 0, 1, 8);
        for (std::size_t m = 0; m < obs.hat.values.size(); ++m) {
            CHECK(obs.hat.values[m] == 0.0);
            CHECK(obs.tilde.values[m] == 0.0);
            CHECK(obs.full.values[m] == 0.0);
        }
    }
    SUBCASE("zero coupling gives all-zero series") {
        const ObservableRemainders obs = observable_remainders(0.0, {2, 1}, {2, 1}, 0, 1, 8);
        for (double v : obs.hat.values) CHECK(v == 0.0);
        for (double v : obs.tilde.values) CHECK(v == 0.0);
    }
    SUBCASE("hat series is exactly B/4 times the correlation series") {
        const ObservableConstants k = observable_constants({2, 1}, {3, 1});
        const RemainderSeries corr = correlation_remainder(1.0, 0, 1, 10);
        const ObservableRemainders obs = observable_remainders(1.0, {2, 1}, {3, 1}, 0, 1, 10);
        for (std::size_t m = 0; m < corr.values.size(); ++m) {
            CHECK(obs.hat.values[m] == 0.25 * k.B * corr.values[m]);
            CHECK(obs.full.values[m] == obs.hat.values[m] - obs.tilde.values[m]);
        }
    }
    SUBCASE("tail ratios shrink below 0.6") {
        const ObservableRemainders obs = observable_remainders(1.0, {2, 1}, {2, 1}, 0, 1, 10);
        for (const RemainderSeries* s : {&obs.hat, &obs.tilde}) {
            for (std::size_t m = 4; m + 1 < s->values.size(); ++m) {
                const double cur = std::abs(s->values[m]);
                const double nxt = std::abs(s->values[m + 1]);
                CHECK((nxt == 0.0 || nxt / cur < 0.6));
            }
        }
    }
}

TEST_CASE("decay rate fit") {
    SUBCASE("exact geometric input") {
        RemainderSeries series;
        for (int m = 0; m <= 12; ++m) series.values.push_back(std::pow(0.5, m));
        CHECK(decay_rate_fit(series, 0) == doctest::Approx(std::log(0.5)).epsilon(1e-9));
    }
    SUBCASE("correlation tail decays faster than log 0.7") {
        const RemainderSeries series = correlation_remainder(1.0, 0, 1, 12);
        CHECK(decay_rate_fit(series, 4) <= std::log(0.7));
    }
    SUBCASE("degenerate inputs rejected") {
        RemainderSeries zeros;
        zeros.values.assign(10, 0.0);
        CHECK_THROWS_AS(decay_rate_fit(zeros, 0), std::domain_error);
        RemainderSeries two;
        two.values = {1.0, 0.5};
        CHECK_THROWS_AS(decay_rate_fit(two, 0), std::domain_error);
    }
}
