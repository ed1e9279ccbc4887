#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "kpzlab/randomness.hpp"

using namespace kpz;

TEST_CASE("clock events are deterministic and prefix stable") {
    const SeedSpec s{12345, StreamDomain::asep_clock};
    auto a = clock_events(s, 0.4, 0, 10.0);
    auto b = clock_events(s, 0.4, 0, 10.0);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].time == b[i].time);
        CHECK(a[i].direction == b[i].direction);
    }
    auto pre = clock_events(s, 0.4, 0, 5.0);
    REQUIRE(pre.size() <= a.size());
    for (std::size_t i = 0; i < pre.size(); ++i) CHECK(pre[i].time == a[i].time);
    for (std::size_t i = 1; i < a.size(); ++i) CHECK(a[i].time > a[i - 1].time);
    CHECK(a.back().time <= 10.0);
}

TEST_CASE("clock events at q=0 only move right") {
    for (auto ev : clock_events(SeedSpec{7, StreamDomain::asep_clock}, 0.0, 3, 50.0))
        CHECK(ev.direction == Direction::right);
}

TEST_CASE("clock events reject bad horizon") {
    CHECK_THROWS_AS(clock_events(SeedSpec{1}, 0.5, 0, 0.0), std::domain_error);
    CHECK_THROWS_AS(clock_events(SeedSpec{1}, 0.5, 0, -2.0), std::domain_error);
}

TEST_CASE("clock rates") {
    const SeedSpec s{99, StreamDomain::asep_clock};
    double right = 0, left = 0;
    const int sites = 200;
    const double horizon = 100.0;
    for (int x = 0; x < sites; ++x)
        for (auto ev : clock_events(s, 0.3, x, horizon)) (ev.direction == Direction::right ? right : left) += 1;
    const double n = sites * horizon;
    CHECK(std::abs(right / n - 1.0) < 4.0 * std::sqrt(1.0 / n));
    CHECK(std::abs(left / n - 0.3) < 4.0 * std::sqrt(0.3 / n));
}

TEST_CASE("vertex coin probabilities") {
    auto p = coin_probabilities(0.5, 0.5);
    CHECK(p.b_up == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(p.b_right == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    for (int x = 1; x < 50; ++x) CHECK_FALSE(vertex_coins(SeedSpec{5}, 0.0, 0.4, x, -x).up_coin);
    CHECK_THROWS_AS(vertex_coins(SeedSpec{5}, 1.0, 0.4, 1, 0), std::domain_error);
    CHECK_THROWS_AS(vertex_coins(SeedSpec{5}, 0.2, 0.0, 1, 0), std::domain_error);
    CHECK_THROWS_AS(vertex_coins(SeedSpec{5}, 0.2, 0.4, 0, 0), std::domain_error);
}

TEST_CASE("right coin frequency over 10^6 vertices") {
    const double q = 0.5, z = 0.5;
    const double b = coin_probabilities(q, z).b_right;
    long hits = 0;
    const long n = 1000000;
    for (long i = 0; i < n; ++i) hits += vertex_coins(SeedSpec{2024}, q, z, 1 + i % 1000, i / 1000).right_coin;
    const double se = std::sqrt(b * (1 - b) / n);
    CHECK(std::abs(static_cast<double>(hits) / n - b) < 3.0 * se);
}

TEST_CASE("coins and draws are repeatable") {
    auto a = vertex_coins(SeedSpec{77}, 0.3, 0.6, 4, -2);
    auto b = vertex_coins(SeedSpec{77}, 0.3, 0.6, 4, -2);
    CHECK(a.up_coin == b.up_coin);
    CHECK(a.right_coin == b.right_coin);
    CHECK(draw_bits(SeedSpec{1}, 1, 2, 3, 4) == draw_bits(SeedSpec{1}, 1, 2, 3, 4));
    CHECK(draw_bits(SeedSpec{1}, 1, 2, 3, 4) != draw_bits(SeedSpec{1}, 1, 2, 3, 5));
}

TEST_CASE("draws at neighbouring sites are uncorrelated") {
    const SeedSpec s{31337, StreamDomain::asep_clock};
    const int n = 100000;
    double sxy = 0, sx = 0, sy = 0;
    for (int i = 0; i < n; ++i) {
        double u = draw_uniform(s, static_cast<std::uint64_t>(i), 0, 0);
        double v = draw_uniform(s, static_cast<std::uint64_t>(i + 1), 0, 0);
        sx += u;
        sy += v;
        sxy += u * v;
    }
    const double cov = sxy / n - (sx / n) * (sy / n);
    const double se = (1.0 / 12.0) / std::sqrt(static_cast<double>(n));
    CHECK(std::abs(cov) < 4.0 * se);
}

TEST_CASE("seed parsing") {
    CHECK(parse_seed("42") == 42u);
    CHECK(parse_seed("0x2A") == 42u);
    CHECK(parse_seed("18446744073709551615") == ~std::uint64_t{0});
    CHECK_THROWS(parse_seed("-1"));
    CHECK_THROWS(parse_seed("12ab"));
    CHECK_THROWS(parse_seed("18446744073709551616"));
}
