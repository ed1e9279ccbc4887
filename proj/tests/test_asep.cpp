#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "kpzlab/asep.hpp"

using namespace kpz;
using namespace kpz::asep;

namespace {

SeedSpec seed_of(std::uint64_t s) { return SeedSpec{s, StreamDomain::asep_clock}; }

bool is_bernoulli(const std::vector<std::int64_t>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] - v[i - 1] != 0 && v[i] - v[i - 1] != -1) return false;
    return true;
}

}  // namespace

TEST_CASE("evolve at t=0 is the identity") {
    auto c = packed(20);
    CHECK(evolve(c, seed_of(3), 0.4, 0.0) == c);
}

TEST_CASE("packed heights at time zero") {
    auto c = packed(10);
    CHECK(colored_height(c, 3, 1) == 2);
    for (int x = -5; x <= 5; ++x)
        for (int y = -5; y <= 5; ++y) CHECK(colored_height(c, x, y) == (y <= x ? x - y : 0));
}

TEST_CASE("packed evolution conserves colors and heights are Bernoulli paths") {
    const double t = 6.0;
    auto c = packed(required_half_width(t, 5));
    auto e = evolve_checked(c, seed_of(11), 0.35, t);
    auto a = c.colors, b = e.colors;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
    for (int x = -5; x <= 5; ++x) {
        std::vector<std::int64_t> row;
        for (int y = -5; y <= 5; ++y) row.push_back(colored_height(e, x, y));
        CHECK(is_bernoulli(row));
    }
}

TEST_CASE("window too small is reported") {
    auto c = evolve(packed(10), seed_of(1), 0.5, 5.0);
    CHECK_THROWS_AS(colored_height_certified(c, 0, 0, 5.0, 2), WindowTooSmall);
    auto big = packed(required_half_width(5.0, 2));
    CHECK_NOTHROW(colored_height_certified(big, 0, 0, 5.0, 2));
    CHECK_THROWS_AS(colored_height_certified(big, 3, 0, 5.0, 2), WindowTooSmall);
    CHECK_THROWS_AS(evolve(c, seed_of(1), 0.5, -1.0), std::domain_error);
}

TEST_CASE("heights are unchanged when the window is doubled") {
    const double t = 8.0;
    const std::int64_t r = 6;
    const std::int64_t L = required_half_width(t, r);
    for (std::uint64_t s = 0; s < 20; ++s) {
        auto a = evolve(packed(L), seed_of(s), 0.5, t);
        auto b = evolve(packed(2 * L), seed_of(s), 0.5, t);
        for (std::int64_t x = -r; x <= r; ++x)
            for (std::int64_t y = -r; y <= r; ++y) {
                // sites beyond the smaller window only matter through colors >= -x
                std::int64_t ha = colored_height(a, x, y);
                std::int64_t hb = 0;
                for (std::int64_t z = y + 1; z <= L; ++z) hb += b.at(z) >= -x;
                CHECK(ha == hb);
            }
    }
}

TEST_CASE("step tracker reproduces the colored height pathwise") {
    const double t = 10.0;
    const std::int64_t r = 6;
    const std::int64_t L = required_half_width(t, r);
    for (std::uint64_t s = 0; s < 100; ++s) {
        auto c = evolve(packed(L), seed_of(s), 0.3, t);
        for (std::int64_t x : {-4, 0, 3}) {
            auto h = height_from_profile(step_profile(x, -L - 1, L), 0.0, seed_of(s), 0.3, t);
            for (std::int64_t y = -r; y <= r; ++y) CHECK(h.at(y) == colored_height(c, x, y));
        }
    }
}

TEST_CASE("height_from_profile at t=s returns h0 and validates input") {
    auto h0 = bernoulli_profile(0.5, -30, 30, SeedSpec{4});
    CHECK(height_from_profile(h0, 2.0, seed_of(5), 0.2, 2.0) == h0);
    BernoulliPath bad{0, {3, 1, 0}};
    CHECK_THROWS_AS(height_from_profile(bad, 0.0, seed_of(1), 0.2, 1.0), std::invalid_argument);
}

TEST_CASE("height monotonicity under the basic coupling") {
    const std::int64_t lo = -80, hi = 80;
    for (std::uint64_t s = 0; s < 30; ++s) {
        auto h0 = bernoulli_profile(0.5, lo, hi, SeedSpec{s});
        auto g0 = bernoulli_profile(0.3, lo, hi, SeedSpec{s + 1000});
        std::int64_t H = 0;
        for (std::int64_t y = lo; y <= hi; ++y) H = std::max(H, g0.at(y) - h0.at(y));
        auto out = basic_couple({{h0, 0.0}, {g0, 0.0}}, seed_of(s), 0.6, 12.0);
        for (std::int64_t y = lo; y <= hi; ++y) CHECK(out[1].at(y) <= out[0].at(y) + H);
    }
}

TEST_CASE("nested step initials stay ordered") {
    const double t = 15.0;
    const std::int64_t L = required_half_width(t, 10);
    for (std::uint64_t s = 0; s < 30; ++s) {
        auto out = basic_couple({{step_profile(4, -L - 1, L), 0.0}, {step_profile(-3, -L - 1, L), 0.0}},
                                seed_of(s), 0.4, t);
        for (std::int64_t y = -10; y <= 10; ++y) {
            CHECK(out[1].at(y) <= out[0].at(y));
            CHECK(out[0].at(y) <= out[1].at(y) + 7);
        }
    }
}

TEST_CASE("triangle inequality through an intermediate time") {
    const double s = 4.0, t = 9.0;
    const std::int64_t r = 8;
    const std::int64_t L = required_half_width(t, r);
    for (std::uint64_t sd = 0; sd < 20; ++sd) {
        for (std::int64_t x : {-3, 0, 2}) {
            auto at_s = height_from_profile(step_profile(x, -L - 1, L), 0.0, seed_of(sd), 0.5, s);
            auto at_t = height_from_profile(step_profile(x, -L - 1, L), 0.0, seed_of(sd), 0.5, t);
            for (std::int64_t z = -r; z <= r; ++z) {
                auto from_z = height_from_profile(step_profile(z, -L - 1, L), s, seed_of(sd), 0.5, t);
                for (std::int64_t y = -r; y <= r; ++y) CHECK(at_s.at(z) + from_z.at(y) >= at_t.at(y));
            }
        }
    }
}

TEST_CASE("basic coupling with one profile matches height_from_profile") {
    auto h0 = bernoulli_profile(0.4, -40, 40, SeedSpec{9});
    auto a = basic_couple({{h0, 1.0}}, seed_of(9), 0.25, 7.0).front();
    CHECK(a == height_from_profile(h0, 1.0, seed_of(9), 0.25, 7.0));
    auto other = bernoulli_profile(0.4, -41, 40, SeedSpec{9});
    CHECK_THROWS(basic_couple({{h0, 0.0}, {other, 0.0}}, seed_of(1), 0.3, 2.0));
}

TEST_CASE("merging commutes with evolution") {
    const double t = 50.0;
    const std::int64_t L = required_half_width(t, 10);
    for (std::uint64_t s = 0; s < 100; ++s) {
        const std::int32_t x = static_cast<std::int32_t>(s % 11) - 5;
        ColorMap tau = [x](std::int32_t c) { return c >= -x ? 1 : 0; };
        auto c = packed(L);
        auto lhs = merge_colors(evolve(c, seed_of(s), 0.5, t), tau);
        auto rhs = evolve(merge_colors(c, tau), seed_of(s), 0.5, t);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("merge validation and trivial maps") {
    auto c = evolve(packed(12), seed_of(2), 0.5, 3.0);
    CHECK(merge_colors(c, [](std::int32_t v) { return v; }) == c);
    CHECK_THROWS_AS(merge_colors(c, [](std::int32_t v) { return -v; }), std::invalid_argument);
    auto one = merge_colors(c, [](std::int32_t) { return 7; });
    CHECK(evolve(one, seed_of(8), 0.5, 20.0) == one);
}

TEST_CASE("ring sampler conserves counts and rejects overfull rings") {
    auto r = ring_stationary_sample({5, 3}, 20, 30.0, 0.3, SeedSpec{1});
    CHECK(std::count(r.colors.begin(), r.colors.end(), 1) == 5);
    CHECK(std::count(r.colors.begin(), r.colors.end(), 2) == 3);
    CHECK(std::count(r.colors.begin(), r.colors.end(), 0) == 12);
    CHECK_THROWS_AS(ring_stationary_sample({15, 6}, 20, 1.0, 0.3, SeedSpec{1}), std::invalid_argument);
    CHECK(default_burn_in(50) == 1000.0);
}

TEST_CASE("single particle on a ring spreads uniformly") {
    const int n = 8, reps = 4000;
    std::vector<int> hist(n, 0);
    for (int s = 0; s < reps; ++s) {
        auto r = ring_stationary_sample({1}, n, 60.0, 0.0, SeedSpec{static_cast<std::uint64_t>(s)});
        hist[std::find(r.colors.begin(), r.colors.end(), 1) - r.colors.begin()]++;
    }
    const double p = 1.0 / n, se = std::sqrt(p * (1 - p) / reps);
    for (int k = 0; k < n; ++k) CHECK(std::abs(hist[k] / double(reps) - p) < 4.0 * se);
}
