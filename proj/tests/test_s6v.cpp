#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "kpzlab/s6v.hpp"

using namespace kpz;
using namespace kpz::s6v;

namespace {

ArrowField packed_field(std::int64_t N, std::int64_t T, double q, double z, std::uint64_t s) {
    return sample(packed(N), q, z, T, default_row_cap(N, T, q, z), SeedSpec{s});
}

std::int64_t exit_row(const ArrowField& f, std::int64_t t, std::int32_t color) {
    for (std::int64_t k = f.bottom; k <= f.row_cap; ++k)
        if (f.horizontal_exit(t, k) == color) return k;
    return INT64_MIN;
}

BernoulliPath upper_step(std::int64_t x, std::int64_t N) {
    BernoulliPath p{-N - 1, {}};
    for (std::int64_t y = -N - 1; y <= N; ++y) p.values.push_back(N - std::max(y, x - 1) > 0 ? N - std::max(y, x - 1) : 0);
    return p;
}

}  // namespace

TEST_CASE("vertex outcomes for crossing colors at q=z=1/2") {
    auto p = coin_probabilities(0.5, 0.5);
    CHECK(p.b_up == doctest::Approx(1.0 / 3));
    CHECK(1.0 - p.b_up == doctest::Approx((1 - 0.5) / (1 - 0.25)));
    // higher vertical arrow: straight with the up coin, crossing otherwise
    CHECK(vertex_rule(5, 2, true, false).up == 5);
    CHECK(vertex_rule(5, 2, false, false).right == 5);
    CHECK(vertex_rule(2, 5, false, true).right == 5);
    CHECK(vertex_rule(2, 5, false, false).up == 5);
    CHECK(vertex_rule(NO_ARROW, 3, false, false).up == 3);
    CHECK(vertex_rule(3, 3, false, false).right == 3);
}

TEST_CASE("single arrow turns up in column 1 with probability z(1-q)/(1-qz)") {
    const double q = 0.0, z = 0.4;
    Boundary b{1, {1}, 0};
    const int n = 100000;
    int up = 0;
    for (int s = 0; s < n; ++s) up += exits_below(b, q, z, 1, 1, SeedSpec{static_cast<std::uint64_t>(s)})[0] == NO_ARROW;
    const double p = z * (1 - q) / (1 - q * z);
    CHECK(std::abs(up / double(n) - p) < 3.0 * std::sqrt(p * (1 - p) / n));
}

TEST_CASE("at q=0 a higher arrow never passes a lower one from below") {
    for (std::uint64_t s = 0; s < 200; ++s) {
        Boundary b{0, {2, 1}, 0};
        auto f = sample(b, 0.0, 0.6, 30, default_row_cap(2, 30, 0.0, 0.6), SeedSpec{s});
        for (std::int64_t t = 1; t <= 30; ++t) CHECK(exit_row(f, t, 2) < exit_row(f, t, 1));
        for (std::int64_t t = 1; t <= 30; ++t)
            for (std::int64_t k = f.bottom; k <= f.row_cap; ++k) {
                const auto a = k == f.bottom ? NO_ARROW : f.vertical_exit(t, k - 1);
                const auto i = f.horizontal_exit(t - 1, k);
                if (a != NO_ARROW && i != NO_ARROW && a > i) CHECK(f.vertical_exit(t, k) != a);
            }
    }
}

TEST_CASE("field consistency and conservation") {
    auto f = packed_field(6, 10, 0.4, 0.35, 3);
    for (std::int64_t t = 1; t <= 10; ++t) {
        std::int32_t carry = NO_ARROW;
        std::vector<std::int32_t> in_colors, out_colors;
        for (std::int64_t k = f.bottom; k <= f.row_cap; ++k) {
            const auto i = f.horizontal_exit(t - 1, k), a = carry;
            const auto j = f.horizontal_exit(t, k), b = f.vertical_exit(t, k);
            std::vector<std::int32_t> lhs{i, a}, rhs{j, b};
            std::sort(lhs.begin(), lhs.end());
            std::sort(rhs.begin(), rhs.end());
            CHECK(lhs == rhs);
            carry = b;
        }
        CHECK(carry == NO_ARROW);
        CHECK(colored_height(f, -6, -7, t) == 13);
        CHECK(colored_height(f, -6, f.row_cap, t) == 0);
    }
}

TEST_CASE("cap overflow is reported") {
    CHECK_THROWS_AS(sample(packed(3), 0.9, 0.5, 20, 4, SeedSpec{1}), CapExceeded);
}

TEST_CASE("row truncation and the run sampler agree with the full field") {
    for (std::uint64_t s = 0; s < 60; ++s) {
        const double q = (s % 3) * 0.35, z = 0.2 + 0.1 * (s % 5);
        auto f = packed_field(10, 12, q, z, s);
        auto cut = exits_below(packed(10), q, z, 12, 4, SeedSpec{s});
        for (std::int64_t k = -10; k <= 4; ++k) CHECK(cut[static_cast<std::size_t>(k + 10)] == f.horizontal_exit(12, k));
        for (std::int64_t x = -10; x <= 10; x += 3)
            for (std::int64_t y = -12; y <= 12; y += 2)
                CHECK(step_height(10, x, y, 12, q, z, SeedSpec{s}) == colored_height(f, static_cast<std::int32_t>(x), y, 12));
    }
}

TEST_CASE("general height from a step profile matches the colored height") {
    const std::int64_t N = 8;
    for (std::uint64_t s = 0; s < 100; ++s) {
        auto f = packed_field(N, 8, 0.5, 0.4, s);
        for (std::int64_t x : {-5, 0, 4}) {
            auto h0 = upper_step(x, N);
            CHECK(height_general(h0, 0, SeedSpec{s}, 0.5, 0.4, 2, 0) == h0.at(2));
            for (std::int64_t y = -8; y <= 8; ++y)
                CHECK(height_general(h0, 0, SeedSpec{s}, 0.5, 0.4, y, 8) == colored_height(f, static_cast<std::int32_t>(x), y, 8));
        }
    }
    CHECK_THROWS(height_general(BernoulliPath{0, {2, 1, 1}}, 0, SeedSpec{1}, 0.5, 0.4, 0, 1));
}

TEST_CASE("triangle inequality at a common column") {
    const std::int64_t N = 30, r = 0, s = 6;
    for (std::uint64_t sd = 0; sd < 20; ++sd) {
        for (std::int64_t x = -3; x <= 3; x += 3) {
            auto hx = upper_step(x, N);
            for (std::int64_t z = -4; z <= 4; ++z) {
                const std::int64_t hxz = height_general(hx, r, SeedSpec{sd}, 0.4, 0.5, z, s);
                for (std::int64_t y = -4; y <= 4; ++y) {
                    const std::int64_t hzy = upper_step(z, N).at(y);
                    CHECK(hxz + hzy >= height_general(hx, r, SeedSpec{sd}, 0.4, 0.5, y, s));
                }
            }
        }
    }
}

TEST_CASE("merging commutes with sampling") {
    const std::int64_t N = 8, T = 8;
    for (std::uint64_t s = 0; s < 100; ++s) {
        const double q = 0.5, z = 0.3;
        const std::int32_t x = static_cast<std::int32_t>(s % 17) - 8;
        ColorMap tau = [x](std::int32_t c) { return c >= x ? 1 : NO_ARROW; };
        const auto cap = default_row_cap(N, T, q, z);
        auto lhs = merge_colors(sample(packed(N), q, z, T, cap, SeedSpec{s}), tau);
        auto rhs = sample(merge_colors(packed(N), tau), q, z, T, cap, SeedSpec{s});
        CHECK(lhs.horizontal == rhs.horizontal);
        CHECK(lhs.vertical == rhs.vertical);
    }
    auto f = packed_field(5, 4, 0.3, 0.5, 1);
    CHECK(merge_colors(f, [](std::int32_t c) { return c; }) == f);
    CHECK_THROWS_AS(merge_colors(f, [](std::int32_t c) { return -c; }), std::invalid_argument);
    auto one = merge_colors(f, [](std::int32_t) { return 1; });
    for (std::int64_t y = -6; y <= 6; ++y) {
        std::int64_t all = 0;
        for (std::int64_t k = y + 1; k <= f.row_cap; ++k) all += f.horizontal_exit(4, k) != NO_ARROW;
        CHECK(colored_height(one, 1, y, 4) == all);
    }
}

TEST_CASE("quadrangle inequality on every sample") {
    for (std::uint64_t s = 0; s < 30; ++s) {
        auto f = packed_field(12, 10, 0.6, 0.3, s);
        for (std::int32_t x1 = -8; x1 <= 8; x1 += 2)
            for (std::int32_t x2 = x1; x2 <= 8; x2 += 3)
                for (std::int64_t y1 = -8; y1 <= 8; y1 += 2)
                    for (std::int64_t y2 = y1; y2 <= 8; y2 += 3)
                        CHECK(colored_height(f, x1, y1, 10) + colored_height(f, x2, y2, 10) >=
                              colored_height(f, x1, y2, 10) + colored_height(f, x2, y1, 10));
    }
}

TEST_CASE("pairing of identical and locally equal boundaries") {
    auto f = packed_field(6, 6, 0.4, 0.5, 9);
    auto rep = pair_trajectories(f, f);
    CHECK(rep.discrepancies.empty());
    CHECK(rep.uncoupled_first == 0);
    CHECK(rep.coupled_pairs == 13);
    CHECK(rep.overtaking == 0);

    const std::int64_t N1 = 40;
    const double q = 0.3, z = 0.5;
    const auto T = static_cast<std::int64_t>(std::floor((1 - coin_probabilities(q, z).b_right) * N1 / 4.0));
    for (std::uint64_t s = 0; s < 20; ++s) {
        Boundary a{-2 * N1, std::vector<std::int32_t>(4 * N1 + 1, NO_ARROW), 0};
        Boundary b = a;
        for (std::int64_t k = -2 * N1; k <= 2 * N1; ++k) {
            const auto i = static_cast<std::size_t>(k + 2 * N1);
            const bool inside = std::abs(k) <= N1;
            const bool occ_a = draw_uniform(SeedSpec{s}, static_cast<std::uint64_t>(k), 1) < 0.5;
            const bool occ_b = inside ? occ_a : draw_uniform(SeedSpec{s}, static_cast<std::uint64_t>(k), 2) < 0.5;
            a.colors[i] = occ_a ? 1 : NO_ARROW;
            b.colors[i] = occ_b ? 1 : NO_ARROW;
        }
        const auto cap = default_row_cap(2 * N1, T, q, z) + 2 * N1;
        auto fa = sample(a, q, z, T, cap, SeedSpec{100 + s});
        auto fb = sample(b, q, z, T, cap, SeedSpec{100 + s});
        auto r = pair_trajectories(fa, fb);
        CHECK_FALSE(r.discrepancy_in(1, T, -N1 / 2, N1 / 2));
    }
    CHECK_THROWS(pair_trajectories(f, packed_field(6, 6, 0.4, 0.5, 10)));
}

TEST_CASE("coupled arrows stay coupled") {
    for (std::uint64_t s = 0; s < 50; ++s) {
        Boundary a{0, std::vector<std::int32_t>(30, NO_ARROW), 0};
        Boundary b = a;
        for (std::size_t i = 0; i < 30; ++i) {
            a.colors[i] = draw_uniform(SeedSpec{s}, i, 1) < 0.5 ? 1 : NO_ARROW;
            b.colors[i] = draw_uniform(SeedSpec{s}, i, 2) < 0.5 ? 1 : NO_ARROW;
        }
        auto fa = sample(a, 0.5, 0.4, 15, default_row_cap(30, 15, 0.5, 0.4), SeedSpec{s});
        auto fb = sample(b, 0.5, 0.4, 15, default_row_cap(30, 15, 0.5, 0.4), SeedSpec{s});
        auto r = pair_trajectories(fa, fb);
        CHECK(r.coupled_pairs <= std::min(r.arrows_first, r.arrows_second));
        CHECK(r.uncoupled_first == r.arrows_first - r.coupled_pairs);
    }
}

TEST_CASE("degeneration plumbing") {
    DegenerationParams p{5.0, 40.0, 0.05};
    CHECK(p.N() == 100);
    const double q = 0.4;
    CHECK(p.z(q) == doctest::Approx(0.95 / 0.98));
    auto b = coin_probabilities(q, p.z(q));
    CHECK(b.b_right == doctest::Approx(0.05));
    CHECK(b.b_up == doctest::Approx(0.02));
    for (std::uint64_t s = 0; s < 3; ++s) {
        auto f = sample(packed(100), q, p.z(q), 100, default_row_cap(100, 100, q, p.z(q)), SeedSpec{s});
        CHECK(asep_degeneration(p, q, SeedSpec{s}, 0, 0) == 101 - colored_height(f, 0, 99, 100));
        CHECK(asep_degeneration(p, q, SeedSpec{s}, 3, -2) == 100 + 3 + 1 - colored_height(f, -3, 101, 100));
    }
    CHECK(asep_degeneration(DegenerationParams{0.0, 40.0, 0.05}, q, SeedSpec{1}, 0, 0) == 0);
    CHECK_THROWS_AS(asep_degeneration(p, q, SeedSpec{1}, 11, 0), OutOfSampledRegion);
}
