#include <doctest.h>

#include <chrono>
#include <cmath>

#include "kpzlab/verify.hpp"

using namespace kpz;
using namespace kpz::verify;

TEST_CASE("KS and TV distances") {
    const EmpiricalDistribution a({1.0, 2.0, 2.0, 3.0});
    CHECK(ks_distance(a, a) == 0.0);
    CHECK(tv_distance(a, a) == 0.0);
    const EmpiricalDistribution zero({0.0}), one({1.0});
    CHECK(ks_distance(zero, one) == 1.0);
    CHECK(tv_distance(zero, one) == 1.0);
    const EmpiricalDistribution b({1.0, 2.0});
    CHECK(ks_distance(a, b) == doctest::Approx(0.25));
    CHECK(tv_distance(a, b) == doctest::Approx(0.25));
    CHECK_THROWS_AS(ks_distance(a, EmpiricalDistribution{}), std::invalid_argument);
    CHECK_THROWS_AS(tv_distance(EmpiricalDistribution{}, a), std::invalid_argument);
    CHECK(a.mean() == doctest::Approx(2.0));
    CHECK(a.variance() == doctest::Approx(0.5));
    CHECK(a.cdf(2.0) == doctest::Approx(0.75));
}

TEST_CASE("fair coins at 1e5 samples are KS-close") {
    std::vector<double> x, y;
    for (std::uint64_t i = 0; i < 100000; ++i) {
        x.push_back(draw_uniform(SeedSpec{1}, i) < 0.5 ? 0.0 : 1.0);
        y.push_back(draw_uniform(SeedSpec{2}, i) < 0.5 ? 0.0 : 1.0);
    }
    CHECK(ks_distance(EmpiricalDistribution(x), EmpiricalDistribution(y)) <= 0.01);
}

TEST_CASE("distribution merging is order independent") {
    EmpiricalDistribution a({1.0, 2.0}), b({2.0, 5.0});
    EmpiricalDistribution ab = a, ba = b;
    ab.merge(b);
    ba.merge(a);
    CHECK(ab.weights() == ba.weights());
    CHECK(ab.sample_size() == 4);
}

TEST_CASE("parallel_map is deterministic and propagates errors") {
    auto f = [](std::size_t r) { return static_cast<int>(r * r); };
    CHECK(parallel_map<int>(50, 1, f) == parallel_map<int>(50, 4, f));
    CHECK_THROWS_AS(parallel_map<int>(10, 3,
                                      [](std::size_t r) -> int {
                                          if (r == 7) throw std::runtime_error("boom");
                                          return 0;
                                      }),
                    std::runtime_error);
}

TEST_CASE("matching: exact q-Boson top curves against S6V Monte Carlo") {
    SUBCASE("N = 1 is vacuous") {
        const auto rep = matching_test(qboson::packed_model(1, 2, 0.5, 0.4), 10, 1);
        CHECK(rep.tv == 0.0);
        CHECK(rep.atoms == 0);
    }
    SUBCASE("N = M = 2, q = 0.5, z = 0.4") {
        const auto rep = matching_test(qboson::packed_model(2, 2, 0.5, 0.4), 1000000, 11);
        CAPTURE(rep.noise_floor);
        CHECK(rep.tv <= 0.01);
        CHECK(rep.atoms > 1);
    }
    SUBCASE("q = 0") {
        const auto rep = matching_test(qboson::packed_model(2, 2, 0.0, 0.4), 1000000, 12);
        CHECK(rep.tv <= 0.01);
    }
    SUBCASE("non-identity boundary") {
        const auto rep = matching_test(qboson::Model{3, 1, {2, 1, 3}, 0.3, 0.6}, 200000, 13);
        CHECK(rep.tv <= 3.0 * rep.noise_floor + 0.005);
    }
}

TEST_CASE("Gibbs invariance on enumerated ensembles") {
    const auto m = qboson::packed_model(2, 2, 0.5, 0.4);
    CHECK(gibbs_invariance_uncolored(m, 2, 1, 2, 3) == 0.0);  // one step, endpoints pinned
    CHECK(gibbs_invariance_uncolored(m, 2, 1, 1, 3) <= 1e-10);
    CHECK(gibbs_invariance_colored(m) <= 1e-10);
    CHECK(gibbs_invariance_colored(qboson::Model{2, 2, {2, 1}, 0.5, 0.4}) <= 1e-10);
    CHECK_THROWS(gibbs_invariance_uncolored(m, 2, 3, 1, 3));
    CHECK_THROWS(gibbs_invariance_colored(qboson::packed_model(3, 1, 0.5, 0.4)));
}

TEST_CASE("q-invariance harness plumbing") {
    CHECK_THROWS_AS(q_invariance_test(scaling::Variant::s6v, 1.0, 27.0, {0.0, 0.5}, 999, 1), std::invalid_argument);
    CHECK_THROWS_AS(q_invariance_test(scaling::Variant::s6v, 1.0, 27.0, {0.0}, 1000, 1), std::invalid_argument);
    const auto rep = q_invariance_test(scaling::Variant::s6v, 1.0, 27.0, {0.5, 0.5}, 1000, 3);
    CHECK(rep.ks.at({0, 1}) == 0.0);
    CHECK(rep.null_ks > 0.0);
    CHECK(rep.null_ks < 0.1);
}

TEST_CASE("one-point sheet values are deterministic per seed") {
    const auto a = one_point_sheet(scaling::Variant::s6v, 1.0, 27.0, 0.3, 0.25, 20, 5);
    const auto b = one_point_sheet(scaling::Variant::s6v, 1.0, 27.0, 0.3, 0.25, 20, 5, 3);
    CHECK(a == b);
    const auto c = one_point_sheet(scaling::Variant::asep, 0.0, 8.0, 0.3, 0.0, 20, 5);
    CHECK(c.size() == 20);
}

TEST_CASE("two-parameter stationarity at a fixed tuple") {
    const double ks = stationarity_test(0.4, 0.3, 60, 20, 0, 10, 7, 20000, 9);
    CHECK(ks <= 0.03);
}

TEST_CASE("two-point estimator") {
    TwoPointParams p;
    p.beta = 1.0;
    p.epsilon = 1.0 / 125;
    p.q = 0.0;
    p.ring_size = 64;
    p.time = 0.0;
    p.offsets = {0, 1, 5};
    p.replicas = 200;
    p.burn_in = 200.0;
    const auto est = twopoint(p, 4);
    CHECK(est.S[1][1][0] == doctest::Approx(0.25).epsilon(1e-12));
    for (std::size_t i = 1; i < 3; ++i) CHECK(std::abs(est.S[1][1][i]) <= 3.0 * est.se[1][1][i] + 1.0 / 63);
    for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
            for (double v : est.S[k][l]) CHECK(std::abs(v) <= 0.25 + 1e-12);
    p.replicas = 5;
    CHECK_THROWS_AS(twopoint(p, 4), std::invalid_argument);
    p.replicas = 20;
    p.beta = 20.0;
    CHECK_THROWS_AS(twopoint(p, 4), std::invalid_argument);
}

TEST_CASE("decoupling diagnostics") {
    const auto f = s6v::sample(s6v::packed(6), 0.4, 0.5, 6, s6v::default_row_cap(6, 6, 0.4, 0.5), SeedSpec{9});
    const auto rep = decoupling_diagnostics(f, f, 1, 6, -6, 6);
    CHECK(rep.box_clean);
    CHECK(rep.violation == 0);
    CHECK(finite_speed_failures(40, 0.3, 0.5, 50, 77) == 0);
    const auto tail = monotonicity_tail(30, 30, 0.6, 0.3, {1, 2, 4}, 100, 5);
    CHECK(tail[0] >= tail[1]);
    CHECK(tail[1] >= tail[2]);
}

TEST_CASE("degeneration proxy approaches ASEP") {
    const double ks = degeneration_ks(0.4, 5.0, 0.05, 0, 0, 2000, 3);
    CHECK(ks <= 0.08);
}

TEST_CASE("report JSON") {
    Check c{"demo", {{"q", 0.5}}, 0.001, 0.01, true, 100, 0.0, ""};
    const auto j = to_json(std::vector<Check>{c});
    CHECK(j["pass"] == true);
    CHECK(j["checks"][0]["name"] == "demo");
}

TEST_CASE("sheet replicas agree with landscape samples at s = 0") {
    const std::vector<double> xs{-0.5, 0.0, 0.5}, ys{0.0, 0.25};
    SUBCASE("asep") {
        const auto p = scaling::constants(scaling::Variant::asep, 0.2, 0.3, 0.0, 1.0 / 27);
        for (std::size_t r = 0; r < 3; ++r) {
            const auto g = sample_sheet(p, xs, ys, 4, r);
            const auto l = landscape_samples(p, 0.5, 0.0, 0.25, 1.0, r + 1, 4);
            CHECK(g.values[2][1] == doctest::Approx(l[r]).epsilon(1e-12));
        }
    }
    SUBCASE("s6v") {
        const auto p = scaling::constants(scaling::Variant::s6v, 1.0, 0.3, 0.25, 1.0 / 27);
        for (std::size_t r = 0; r < 3; ++r) {
            const auto g = sample_sheet(p, xs, ys, 4, r);
            const auto l = landscape_samples(p, -0.5, 0.0, 0.0, 1.0, r + 1, 4);
            CHECK(g.values[0][0] == doctest::Approx(l[r]).epsilon(1e-12));
        }
        CHECK_THROWS(sample_sheet(p, {-3.0}, {0.0}, 4, 0));
    }
}
