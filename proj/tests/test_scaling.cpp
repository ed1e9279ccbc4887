#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "kpzlab/asep.hpp"
#include "kpzlab/s6v.hpp"
#include "kpzlab/scaling.hpp"

using namespace kpz;
using namespace kpz::scaling;

namespace {

// One-point TASEP height #{particles right of 0 at time T} from step data at 0,
// through exponential corner growth: particle i has passed 0 once G(i, i) <= T.
std::int64_t tasep_height_lpp(double T, std::mt19937_64& rng) {
    std::exponential_distribution<double> w(1.0);
    const std::size_t n = static_cast<std::size_t>(T / 2) + 32;
    std::vector<double> G((n + 1) * (n + 1), 0.0);
    auto g = [&](std::size_t i, std::size_t j) -> double& { return G[i * (n + 1) + j]; };
    // grow the square [1,i]^2 one row and one column at a time
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t a = 1; a < i; ++a) g(a, i) = std::max(g(a - 1, i), g(a, i - 1)) + w(rng);
        for (std::size_t j = 1; j <= i; ++j) g(i, j) = std::max(g(i - 1, j), g(i, j - 1)) + w(rng);
        if (g(i, i) > T) return static_cast<std::int64_t>(i) - 1;
    }
    throw std::logic_error("corner growth ran past its buffer");
}

}  // namespace

TEST_CASE("ASEP constants at alpha = 0") {
    const auto p = constants(Variant::asep, 0.0, 0.3);
    CHECK(p.mu == doctest::Approx(0.25));
    CHECK(p.sigma == doctest::Approx(0.5));
    CHECK(p.beta == doctest::Approx(2.0));
    CHECK(p.gamma == doctest::Approx(0.7));
}

TEST_CASE("S6V constants at z = 1/4, alpha = 1") {
    const auto p = constants(Variant::s6v, 1.0, 0.0, 0.25);
    CHECK(p.mu == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));
    CHECK(p.sigma == doctest::Approx(0.4200).epsilon(1e-3));
    CHECK(p.beta == doctest::Approx(1.588).epsilon(1e-3));
    const auto edge = constants(Variant::s6v, 0.25 * (1 + 1e-12), 0.0, 0.25);
    CHECK(std::abs(edge.mu) < 1e-20);
}

TEST_CASE("scaling relations across random parameters") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const double q = 0.99 * u(rng);
        const auto a = constants(Variant::asep, -0.98 + 1.96 * u(rng), q);
        const double z = 0.02 + 0.96 * u(rng);
        const double lo = std::log(z), hi = -std::log(z);
        const auto s = constants(Variant::s6v, std::exp(lo + (hi - lo) * (0.01 + 0.98 * u(rng))), q, z);
        for (const auto& p : {a, s}) worst = std::max({worst, p.curvature_residual, p.diffusion_residual});
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("alpha outside the fan is a domain error") {
    CHECK_THROWS_AS(constants(Variant::asep, 1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(constants(Variant::asep, -1.5, 0.0), std::domain_error);
    CHECK_THROWS_AS(constants(Variant::s6v, 0.25, 0.0, 0.25), std::domain_error);
    CHECK_THROWS_AS(constants(Variant::s6v, 4.0, 0.0, 0.25), std::domain_error);
    CHECK_THROWS_AS(constants(Variant::s6v, 1.0, 1.0, 0.25), std::domain_error);
    CHECK_THROWS_AS(parse_variant("tasep"), std::invalid_argument);
}

TEST_CASE("ASEP sheet at alpha = 0 uses the plain normalization") {
    const double einv = 27.0;
    const auto p = constants(Variant::asep, 0.0, 0.0, 0.0, 1.0 / einv);
    HeightLookup h = [](std::int64_t X, std::int64_t Y) { return (X * 7 + Y * 3) % 11; };
    const double e13 = std::cbrt(1.0 / einv), e23 = std::pow(einv, 2.0 / 3.0);
    for (double x : {-1.0 / 3.0, 0.0, 2.0 / 3.0})
        for (double y : {-1.0, 1.0 / 3.0}) {
            const auto X = std::llround(2 * x * e23), Y = std::llround(2 * y * e23);
            const double plain = e13 * (einv + 2 * (x - y) * e23 - 2.0 * static_cast<double>(h(X, Y)));
            CHECK(asep_sheet(p, x, y, h) == doctest::Approx(plain).epsilon(1e-12));
        }
}

TEST_CASE("constant shift of h moves the sheet by sigma^-1 eps^1/3 c") {
    const auto pa = constants(Variant::asep, 0.2, 0.4, 0.0, 1.0 / 64);
    const auto ps = constants(Variant::s6v, 1.0, 0.4, 0.3, 1.0 / 64);
    HeightLookup h = [](std::int64_t X, std::int64_t Y) { return X - Y / 2; };
    HeightLookup h5 = [&](std::int64_t X, std::int64_t Y) { return h(X, Y) + 5; };
    const double da = 5.0 * std::cbrt(pa.epsilon) / pa.sigma, ds = 5.0 * std::cbrt(ps.epsilon) / ps.sigma;
    for (double x : {-0.7, 0.0, 0.31})
        for (double y : {-0.2, 0.45}) {
            CHECK(asep_sheet(pa, x, y, h5) == doctest::Approx(asep_sheet(pa, x, y, h) - da));
            CHECK(s6v_sheet(ps, x, y, h5, 200) == doctest::Approx(s6v_sheet(ps, x, y, h, 200) + ds));
        }
}

TEST_CASE("bilinear interpolation between lattice points") {
    const auto p = constants(Variant::asep, 0.0, 0.0, 0.0, 1.0 / 8);
    // beta eps^{-2/3} = 8, so x = k/8 are lattice points
    HeightLookup h = [](std::int64_t X, std::int64_t Y) { return (X * X + 3 * Y) % 5; };
    CHECK(stencil(p, 0.125, 0.0, 0.25, 1.0).size() == 1);
    CHECK(stencil(p, 0.0625, 0.0, 0.25, 1.0).size() == 2);
    CHECK(stencil(p, 0.0625, 0.0, 0.3, 1.0).size() == 4);
    const double mid = asep_sheet(p, 0.0625, 0.25, h);
    CHECK(mid == doctest::Approx(0.5 * (asep_sheet(p, 0.0, 0.25, h) + asep_sheet(p, 0.125, 0.25, h))));
    // round toward -infinity
    const auto st = stencil(p, -0.01, 0.0, 0.0, 1.0);
    CHECK(st.front().X == -1);
}

TEST_CASE("missing samples and out-of-domain queries are refused") {
    const auto pa = constants(Variant::asep, 0.0, 0.0, 0.0, 1.0 / 8);
    HeightTable table;
    table.set(0, 0, 3);
    CHECK(table.size() == 1);
    CHECK_NOTHROW(asep_sheet(pa, 0.0, 0.0, table.lookup()));
    CHECK_THROWS_AS(asep_sheet(pa, 0.125, 0.0, table.lookup()), MissingSample);
    CHECK_THROWS_AS(landscape(pa, 0.0, 1.0, 0.0, 1.0, table.lookup()), std::domain_error);
    CHECK_THROWS_AS(asep_sheet(constants(Variant::asep, 0.0, 0.0), 0.0, 0.0, table.lookup()), std::domain_error);

    const auto ps = constants(Variant::s6v, 1.0, 0.5, 0.25, 1.0 / 64);
    HeightLookup flat = [](std::int64_t, std::int64_t) { return 0; };
    CHECK_NOTHROW(s6v_sheet(ps, 1.9, -1.9, flat, 128));
    CHECK_THROWS_AS(s6v_sheet(ps, 2.1, 0.0, flat, 128), std::domain_error);
    CHECK_THROWS_AS(s6v_sheet(ps, 0.0, -2.1, flat, 128), std::domain_error);
    CHECK_THROWS_AS(s6v_sheet(ps, 0.0, 0.0, flat, 127), std::domain_error);
    CHECK_THROWS_AS(s6v_sheet(pa, 0.0, 0.0, flat, 128), std::invalid_argument);
}

TEST_CASE("landscape centering is additive and (0,1) gives the sheet") {
    for (const auto& p : {constants(Variant::asep, 0.3, 0.2, 0.0, 0.01), constants(Variant::s6v, 0.8, 0.2, 0.5, 0.01)}) {
        CHECK(centering(p, 0.2, 1.7) == doctest::Approx(centering(p, 0.2, 0.9) + centering(p, 0.9, 1.7)));
        HeightLookup h = [](std::int64_t X, std::int64_t Y) { return std::abs(X - Y) % 13; };
        if (p.variant == Variant::asep)
            CHECK(landscape(p, 0.1, 0.0, -0.3, 1.0, h) == asep_sheet(p, 0.1, -0.3, h));
        else
            CHECK(landscape(p, 0.1, 0.0, -0.3, 1.0, h, 200) == s6v_sheet(p, 0.1, -0.3, h, 200));
    }
    const auto pa = constants(Variant::asep, 0.0, 0.5, 0.0, 0.1);
    CHECK(landscape_times(pa, 0.5, 2.0).start == doctest::Approx(20.0));
    CHECK(landscape_times(pa, 0.5, 2.0).end == doctest::Approx(80.0));
    const auto ps = constants(Variant::s6v, 1.0, 0.5, 0.5, 0.3);
    CHECK(landscape_times(ps, 0.5, 2.0).start == 1.0);
    CHECK(landscape_times(ps, 0.5, 2.0).end == 6.0);
}

TEST_CASE("short-time sheet reduces to the packed identity") {
    // At time 0 the packed heights are (X - Y)^+.
    const auto p = constants(Variant::asep, 0.0, 0.0, 0.0, 1.0 / 8);
    HeightLookup h = [](std::int64_t X, std::int64_t Y) { return std::max<std::int64_t>(0, X - Y); };
    const double t = 1e-9;
    for (double x : {-0.5, 0.0, 0.25})
        for (double y : {-0.25, 0.0, 0.5}) {
            const double expect = 2.0 * 0.5 * (-0.5 * 8 * (y - x) - 8 * std::max(0.0, x - y));
            CHECK(landscape(p, x, 0.0, y, t, h) == doctest::Approx(expect).epsilon(1e-6));
        }
}

TEST_CASE("ASEP sheet from the packed system equals the step-coupled landscape") {
    const double einv = 8.0;
    const auto p = constants(Variant::asep, 0.0, 0.25, 0.0, 1.0 / einv);
    const auto tw = landscape_times(p, 0.0, 1.0);
    const std::int64_t L = asep::required_half_width(tw.end, 24);
    for (std::uint64_t s = 0; s < 10; ++s) {
        const SeedSpec seed{s, StreamDomain::asep_clock};
        const auto c = asep::evolve(asep::packed(L), seed, p.q, tw.end);
        HeightLookup packed_h = [&](std::int64_t X, std::int64_t Y) { return asep::colored_height(c, X, Y); };
        HeightLookup step_h = [&](std::int64_t X, std::int64_t Y) {
            return asep::height_from_profile_at(asep::step_profile(X, -L - 1, L), 0.0, seed, p.q, Y, tw.end);
        };
        for (double x : {-1.0, 0.0, 0.5})
            for (double y : {-0.5, 0.25}) CHECK(asep_sheet(p, x, y, packed_h) == landscape(p, x, 0.0, y, 1.0, step_h));
    }
}

TEST_CASE("rescaled ASEP landscape is superadditive through an intermediate time") {
    // Exact on lattice points at alpha = 0: h(x,r;y,t) <= h(x,r;z,s) + h(z,s;y,t).
    const double einv = 8.0;
    const auto p = constants(Variant::asep, 0.0, 0.5, 0.0, 1.0 / einv);
    const double r = 0.0, s = 0.5, t = 1.0;
    const auto tr = landscape_times(p, r, s), tt = landscape_times(p, s, t);
    const std::int64_t L = asep::required_half_width(tt.end, 24);
    for (std::uint64_t sd = 0; sd < 10; ++sd) {
        const SeedSpec seed{sd, StreamDomain::asep_clock};
        auto h = [&](double start, double end) {
            return [=](std::int64_t X, std::int64_t Y) {
                return asep::height_from_profile_at(asep::step_profile(X, -L - 1, L), start, seed, p.q, Y, end);
            };
        };
        HeightLookup h_rs = h(tr.start, tr.end), h_st = h(tt.start, tt.end), h_rt = h(tr.start, tt.end);
        for (double x : {-0.5, 0.25})
            for (double y : {-0.25, 0.5}) {
                const double whole = landscape(p, x, r, y, t, h_rt);
                double best = -1e300;
                for (int k = -16; k <= 16; ++k) {
                    const double zz = k / 8.0;
                    const double split = landscape(p, x, r, zz, s, h_rs) + landscape(p, zz, s, y, t, h_st);
                    CHECK(whole >= split - 1e-9);
                    best = std::max(best, split);
                }
                // the o(1) gap of the reverse inequality, tracked rather than asserted
                CHECK(whole - best >= -1e-9);
            }
    }
}

TEST_CASE("S6V sheet from step heights") {
    const double einv = 64.0;
    const auto p = constants(Variant::s6v, 1.0, 0.3, 0.25, 1.0 / einv);
    const std::int64_t N = 128;
    const auto T = static_cast<std::int64_t>(landscape_times(p, 0.0, 1.0).end);
    HeightTable table;
    const std::vector<double> xs{-1.0, 0.0, 1.0}, ys{-1.0, 0.5};
    for (auto [X, Y] : required_points(p, xs, ys))
        table.set(X, Y, s6v::step_height(N, X, Y, T, p.q, p.z, SeedSpec{3, StreamDomain::s6v_coin}));
    const auto grid = sheet_grid(p, xs, ys, table.lookup(), N);
    CHECK(grid.values.size() == 3);
    for (const auto& row : grid.values)
        for (double v : row) CHECK(std::abs(v) < 10.0);
    std::ostringstream csv;
    write_csv(csv, grid);
    std::string line;
    std::istringstream in(csv.str());
    int lines = 0;
    while (std::getline(in, line)) ++lines;
    CHECK(lines == 4);
    CHECK(csv.str().rfind("x,-1,0.5\n", 0) == 0);
    CHECK(params_json(p, 3).find("\"beta\"") != std::string::npos);
}

TEST_CASE("grid specification parsing") {
    CHECK(parse_grid("-2:2:0.25").size() == 17);
    CHECK(parse_grid("0:0:1") == std::vector<double>{0.0});
    CHECK_THROWS_AS(parse_grid("1:0:1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_grid("0:1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_grid("0:1:x"), std::invalid_argument);
}

TEST_CASE("ASEP one-point sheet at eps^-1 = 500, q = 0") {
    const double einv = 500.0;
    const auto p = constants(Variant::asep, 0.0, 0.0, 0.0, 1.0 / einv);
    const double T = landscape_times(p, 0.0, 1.0).end;
    std::mt19937_64 rng(2024);
    double sum = 0.0, sum2 = 0.0;
    const int n = 10000;
    for (int r = 0; r < n; ++r) {
        const std::int64_t h0 = tasep_height_lpp(T, rng);
        const double v = asep_sheet(p, 0.0, 0.0, [&](std::int64_t, std::int64_t) { return h0; });
        sum += v;
        sum2 += v * v;
    }
    const double mean = sum / n, var = sum2 / n - mean * mean;
    CHECK(mean < 0.0);
    CHECK(var >= 0.3);
    CHECK(var <= 2.0);
}

TEST_CASE("corner-growth one-point sampler agrees with the simulator") {
    const double T = 20.0;
    const std::int64_t L = asep::required_half_width(T, 0);
    std::mt19937_64 rng(5);
    std::vector<double> a, b;
    for (std::uint64_t s = 0; s < 2000; ++s) {
        a.push_back(static_cast<double>(tasep_height_lpp(T, rng)));
        b.push_back(static_cast<double>(asep::height_from_profile_at(asep::step_profile(0, -L - 1, L), 0.0,
                                                                      SeedSpec{s, StreamDomain::asep_clock}, 0.0, 0, T)));
    }
    auto mean = [](const std::vector<double>& v) {
        double s = 0;
        for (double x : v) s += x;
        return s / static_cast<double>(v.size());
    };
    CAPTURE(mean(a));
    CAPTURE(mean(b));
    CHECK(std::abs(mean(a) - mean(b)) < 0.3);
}

TEST_CASE("initial profile rescaling") {
    const double eps = 1.0 / 64;  // eps^{-2/3} = 16, grid step 1/32
    const auto step = init_rescale(asep::step_profile(0, -200, 200), eps);
    CHECK(step.grid_step() == doctest::Approx(1.0 / 32));
    for (double x : {0.0, 0.25, 1.0, 3.0}) CHECK(step(x) == doctest::Approx(-2.0 * x * std::pow(eps, -1.0 / 3.0)));
    CHECK(step(-1.0) == doctest::Approx(-2.0 * std::pow(eps, -1.0 / 3.0)));

    asep::BernoulliPath flat{-200, {}};
    for (std::int64_t y = -200; y <= 200; ++y) flat.values.push_back(-static_cast<std::int64_t>(std::floor((y + 1) / 2.0)));
    const auto f = init_rescale(flat, eps);
    for (int k = -150; k <= 150; ++k) CHECK(std::abs(f(k / 32.0)) <= 2.0 * std::cbrt(eps) + 1e-12);
    CHECK(f(1.0 / 64) == doctest::Approx(0.5 * (f(0.0) + f(1.0 / 32))));
    CHECK_THROWS_AS(f(100.0), std::out_of_range);
    CHECK_THROWS_AS(init_rescale(flat, 0.0), std::domain_error);

    // doubling eps^{-2/3}: the coarse grid points are every other fine grid point
    const double eps2 = eps / std::pow(2.0, 1.5);
    const auto fine = init_rescale(flat, eps2);
    const double ratio = std::cbrt(eps2 / eps);
    for (int k = -40; k <= 40; ++k) {
        const double xc = k / 32.0;
        CHECK(fine(xc * std::pow(eps2 / eps, 2.0 / 3.0)) * (1.0 / ratio) == doctest::Approx(f(xc)));
    }
}
