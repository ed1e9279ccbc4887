#include "kpzlab/suites.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "kpzlab/asep.hpp"
#include "kpzlab/lpp.hpp"
#include "kpzlab/qboson.hpp"
#include "kpzlab/s6v.hpp"
#include "kpzlab/scaling.hpp"

namespace kpz::verify {

namespace {

using nlohmann::json;
using qboson::Counts;
using qboson::Rational;

std::size_t count_or(const SuiteOptions& o, std::size_t fallback) { return o.trials ? o.trials : fallback; }

std::uint64_t sub(std::uint64_t seed, std::uint64_t i) { return mix64(seed ^ mix64(0xacce55 + i)); }

Check make(std::string name, json params, double stat, double threshold, bool pass, std::size_t n,
           double se = 0.0, std::string note = {}) {
    Check c;
    c.name = std::move(name);
    c.parameters = std::move(params);
    c.statistic = stat;
    c.threshold = threshold;
    c.pass = pass;
    c.sample_size = n;
    c.standard_error = se;
    c.note = std::move(note);
    return c;
}

Rational random_rational(CounterStream& rng) {
    const auto den = static_cast<int>(2 + rng.below(99));
    const auto num = static_cast<int>(1 + rng.below(static_cast<std::uint64_t>(den - 1)));
    return Rational(num, den);
}

json counts_json(const Counts& c) { return json(c); }

std::vector<Check> yang_baxter(const SuiteOptions& o) {
    const std::size_t trials = count_or(o, 100);
    CounterStream rng(SeedSpec{o.seed}, 1);
    Rational worst = 0;
    json details = json::array();
    std::size_t done = 0;
    while (done < trials) {
        const Rational q = random_rational(rng), x = random_rational(rng), y = random_rational(rng);
        const int N = 1 + static_cast<int>(rng.below(2));
        Counts I(static_cast<std::size_t>(N), 0);
        int left = static_cast<int>(rng.below(4));
        for (auto& v : I) {
            v = static_cast<int>(rng.below(static_cast<std::uint64_t>(left + 1)));
            left -= v;
        }
        auto color = [&] { return static_cast<int>(rng.below(static_cast<std::uint64_t>(N + 1))); };
        const int a1 = color(), i1 = color(), b2 = color(), j2 = color();
        Counts J = I;
        if (a1) ++J[a1 - 1];
        if (i1) ++J[i1 - 1];
        if (b2) --J[b2 - 1];
        if (j2) --J[j2 - 1];
        if (std::any_of(J.begin(), J.end(), [](int v) { return v < 0; }) || qboson::total(J) > 3) continue;
        const auto r = qboson::yang_baxter_check(q, x, y, a1, i1, b2, j2, I, J);
        worst = std::max(worst, r.residual());
        details.push_back({{"q", q.str()},
                           {"x", x.str()},
                           {"y", y.str()},
                           {"a1", a1},
                           {"i1", i1},
                           {"b2", b2},
                           {"j2", j2},
                           {"I", counts_json(I)},
                           {"J", counts_json(J)},
                           {"lhs", r.lhs.str()},
                           {"rhs", r.rhs.str()},
                           {"residual", r.residual().convert_to<double>()}});
        ++done;
    }
    const double stat = worst.convert_to<double>();
    auto c = make("yang-baxter max residual", {{"trials", trials}, {"max_colors", 2}, {"max_arrows", 3}}, stat,
                  1e-10, stat <= 1e-10, trials, 0.0, "exact rational arithmetic");
    c.details = std::move(details);
    return {c};
}

std::vector<Check> partition(const SuiteOptions&) {
    constexpr int K = 40;
    double worst = 0.0;
    json details = json::array();
    for (int N = 1; N <= 2; ++N)
        for (int M = 1; M <= 2; ++M)
            for (double q : {0.0, 0.3, 0.7})
                for (double z : {0.2, 0.5}) {
                    const qboson::Transfer t(qboson::packed_model(N, M, q, z));
                    const double got = t.partition(K);
                    const double want = std::pow((1 - q * z) / (1 - z), N * M);
                    worst = std::max(worst, std::abs(got - want));
                    details.push_back({{"N", N}, {"M", M}, {"q", q}, {"z", z}, {"Z", got}, {"closed_form", want},
                                       {"residual", std::abs(got - want)}});
                }
    auto c = make("partition function", {{"K", K}}, worst, 1e-8, worst <= 1e-8, details.size());
    c.details = std::move(details);
    return {c};
}

std::vector<Check> merge(const SuiteOptions&) {
    // Every weakly increasing map of [1,3] onto an initial segment.
    const std::vector<qboson::ColorMerge> taus{{0, 1, 1, 1}, {0, 1, 1, 2}, {0, 1, 2, 2}, {0, 1, 2, 3}};
    json details = json::array();
    Rational worst_exact = 0;
    double worst_double = 0.0;
    std::size_t n = 0;
    for (const auto& tau : taus) {
        const int colors = tau.back();
        std::vector<Counts> merged;
        for (int code = 0; code < static_cast<int>(std::pow(5, colors)); ++code) {
            Counts B;
            for (int c = 0, v = code; c < colors; ++c, v /= 5) B.push_back(v % 5);
            merged.push_back(std::move(B));
        }
        for (int a1 = 0; a1 <= 3; ++a1)
            for (int a2 = 0; a1 + a2 <= 3; ++a2)
                for (int a3 = 0; a1 + a2 + a3 <= 3; ++a3)
                    for (int i = 0; i <= 3; ++i)
                        for (int lambda = 0; lambda <= colors; ++lambda)
                            for (const auto& B : merged) {
                                const Counts A{a1, a2, a3};
                                for (auto [qn, qd, un, ud] : {std::array{37, 100, 4, 5}, std::array{0, 1, 1, 1}}) {
                                    const Rational q(qn, qd), u(un, ud);
                                    const Rational r = qboson::color_merge_residual(q, u, A, i, B, lambda, tau);
                                    const double rd = qboson::color_merge_residual(
                                        static_cast<double>(qn) / qd, static_cast<double>(un) / ud, A, i, B, lambda,
                                        tau);
                                    worst_exact = std::max(worst_exact, r);
                                    worst_double = std::max(worst_double, rd);
                                    ++n;
                                    if (r != 0 || rd > 1e-12)
                                        details.push_back({{"tau", tau}, {"A", A}, {"i", i}, {"B", B},
                                                           {"lambda", lambda}, {"q", q.str()}, {"u", u.str()},
                                                           {"residual", rd}});
                                }
                            }
    }
    const double stat = std::max(worst_double, worst_exact.convert_to<double>());
    auto c = make("color-merge identity", {{"N", 3}, {"max_arrows", 3}, {"points", json::array({"(0.37,0.8)", "(0,1)"})}},
                  stat, 1e-12, stat <= 1e-12, n, 0.0, "details list only nonzero residuals");
    c.details = std::move(details);
    return {c};
}

std::vector<Check> matching(const SuiteOptions& o) {
    const std::size_t samples = count_or(o, 1'000'000);
    const auto rep = matching_test(qboson::packed_model(2, 2, 0.5, 0.4), samples, o.seed, o.threads);
    auto c = make("matching TV", {{"N", 2}, {"M", 2}, {"q", 0.5}, {"z", 0.4}, {"cutoff", rep.cutoff}}, rep.tv, 0.01,
                  rep.tv <= 0.01, samples, rep.noise_floor, "standard_error is the expected TV of an exact sampler");
    return {c};
}

qboson::LineEnsemble ensemble(const qboson::Configuration& c, int k) { return qboson::line_ensemble(c, k); }

std::vector<Check> pitman_exact(const SuiteOptions& o) {
    const std::size_t samples = count_or(o, 1000);
    std::int64_t worst = 0;
    std::size_t checked = 0;
    json details = json::array();
    for (int N = 1; N <= 4; ++N)
        for (int M = 1; M <= 4; ++M) {
            const qboson::Transfer t(qboson::packed_model(N, M, 0.0, 0.5));
            const qboson::ExactSampler s(t, qboson::default_cutoff(t));
            const std::uint64_t base = sub(o.seed, static_cast<std::uint64_t>(10 * N + M));
            std::int64_t model_worst = 0;
            for (std::size_t r = 0; r < samples; ++r) {
                const auto c = s.draw(SeedSpec{replica_seed(base, r)});
                const auto L1 = ensemble(c, 1);
                for (int j = 1; j <= N; ++j) {
                    const auto Lj = ensemble(c, j);
                    for (int k = 1; k <= N; ++k) model_worst = std::max(model_worst, lpp::pitman_deviation(L1, Lj, k));
                }
                ++checked;
            }
            worst = std::max(worst, model_worst);
            details.push_back({{"N", N}, {"M", M}, {"max_deviation", model_worst}});
        }
    auto c = make("Pitman deviation at q = 0", {{"samples_per_model", samples}, {"z", 0.5}},
                  static_cast<double>(worst), 0.0, worst == 0, checked);
    c.details = std::move(details);
    return {c};
}

std::vector<Check> pitman_bound(const SuiteOptions& o) {
    const std::size_t samples = count_or(o, 1000);
    std::vector<Check> out;
    for (double q : {0.3, 0.6, 0.9}) {
        const int N = 3, M = 3;
        const qboson::Transfer t(qboson::packed_model(N, M, q, 0.5));
        const qboson::ExactSampler s(t, qboson::default_cutoff(t));
        const std::uint64_t base = sub(o.seed, static_cast<std::uint64_t>(q * 1000));
        std::size_t violations = 0;
        std::int64_t worst = 0;
        for (std::size_t r = 0; r < samples; ++r) {
            const auto c = s.draw(SeedSpec{replica_seed(base, r)});
            const auto L1 = ensemble(c, 1);
            bool bad = false;
            for (int j = 1; j <= N; ++j) {
                const auto Lj = ensemble(c, j);
                for (int k = 1; k <= N; ++k) {
                    const auto sf = lpp::pitman_lower_bound_shortfall(L1, Lj, k);
                    worst = std::max(worst, sf);
                    bad = bad || sf > 0;
                }
            }
            violations += bad;
        }
        out.push_back(make("Pitman lower bound violations", {{"q", q}, {"z", 0.5}, {"N", N}, {"M", M}},
                           static_cast<double>(violations), 0.0, violations == 0, samples, 0.0,
                           "worst shortfall " + std::to_string(worst)));
    }
    return out;
}

std::vector<Check> gibbs(const SuiteOptions&) {
    std::vector<Check> out;
    struct Case {
        int N, M, m, i, a, b;
        bool rows;
    };
    // Without row factors the kernel is only claimed on rows <= N.
    for (const Case& k : {Case{2, 2, 2, 1, 1, 3, true}, Case{2, 2, 2, 1, 0, 4, true}, Case{2, 2, 3, 2, 0, 4, true},
                          Case{3, 1, 2, 1, 0, 2, false}, Case{3, 1, 3, 2, 0, 3, false}}) {
        const double tv = gibbs_invariance_uncolored(qboson::packed_model(k.N, k.M, 0.5, 0.4), k.m, k.i, k.a, k.b, k.rows);
        out.push_back(make("HL Gibbs invariance",
                           {{"N", k.N}, {"M", k.M}, {"q", 0.5}, {"z", 0.4}, {"curves", k.m}, {"curve", k.i},
                            {"interval", {k.a, k.b}}, {"row_factors", k.rows}},
                           tv, 1e-10, tv <= 1e-10, 1));
    }
    for (const auto& sigma : {std::vector<int>{1, 2}, std::vector<int>{2, 1}}) {
        const double tv = gibbs_invariance_colored(qboson::Model{2, 2, sigma, 0.5, 0.4});
        out.push_back(make("colored Gibbs invariance", {{"N", 2}, {"M", 2}, {"q", 0.5}, {"z", 0.4}, {"sigma", sigma}}, tv,
                           1e-10, tv <= 1e-10, 1));
    }
    // One curve above a fixed lower neighbour: the higher of the two bridges.
    const auto law = qboson::hl_gibbs_law({qboson::Path{0, 0, -1}}, std::nullopt, qboson::Path{-2, -3, -3}, 0.5);
    double p_high = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t k = 0; k < law.outcomes.size(); ++k)
        if (law.outcomes[k][0] == qboson::Path{0, 0, -1}) p_high = law.probabilities[k];
    const double q3 = std::pow(0.5, 3);
    const double want = (1 - q3) / (2 - q3);
    const double err = std::abs(p_high - want);
    out.push_back(make("Gibbs kernel closed form", {{"q", 0.5}, {"k", 2}, {"expected", want}}, err, 1e-14,
                       err <= 1e-14, 1, 0.0, "probability of the higher bridge " + std::to_string(p_high)));
    return out;
}

std::vector<Check> inequalities(const SuiteOptions& o) {
    const std::size_t seeds = count_or(o, 100);
    constexpr std::int64_t W = 400;
    constexpr double t = 50.0, q = 0.5;
    const std::int64_t radius = W - static_cast<std::int64_t>(std::ceil(4 * t)) - 8;

    struct Tally {
        std::size_t monotone = 0, quadrangle = 0, crossing = 0, ordering = 0, conservation = 0;
    };
    const auto tallies = parallel_map<Tally>(seeds, o.threads, [&](std::size_t r) {
        Tally v;
        const SeedSpec clocks{replica_seed(sub(o.seed, 1), r), StreamDomain::asep_clock};

        const auto h0 = asep::bernoulli_profile(0.5, -W, W, SeedSpec{replica_seed(sub(o.seed, 2), r)});
        const auto g0 = asep::bernoulli_profile(0.3, -W, W, SeedSpec{replica_seed(sub(o.seed, 3), r)});
        std::int64_t H = 0;
        for (std::int64_t y = -W; y <= W; ++y) H = std::max(H, g0.at(y) - h0.at(y));
        const auto coupled = asep::basic_couple({{h0, 0.0}, {g0, 0.0}}, clocks, q, t);
        for (std::int64_t y = -W; y <= W; ++y) v.monotone += coupled[1].at(y) > coupled[0].at(y) + H;

        const auto start = asep::packed(W);
        const auto c = asep::evolve(start, clocks, q, t);
        auto a = start.colors, b = c.colors;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        v.conservation += a != b;

        std::vector<std::int64_t> xs;
        for (std::int64_t x = -radius; x <= radius; x += 16) xs.push_back(x);
        std::vector<std::vector<std::int64_t>> h(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i)
            for (std::int64_t y = -radius; y <= radius; ++y) h[i].push_back(asep::colored_height(c, xs[i], y));
        const auto n_y = static_cast<std::size_t>(2 * radius + 1);
        for (std::size_t i = 0; i + 1 < xs.size(); ++i)
            for (std::size_t y = 0; y < n_y; ++y) {
                const auto lo = h[i][y], hi = h[i + 1][y];
                v.ordering += hi < lo || hi > lo + (xs[i + 1] - xs[i]);
            }
        for (std::size_t i = 0; i < xs.size(); i += 3)
            for (std::size_t j = i; j < xs.size(); j += 4)
                for (std::size_t y1 = 0; y1 < n_y; y1 += 7)
                    for (std::size_t y2 = y1; y2 < n_y; y2 += 11)
                        v.quadrangle += h[j][y1] + h[i][y2] < h[i][y1] + h[j][y2];

        // Ordered curves read off the sample form an LPP environment.
        lpp::Environment env{0, {}};
        for (int k = 1; k <= 4; ++k) {
            lpp::Path f;
            for (std::int64_t y = -24; y <= 24; ++y) f.push_back(asep::colored_height(c, 8 - 4 * k, y));
            env.curves.push_back(std::move(f));
        }
        std::vector<std::int64_t> grid;
        for (std::int64_t z = 0; z <= env.hi(); z += 3) grid.push_back(z);
        for (std::int64_t y1 = 0; y1 < env.hi(); y1 += 4)
            for (std::int64_t y2 = y1 + 1; y2 <= env.hi(); y2 += 5) v.crossing += !lpp::crossing_check(env, 4, grid, y1, y2);
        for (std::int64_t x = 0; x <= env.hi(); x += 4) v.crossing += !lpp::modified_lpp_monotone(env, 4, grid, x);
        return v;
    });

    // S6V: quadrangle and arrow conservation on packed fields.
    const std::int64_t N = 40, T = 50;
    const double qs = 0.5, z = 0.3;
    const auto s6v_tallies = parallel_map<Tally>(seeds, o.threads, [&](std::size_t r) {
        Tally v;
        const auto f = s6v::sample(s6v::packed(N), qs, z, T, s6v::default_row_cap(N, T, qs, z),
                                   SeedSpec{replica_seed(sub(o.seed, 4), r), StreamDomain::s6v_coin});
        std::vector<std::int32_t> exits;
        for (std::int64_t k = f.bottom; k <= f.row_cap; ++k)
            if (f.horizontal_exit(T, k) != s6v::NO_ARROW) exits.push_back(f.horizontal_exit(T, k));
        std::sort(exits.begin(), exits.end());
        std::vector<std::int32_t> want;
        for (std::int64_t k = -N; k <= N; ++k) want.push_back(static_cast<std::int32_t>(k));
        v.conservation += exits != want;
        std::vector<std::vector<std::int64_t>> h;
        for (std::int32_t x = -N; x <= N; x += 4) {
            h.emplace_back();
            for (std::int64_t y = -N; y <= N + T; y += 4) h.back().push_back(colored_height(f, x, y, T));
        }
        for (std::size_t i = 0; i < h.size(); ++i)
            for (std::size_t j = i; j < h.size(); ++j)
                for (std::size_t y1 = 0; y1 < h[i].size(); ++y1)
                    for (std::size_t y2 = y1; y2 < h[i].size(); ++y2)
                        v.quadrangle += h[i][y1] + h[j][y2] < h[i][y2] + h[j][y1];
        return v;
    });

    Tally sum;
    for (const auto* set : {&tallies, &s6v_tallies})
        for (const auto& v : *set) {
            sum.monotone += v.monotone;
            sum.quadrangle += v.quadrangle;
            sum.crossing += v.crossing;
            sum.ordering += v.ordering;
            sum.conservation += v.conservation;
        }
    const json asep_params{{"window", W}, {"t", t}, {"q", q}, {"seeds", seeds}};
    const json both{{"asep", asep_params}, {"s6v", {{"N", N}, {"T", T}, {"q", qs}, {"z", z}, {"seeds", seeds}}}};
    auto line = [&](std::string name, std::size_t bad, const json& p) {
        return make(std::move(name), p, static_cast<double>(bad), 0.0, bad == 0, seeds);
    };
    return {line("ASEP height monotonicity violations", sum.monotone, asep_params),
            line("quadrangle violations", sum.quadrangle, both),
            line("crossing monotonicity violations", sum.crossing, asep_params),
            line("colored height ordering violations", sum.ordering, asep_params),
            line("color conservation violations", sum.conservation, both)};
}

std::vector<Check> color_merging(const SuiteOptions& o) {
    const std::size_t seeds = count_or(o, 100);
    const double t = 50.0;
    const std::int64_t L = asep::required_half_width(t, 10);
    const auto asep_bad = parallel_map<int>(seeds, o.threads, [&](std::size_t r) {
        const std::int32_t x = static_cast<std::int32_t>(r % 11) - 5;
        const asep::ColorMap tau = [x](std::int32_t c) { return c >= -x ? 1 : 0; };
        const SeedSpec s{replica_seed(sub(o.seed, 1), r), StreamDomain::asep_clock};
        const auto c = asep::packed(L);
        return asep::merge_colors(asep::evolve(c, s, 0.5, t), tau) == asep::evolve(asep::merge_colors(c, tau), s, 0.5, t)
                   ? 0
                   : 1;
    });
    const std::int64_t N = 20, T = 20;
    const double q = 0.5, z = 0.3;
    const auto s6v_bad = parallel_map<int>(seeds, o.threads, [&](std::size_t r) {
        const std::int32_t x = static_cast<std::int32_t>(r % 41) - 20;
        const s6v::ColorMap tau = [x](std::int32_t c) { return c >= x ? 1 : s6v::NO_ARROW; };
        const SeedSpec s{replica_seed(sub(o.seed, 2), r), StreamDomain::s6v_coin};
        const auto cap = s6v::default_row_cap(N, T, q, z);
        const auto lhs = s6v::merge_colors(s6v::sample(s6v::packed(N), q, z, T, cap, s), tau);
        const auto rhs = s6v::sample(s6v::merge_colors(s6v::packed(N), tau), q, z, T, cap, s);
        return lhs.horizontal == rhs.horizontal && lhs.vertical == rhs.vertical ? 0 : 1;
    });
    const auto a = static_cast<std::size_t>(std::count(asep_bad.begin(), asep_bad.end(), 1));
    const auto b = static_cast<std::size_t>(std::count(s6v_bad.begin(), s6v_bad.end(), 1));
    return {make("ASEP merge/evolve mismatches", {{"half_width", L}, {"t", t}, {"q", 0.5}}, static_cast<double>(a), 0.0,
                 a == 0, seeds),
            make("S6V merge/sample mismatches", {{"N", N}, {"T", T}, {"q", q}, {"z", z}}, static_cast<double>(b), 0.0,
                 b == 0, seeds)};
}

std::vector<Check> q_invariance(const SuiteOptions& o) {
    const std::size_t replicas = count_or(o, 10'000);
    const double alpha = 1.0, z = 0.25;
    const std::vector<double> eps_inv{125.0, 500.0};
    const auto trend = q_invariance_trend(scaling::Variant::s6v, alpha, eps_inv, 0.0, 0.5, replicas, o.seed, z, o.threads);
    const auto same = q_invariance_test(scaling::Variant::s6v, alpha, eps_inv.front(), {0.5, 0.5}, replicas, sub(o.seed, 9),
                                        z, o.threads);
    const json p{{"variant", "s6v"}, {"alpha", alpha}, {"z", z}, {"q", {0.0, 0.5}}, {"eps_inv", eps_inv}};
    const double dkw = 1.36 * std::sqrt(2.0 / static_cast<double>(replicas));
    std::vector<Check> out;
    out.push_back(make("KS(q=0, q=0.5) at eps^-1 = 500", p, trend.ks.back(), 0.05, trend.ks.back() <= 0.05, replicas,
                       same.null_ks, "standard_error is the KS of two independent same-q runs"));
    out.push_back(make("KS(q=0, q=0.5) non-increasing in eps^-1", {{"ks", trend.ks}, {"eps_inv", eps_inv}},
                       trend.ks.back() - trend.ks.front(), 0.0, trend.non_increasing, replicas, dkw,
                       "statistic is KS(500) - KS(125)"));
    out.push_back(make("KS(q, q) with shared randomness", p, same.ks.at({0, 1}), 0.01, same.ks.at({0, 1}) <= 0.01,
                       replicas, same.null_ks));
    return out;
}

std::vector<Check> stationarity(const SuiteOptions& o) {
    const std::size_t samples = count_or(o, 100'000);
    const double q = 0.4, z = 0.3;
    const std::int64_t N = 60, t = 20, x = 0, y = 10, r = 7;
    const double ks = stationarity_test(q, z, N, t, x, y, r, samples, o.seed, o.threads);
    return {make("S6V two-parameter stationarity KS",
                 {{"q", q}, {"z", z}, {"N", N}, {"t", t}, {"x", x}, {"y", y}, {"shift", r}}, ks, 0.03, ks <= 0.03,
                 samples, 1.36 * std::sqrt(2.0 / static_cast<double>(samples)),
                 "compares h + x - N so the finite top boundary does not enter")};
}

std::vector<Check> degeneration(const SuiteOptions& o) {
    const std::size_t replicas = count_or(o, 10'000);
    const double q = 0.4, t = 20.0;
    const std::vector<double> deltas{0.1, 0.05, 0.02};
    std::vector<double> ks;
    for (std::size_t i = 0; i < deltas.size(); ++i)
        ks.push_back(degeneration_ks(q, t, deltas[i], 0, 0, replicas, sub(o.seed, i), o.threads));
    bool decreasing = true;
    for (std::size_t i = 1; i < ks.size(); ++i) decreasing = decreasing && ks[i] < ks[i - 1];
    const json p{{"q", q}, {"t", t}, {"delta", deltas}, {"ks", ks}};
    const double se = 1.36 * std::sqrt(2.0 / static_cast<double>(replicas));
    return {make("degeneration KS decreasing in delta", p, ks.back() - ks.front(), 0.0, decreasing, replicas, se),
            make("degeneration KS at delta = 0.02", p, ks.back(), 0.05, ks.back() <= 0.05, replicas, se)};
}

std::vector<Check> scaling_relations(const SuiteOptions& o) {
    const std::size_t draws = count_or(o, 100);
    CounterStream rng(SeedSpec{o.seed}, 13);
    std::vector<Check> out;
    for (auto variant : {scaling::Variant::asep, scaling::Variant::s6v}) {
        double worst = 0.0;
        json details = json::array();
        for (std::size_t i = 0; i < draws; ++i) {
            const double q = 0.99 * rng.uniform();
            double alpha = 0.0, z = 0.0;
            if (variant == scaling::Variant::asep) {
                alpha = 1.96 * rng.uniform() - 0.98;
            } else {
                z = 0.05 + 0.9 * rng.uniform();
                const double lo = std::log(z), hi = -std::log(z);
                alpha = std::exp(lo + (hi - lo) * (0.01 + 0.98 * rng.uniform()));
            }
            const auto p = scaling::constants(variant, alpha, q, z);
            worst = std::max({worst, p.curvature_residual, p.diffusion_residual});
            details.push_back({{"alpha", alpha}, {"q", q}, {"z", z}, {"curvature", p.curvature_residual},
                               {"diffusion", p.diffusion_residual}});
        }
        auto c = make("scaling relation residuals (" + scaling::to_string(variant) + ")", {{"draws", draws}}, worst,
                      1e-12, worst <= 1e-12, draws);
        c.details = std::move(details);
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<Check> finite_speed(const SuiteOptions& o) {
    const std::size_t seeds = count_or(o, 50);
    const std::int64_t N1 = 40;
    const double q = 0.3, z = 0.5;
    const auto fails = finite_speed_failures(N1, q, z, seeds, o.seed);
    const std::vector<std::int64_t> levels{1, 2, 4, 8, 16};
    const auto tail = monotonicity_tail(30, 30, 0.6, 0.3, levels, 2 * seeds, sub(o.seed, 1));
    bool non_increasing = true;
    for (std::size_t i = 1; i < tail.size(); ++i) non_increasing = non_increasing && tail[i] <= tail[i - 1];
    return {make("finite speed of discrepancy", {{"N1", N1}, {"q", q}, {"z", z}}, static_cast<double>(fails), 0.0,
                 fails == 0, seeds),
            make("monotonicity violation tail non-increasing",
                 {{"N", 30}, {"T", 30}, {"q", 0.6}, {"z", 0.3}, {"levels", levels}, {"tail", tail}},
                 tail.back() - tail.front(), 0.0, non_increasing, 2 * seeds)};
}

std::vector<Check> twopoint_suite(const SuiteOptions& o) {
    std::vector<Check> out;
    {
        TwoPointParams p;
        p.beta = 1.0;
        p.epsilon = 1.0 / 125;
        p.ring_size = 64;
        p.time = 0.0;
        p.offsets = {0, 1, 2, 5, 17};
        p.replicas = count_or(o, 200);
        const auto est = twopoint(p, sub(o.seed, 0), o.threads);
        const double diag = std::abs(est.S[1][1][0] - 0.25);
        out.push_back(make("S22(0,0) = 1/4", {{"ring", p.ring_size}, {"replicas", p.replicas}}, diag, 1e-12,
                           diag <= 1e-12 + 3 * est.se[1][1][0], p.replicas, est.se[1][1][0],
                           "statistic is |S22(0,0) - 1/4|"));
        // With exactly R/2 particles of color 2 the covariance at x != 0 is -1/(4(R-1)).
        const double bias = -0.25 / static_cast<double>(p.ring_size - 1);
        double worst = 0.0;
        bool ok = true;
        for (std::size_t i = 1; i < p.offsets.size(); ++i) {
            const double dev = std::abs(est.S[1][1][i] - bias);
            worst = std::max(worst, dev / std::max(est.se[1][1][i], 1e-300));
            ok = ok && dev <= 3 * est.se[1][1][i];
        }
        out.push_back(make("S22(0,x) = 0 for x != 0", {{"ring", p.ring_size}, {"offsets", p.offsets}, {"bias", bias}},
                           worst, 3.0, ok, p.replicas, 0.0,
                           "statistic is the largest deviation in standard errors after the fixed-count correction"));
    }
    {
        std::vector<double> sums, ses;
        const std::vector<double> betas{1.0, 2.0, 4.0};
        TwoPointParams p;
        p.epsilon = 1.0 / 125;
        p.ring_size = 512;
        p.time = 2.0 / p.epsilon;
        for (std::int64_t x = -100; x <= 100; ++x) p.offsets.push_back(x);
        p.replicas = count_or(o, 10);
        p.origins = 20;
        for (double beta : betas) {
            p.beta = beta;
            const auto est = twopoint(p, sub(o.seed, 1), o.threads);
            sums.push_back(std::abs(est.window_sum[0][1]));
            ses.push_back(est.window_se[0][1]);
        }
        bool decreasing = true;
        for (std::size_t i = 1; i < sums.size(); ++i) decreasing = decreasing && sums[i] < sums[i - 1];
        out.push_back(make("|sum S12| decreasing in beta",
                           {{"beta", betas}, {"abs_window_sum", sums}, {"standard_errors", ses}, {"epsilon", p.epsilon},
                            {"ring", p.ring_size}, {"t", p.time}, {"window", {-100, 100}}, {"origins", p.origins}},
                           sums.back() - sums.front(), 0.0, decreasing, p.replicas * p.origins, ses.front(),
                           "S12 summed over offsets within 2 rescaled units of the color-2 characteristic"));
    }
    return out;
}

using Runner = std::vector<Check> (*)(const SuiteOptions&);

struct Entry {
    SuiteInfo info;
    Runner run;
};

const std::vector<Entry>& registry() {
    static const std::vector<Entry> r{
        {{"yang-baxter", "Yang-Baxter equation on random boundaries (exact rationals)"}, yang_baxter},
        {{"partition", "q-Boson partition function against its closed form"}, partition},
        {{"merge", "single-vertex color-merging weight identity"}, merge},
        {{"matching", "exact q-Boson top curves against S6V Monte Carlo"}, matching},
        {{"pitman-exact", "Pitman representation exact at q = 0"}, pitman_exact},
        {{"pitman-bound", "one-sided Pitman bound at q > 0"}, pitman_bound},
        {{"gibbs", "Hall-Littlewood and colored Gibbs invariance"}, gibbs},
        {{"inequalities", "deterministic inequalities on sampled replicas"}, inequalities},
        {{"color-merging", "pathwise color merging for ASEP and S6V"}, color_merging},
        {{"q-invariance", "q-invariance of the rescaled one-point law"}, q_invariance},
        {{"stationarity", "two-parameter stationarity of S6V heights"}, stationarity},
        {{"degeneration", "S6V to ASEP degeneration"}, degeneration},
        {{"scaling", "scaling relations on random parameters"}, scaling_relations},
        {{"finite-speed", "finite speed of discrepancy and monotonicity tail"}, finite_speed},
        {{"twopoint", "two-point estimator sanity and decoupling in beta"}, twopoint_suite},
    };
    return r;
}

}  // namespace

const std::vector<SuiteInfo>& suites() {
    static const std::vector<SuiteInfo> s = [] {
        std::vector<SuiteInfo> v;
        for (const auto& e : registry()) v.push_back(e.info);
        return v;
    }();
    return s;
}

std::vector<Check> run_suite(const std::string& name, const SuiteOptions& options) {
    for (const auto& e : registry())
        if (e.info.name == name) return e.run(options);
    throw std::invalid_argument("unknown suite '" + name + "'");
}

bool all_pass(const std::vector<Check>& checks) {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

}  // namespace kpz::verify
