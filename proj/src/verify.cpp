#include "kpzlab/verify.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <numbers>
#include <stdexcept>
#include <tuple>

#include "kpzlab/asep.hpp"

namespace kpz::verify {

unsigned default_threads() {
    if (const char* env = std::getenv("KPZLAB_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v >= 1) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
        throw std::invalid_argument(std::string("KPZLAB_THREADS must be a positive integer, got '") + env + "'");
    }
    return 1;
}

EmpiricalDistribution::EmpiricalDistribution(const std::vector<double>& values, std::string prov)
    : provenance(std::move(prov)) {
    for (double v : values) add(v);
}

void EmpiricalDistribution::add(double value, double weight) {
    if (!(weight >= 0.0) || !std::isfinite(value)) throw std::invalid_argument("bad sample or weight");
    weights_[value] += weight;
    ++samples_;
}

void EmpiricalDistribution::merge(const EmpiricalDistribution& other) {
    for (const auto& [v, w] : other.weights_) weights_[v] += w;
    samples_ += other.samples_;
}

double EmpiricalDistribution::total() const {
    double s = 0.0;
    for (const auto& [v, w] : weights_) s += w;
    return s;
}

double EmpiricalDistribution::cdf(double x) const {
    const double tot = total();
    if (tot <= 0.0) throw std::invalid_argument("empty distribution");
    double s = 0.0;
    for (auto it = weights_.begin(); it != weights_.end() && it->first <= x; ++it) s += it->second;
    return s / tot;
}

double EmpiricalDistribution::mean() const {
    const double tot = total();
    if (tot <= 0.0) throw std::invalid_argument("empty distribution");
    double s = 0.0;
    for (const auto& [v, w] : weights_) s += v * w;
    return s / tot;
}

double EmpiricalDistribution::variance() const {
    const double m = mean(), tot = total();
    double s = 0.0;
    for (const auto& [v, w] : weights_) s += (v - m) * (v - m) * w;
    return s / tot;
}

double ks_distance(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
    const double ta = a.total(), tb = b.total();
    if (ta <= 0.0 || tb <= 0.0) throw std::invalid_argument("ks_distance: empty distribution");
    auto ia = a.weights().begin(), ib = b.weights().begin();
    double fa = 0.0, fb = 0.0, best = 0.0;
    while (ia != a.weights().end() || ib != b.weights().end()) {
        double x;
        if (ib == b.weights().end() || (ia != a.weights().end() && ia->first <= ib->first))
            x = ia->first;
        else
            x = ib->first;
        while (ia != a.weights().end() && ia->first == x) fa += (ia++)->second;
        while (ib != b.weights().end() && ib->first == x) fb += (ib++)->second;
        best = std::max(best, std::abs(fa / ta - fb / tb));
    }
    return best;
}

double tv_distance(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
    return tv_distance(a.weights(), b.weights());
}

nlohmann::json to_json(const Check& c) {
    nlohmann::json j{{"name", c.name},
                     {"parameters", c.parameters},
                     {"statistic", c.statistic},
                     {"threshold", c.threshold},
                     {"pass", c.pass},
                     {"sample_size", c.sample_size},
                     {"standard_error", c.standard_error}};
    if (!c.note.empty()) j["note"] = c.note;
    if (!c.details.is_null()) j["details"] = c.details;
    return j;
}

nlohmann::json to_json(const std::vector<Check>& checks) {
    nlohmann::json arr = nlohmann::json::array();
    bool all = true;
    for (const auto& c : checks) {
        arr.push_back(to_json(c));
        all = all && c.pass;
    }
    return {{"checks", arr}, {"pass", all}};
}

namespace {

SeedSpec s6v_seed(std::uint64_t master, std::uint64_t r) {
    return SeedSpec{replica_seed(master, r), StreamDomain::s6v_coin};
}

SeedSpec asep_seed(std::uint64_t master, std::uint64_t r) {
    return SeedSpec{replica_seed(master, r), StreamDomain::asep_clock};
}

// Independent master seed for the i-th sub-run of a test.
std::uint64_t substream(std::uint64_t master, std::uint64_t i) { return mix64(master ^ mix64(0x51ed + i)); }

// Sub-run keyed by a parameter value: equal values share their randomness.
std::uint64_t substream_of(std::uint64_t master, double value) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, &value, sizeof bits);
    return mix64(master ^ mix64(bits + 0x9e37));
}

std::vector<std::int64_t> top_heights(const qboson::Word& w, int N) {
    std::vector<std::int64_t> key;
    for (int k = 1; k <= N; ++k)
        for (int y = 1; y <= N - 1; ++y) {
            std::int64_t h = 0;
            for (std::size_t r = static_cast<std::size_t>(y); r < w.size(); ++r) h += w[r] >= k ? 1 : 0;
            key.push_back(h);
        }
    return key;
}

}  // namespace

MatchingReport matching_test(const qboson::Model& model, std::size_t samples, std::uint64_t seed,
                             unsigned threads) {
    model.validate();
    if (samples == 0) throw std::invalid_argument("matching test needs at least one sample");
    MatchingReport rep;
    rep.samples = samples;
    const int N = model.N;
    if (N == 1) return rep;  // no y in [1, N-1]

    const qboson::Transfer transfer(model);
    rep.cutoff = qboson::default_cutoff(transfer);
    for (const auto& [tuple, p] : transfer.exit_law(rep.cutoff, 1)) rep.exact[top_heights(tuple[0], N)] += p;
    rep.atoms = rep.exact.size();

    s6v::Boundary boundary{1, {}, 0};
    for (int c : model.sigma) boundary.colors.push_back(c);
    std::vector<std::int64_t> totals(static_cast<std::size_t>(N) + 1, 0);
    for (int k = 1; k <= N; ++k)
        for (int c : model.sigma) totals[static_cast<std::size_t>(k)] += c >= k ? 1 : 0;

    const auto keys = parallel_map<std::vector<std::int64_t>>(samples, threads, [&](std::size_t r) {
        const auto exits = s6v::exits_below(boundary, model.q, model.z, model.M, N - 1, s6v_seed(seed, r));
        std::vector<std::int64_t> key;
        for (int k = 1; k <= N; ++k)
            for (int y = 1; y <= N - 1; ++y) {
                std::int64_t below = 0;
                for (int row = 1; row <= y; ++row) below += exits[static_cast<std::size_t>(row - 1)] >= k ? 1 : 0;
                key.push_back(totals[static_cast<std::size_t>(k)] - below);
            }
        return key;
    });
    for (const auto& k : keys) rep.empirical[k] += 1.0 / static_cast<double>(samples);
    rep.tv = tv_distance(rep.exact, rep.empirical);
    for (const auto& [k, p] : rep.exact)
        rep.noise_floor += 0.5 * std::sqrt(2.0 * p * (1.0 - p) / (std::numbers::pi * static_cast<double>(samples)));
    return rep;
}

std::vector<double> one_point_sheet(scaling::Variant variant, double alpha, double eps_inv, double q, double z,
                                    std::size_t replicas, std::uint64_t seed, unsigned threads) {
    const auto p = scaling::constants(variant, alpha, q, z, 1.0 / eps_inv);
    const auto pts = scaling::stencil(p, 0.0, 0.0, 0.0, 1.0);
    const auto times = scaling::landscape_times(p, 0.0, 1.0);
    if (variant == scaling::Variant::asep) {
        std::int64_t radius = 0;
        for (const auto& pt : pts) radius = std::max({radius, std::abs(pt.X), std::abs(pt.Y)});
        const std::int64_t L = asep::required_half_width(times.end, radius);
        return parallel_map<double>(replicas, threads, [&](std::size_t r) {
            const SeedSpec s = asep_seed(seed, r);
            std::map<std::int64_t, asep::BernoulliPath> by_x;
            for (const auto& pt : pts)
                if (!by_x.count(pt.X))
                    by_x[pt.X] = asep::height_from_profile(asep::step_profile(pt.X, -L - 1, L), 0.0, s, q, times.end);
            return scaling::asep_sheet(p, 0.0, 0.0,
                                       [&](std::int64_t X, std::int64_t Y) { return by_x.at(X).at(Y); });
        });
    }
    const auto N = static_cast<std::int64_t>(std::ceil(2.0 * alpha * eps_inv));
    const auto T = static_cast<std::int64_t>(times.end);
    return parallel_map<double>(replicas, threads, [&](std::size_t r) {
        const SeedSpec s = s6v_seed(seed, r);
        scaling::HeightTable table;
        for (const auto& pt : pts) table.set(pt.X, pt.Y, s6v::step_height(N, pt.X, pt.Y, T, q, z, s));
        return scaling::s6v_sheet(p, 0.0, 0.0, table.lookup(), N);
    });
}

namespace {

std::int64_t sheet_N(const scaling::ScalingParams& p) {
    return static_cast<std::int64_t>(std::ceil(2.0 * p.alpha * p.inv_eps()));
}

}  // namespace

scaling::SheetGrid sample_sheet(const scaling::ScalingParams& p, const std::vector<double>& xs,
                                const std::vector<double>& ys, std::uint64_t seed, std::size_t r) {
    const auto pts = scaling::required_points(p, xs, ys);
    const auto times = scaling::landscape_times(p, 0.0, 1.0);
    scaling::HeightTable table;
    if (p.variant == scaling::Variant::asep) {
        std::int64_t radius = 0;
        for (const auto& [X, Y] : pts) radius = std::max({radius, std::abs(X), std::abs(Y)});
        const std::int64_t L = asep::required_half_width(times.end, radius);
        const auto c = asep::evolve(asep::packed(L), asep_seed(seed, r), p.q, times.end);
        for (const auto& [X, Y] : pts) table.set(X, Y, asep::colored_height(c, X, Y));
        return scaling::sheet_grid(p, xs, ys, table.lookup());
    }
    const std::int64_t N = sheet_N(p);
    for (double x : xs)
        for (double y : ys) scaling::check_domain(p, x, 0.0, y, 1.0, N);
    const auto T = static_cast<std::int64_t>(times.end);
    const auto f = s6v::sample(s6v::packed(N), p.q, p.z, T, s6v::default_row_cap(N, T, p.q, p.z), s6v_seed(seed, r));
    for (const auto& [X, Y] : pts)
        table.set(X, Y, s6v::colored_height(f, static_cast<std::int32_t>(X), Y, T));
    return scaling::sheet_grid(p, xs, ys, table.lookup(), N);
}

std::vector<double> landscape_samples(const scaling::ScalingParams& p, double x, double s, double y, double t,
                                      std::size_t replicas, std::uint64_t seed, unsigned threads) {
    const auto pts = scaling::stencil(p, x, s, y, t);
    const auto times = scaling::landscape_times(p, s, t);
    std::int64_t radius = 0;
    for (const auto& pt : pts) radius = std::max({radius, std::abs(pt.X), std::abs(pt.Y)});
    if (p.variant == scaling::Variant::asep) {
        const std::int64_t L = asep::required_half_width(times.end, radius);
        return parallel_map<double>(replicas, threads, [&](std::size_t r) {
            const SeedSpec sd = asep_seed(seed, r);
            std::map<std::int64_t, asep::BernoulliPath> by_x;
            for (const auto& pt : pts)
                if (!by_x.count(pt.X))
                    by_x[pt.X] = asep::height_from_profile(asep::step_profile(pt.X, -L - 1, L), times.start, sd, p.q,
                                                           times.end);
            return scaling::landscape(p, x, s, y, t, [&](std::int64_t X, std::int64_t Y) { return by_x.at(X).at(Y); });
        });
    }
    const std::int64_t N = sheet_N(p);
    scaling::check_domain(p, x, s, y, t, N);
    const auto start = static_cast<std::int64_t>(times.start), end = static_cast<std::int64_t>(times.end);
    return parallel_map<double>(replicas, threads, [&](std::size_t r) {
        const SeedSpec sd = s6v_seed(seed, r);
        scaling::HeightTable table;
        for (const auto& pt : pts) {
            // packed data merged at threshold X: arrows on rows max(X, -N)..N
            asep::BernoulliPath h0{-N - 1, {}};
            for (std::int64_t k = -N - 1; k <= N; ++k) h0.values.push_back(std::max<std::int64_t>(0, N - std::max(k, pt.X - 1)));
            table.set(pt.X, pt.Y, s6v::height_general(h0, start, sd, p.q, p.z, pt.Y, end));
        }
        return scaling::landscape(p, x, s, y, t, table.lookup(), N);
    });
}

InvarianceReport q_invariance_test(scaling::Variant variant, double alpha, double eps_inv,
                                   const std::vector<double>& qs, std::size_t replicas, std::uint64_t seed,
                                   double z, unsigned threads) {
    if (qs.size() < 2) throw std::invalid_argument("q-invariance needs at least two values of q");
    if (replicas < 1000) throw std::invalid_argument("q-invariance needs at least 1000 replicas");
    InvarianceReport rep;
    rep.qs = qs;
    rep.replicas = replicas;
    std::vector<EmpiricalDistribution> d;
    for (std::size_t i = 0; i < qs.size(); ++i)
        d.emplace_back(one_point_sheet(variant, alpha, eps_inv, qs[i], z, replicas, substream_of(seed, qs[i]), threads));
    for (std::size_t i = 0; i < qs.size(); ++i)
        for (std::size_t j = i + 1; j < qs.size(); ++j) rep.ks[{i, j}] = ks_distance(d[i], d[j]);
    const EmpiricalDistribution again(
        one_point_sheet(variant, alpha, eps_inv, qs[0], z, replicas, substream(substream_of(seed, qs[0]), 1), threads));
    rep.null_ks = ks_distance(d[0], again);
    return rep;
}

TrendReport q_invariance_trend(scaling::Variant variant, double alpha, const std::vector<double>& eps_inv,
                               double q0, double q1, std::size_t replicas, std::uint64_t seed, double z,
                               unsigned threads) {
    if (replicas < 1000) throw std::invalid_argument("q-invariance needs at least 1000 replicas");
    TrendReport rep;
    rep.eps_inv = eps_inv;
    for (std::size_t i = 0; i < eps_inv.size(); ++i) {
        const auto s = substream(seed, i);
        const EmpiricalDistribution a(one_point_sheet(variant, alpha, eps_inv[i], q0, z, replicas, substream_of(s, q0), threads));
        const EmpiricalDistribution b(one_point_sheet(variant, alpha, eps_inv[i], q1, z, replicas, substream_of(s, q1), threads));
        rep.ks.push_back(ks_distance(a, b));
    }
    rep.non_increasing = true;
    for (std::size_t i = 1; i < rep.ks.size(); ++i) rep.non_increasing = rep.non_increasing && rep.ks[i] <= rep.ks[i - 1];
    return rep;
}

double stationarity_test(double q, double z, std::int64_t N, std::int64_t t, std::int64_t x, std::int64_t y,
                         std::int64_t r, std::size_t samples, std::uint64_t seed, unsigned threads) {
    const auto s0 = substream(seed, 0), s1 = substream(seed, 1);
    const auto a = parallel_map<double>(samples, threads, [&](std::size_t i) {
        return static_cast<double>(s6v::step_height(N, x, y, t, q, z, s6v_seed(s0, i)) + x - N);
    });
    const auto b = parallel_map<double>(samples, threads, [&](std::size_t i) {
        return static_cast<double>(s6v::step_height(N, x + r, y + r, t, q, z, s6v_seed(s1, i)) + x + r - N);
    });
    return ks_distance(EmpiricalDistribution(a), EmpiricalDistribution(b));
}

double degeneration_ks(double q, double t, double delta, std::int64_t x, std::int64_t y, std::size_t replicas,
                       std::uint64_t seed, unsigned threads, double theta) {
    const s6v::DegenerationParams params{t, theta, delta};
    const auto s0 = substream(seed, 0), s1 = substream(seed, 1);
    const std::int64_t L = asep::required_half_width(t, std::max(std::abs(x), std::abs(y)));
    const auto proxy = parallel_map<double>(replicas, threads, [&](std::size_t i) {
        return static_cast<double>(s6v::asep_degeneration(params, q, s6v_seed(s0, i), x, y));
    });
    const auto direct = parallel_map<double>(replicas, threads, [&](std::size_t i) {
        return static_cast<double>(
            asep::height_from_profile_at(asep::step_profile(x, -L - 1, L), 0.0, asep_seed(s1, i), q, y, t));
    });
    return ks_distance(EmpiricalDistribution(proxy), EmpiricalDistribution(direct));
}

TwoPointEstimate twopoint(const TwoPointParams& params, std::uint64_t seed, unsigned threads) {
    if (params.replicas < 10) throw std::invalid_argument("two-point estimate needs at least 10 replicas");
    if (params.ring_size < 2) throw std::invalid_argument("ring too small");
    if (!(params.epsilon > 0.0) || params.beta < 0.0 || params.time < 0.0)
        throw std::invalid_argument("two-point needs epsilon > 0, beta >= 0 and time >= 0");
    TwoPointEstimate est;
    est.params = params;
    const std::int64_t R = params.ring_size;
    est.color2 = R / 2;
    est.color1 = std::llround(0.5 * params.beta * std::cbrt(params.epsilon) * static_cast<double>(R));
    if (est.color1 + est.color2 > R) throw std::invalid_argument("densities exceed one; lower beta or epsilon");
    const double burn = params.burn_in.value_or(asep::default_burn_in(R));
    const double rho[2] = {static_cast<double>(est.color1 + est.color2) / static_cast<double>(R),
                           static_cast<double>(est.color2) / static_cast<double>(R)};
    const std::size_t nx = params.offsets.size();

    if (params.origins < 1) throw std::invalid_argument("need at least one time origin per replica");
    const double J = static_cast<double>(params.origins);

    using Sample = std::vector<double>;  // [k][l][offset] flattened, then the four window sums
    const auto per = parallel_map<Sample>(params.replicas, threads, [&](std::size_t r) {
        const SeedSpec s = asep_seed(seed, r);
        auto c0 = asep::ring_stationary_sample({est.color1, est.color2}, R, burn, params.q, s);
        Sample out(4 * nx + 4, 0.0);
        for (std::size_t j = 0; j < params.origins; ++j) {
            const double from = burn + static_cast<double>(j) * params.time;
            auto ct = asep::evolve(c0, s, params.q, from + params.time, from);
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l)
                    for (std::size_t ix = 0; ix < nx; ++ix) {
                        double acc = 0.0;
                        for (std::int64_t i = 0; i < R; ++i) {
                            const std::int64_t jj = ((i + params.offsets[ix]) % R + R) % R;
                            const bool a = c0.colors[static_cast<std::size_t>(i)] >= k + 1;
                            const bool b = ct.colors[static_cast<std::size_t>(jj)] >= l + 1;
                            acc += (a && b) ? 1.0 : 0.0;
                        }
                        const double v = (acc / static_cast<double>(R) - rho[k] * rho[l]) / J;
                        out[(2 * k + l) * nx + ix] += v;
                        out[4 * nx + 2 * k + l] += v;
                    }
            c0 = std::move(ct);
        }
        return out;
    });
    const double n = static_cast<double>(params.replicas);
    auto mean_se = [&](std::size_t idx) {
        double s = 0.0, s2 = 0.0;
        for (const auto& v : per) {
            s += v[idx];
            s2 += v[idx] * v[idx];
        }
        const double m = s / n;
        return std::pair{m, std::sqrt(std::max(0.0, s2 / n - m * m) / (n - 1.0))};
    };
    for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
            est.S[k][l].assign(nx, 0.0);
            est.se[k][l].assign(nx, 0.0);
            for (std::size_t ix = 0; ix < nx; ++ix)
                std::tie(est.S[k][l][ix], est.se[k][l][ix]) = mean_se((2 * k + l) * nx + ix);
            std::tie(est.window_sum[k][l], est.window_se[k][l]) = mean_se(4 * nx + 2 * k + l);
        }
    return est;
}

namespace {

using qboson::Path;
using qboson::Word;

Path curve_of(const Word& w, int k) {
    Path p(w.size() + 1, 0);
    for (std::size_t y = w.size(); y-- > 0;) p[y] = p[y + 1] + (w[y] >= k ? 1 : 0);
    return p;
}

Path slice(const Path& p, int a, int b) { return Path(p.begin() + a, p.begin() + b + 1); }

Path splice(Path p, const Path& inner, int a) {
    std::copy(inner.begin(), inner.end(), p.begin() + a);
    return p;
}

}  // namespace

double gibbs_invariance_uncolored(const qboson::Model& model, int m, int i, int a, int b, bool row_factors,
                                  std::optional<double> kernel_q) {
    if (m < 1 || i < 1 || i > m) throw std::invalid_argument("need 1 <= i <= m");
    if (a < 0 || b > model.rows() || a >= b) throw std::invalid_argument("interval must satisfy 0 <= a < b <= N+M");
    const qboson::Transfer t(model);
    const int K = qboson::default_cutoff(t, 1e-13);
    if (m > K) throw std::invalid_argument("too many curves for the cutoff");
    const auto words = t.exit_law(K, m);
    std::map<std::vector<Path>, double> before, after;
    std::vector<double> factors;
    if (row_factors)
        for (int x = a; x <= b; ++x) factors.push_back(x <= model.N ? 1.0 : model.z);
    for (const auto& [tuple, p] : words) {
        std::vector<Path> curves;
        for (const auto& w : tuple) curves.push_back(curve_of(w, 1));
        before[curves] += p;
        std::optional<Path> f, g;
        if (i > 1) f = slice(curves[static_cast<std::size_t>(i - 2)], a, b);
        if (i < m) g = slice(curves[static_cast<std::size_t>(i)], a, b);
        const auto law = qboson::hl_gibbs_law({slice(curves[static_cast<std::size_t>(i - 1)], a, b)}, f, g,
                                              kernel_q.value_or(model.q), factors);
        for (std::size_t k = 0; k < law.outcomes.size(); ++k) {
            auto next = curves;
            next[static_cast<std::size_t>(i - 1)] = splice(next[static_cast<std::size_t>(i - 1)], law.outcomes[k][0], a);
            after[next] += p * law.probabilities[k];
        }
    }
    return tv_distance(before, after);
}

double gibbs_invariance_colored(const qboson::Model& model) {
    model.validate();
    for (int c : model.sigma)
        if (c > 2) throw std::invalid_argument("colored Gibbs check needs colors in {1, 2}");
    const qboson::Transfer t(model);
    const auto words = t.exit_law(qboson::default_cutoff(t, 1e-13), 2);
    std::map<std::vector<Path>, double> before, after;
    for (const auto& [tuple, p] : words) {
        const Path a1 = curve_of(tuple[0], 1), b1 = curve_of(tuple[1], 1);
        const Path a2 = curve_of(tuple[0], 2), b2 = curve_of(tuple[1], 2);
        before[{a1, b1, a2, b2}] += p;
        const auto law = qboson::colored_gibbs_law(a1, b1, b2, model.N, model.q, model.z);
        for (std::size_t k = 0; k < law.outcomes.size(); ++k) after[{a1, b1, law.outcomes[k][0], b2}] += p * law.probabilities[k];
    }
    return tv_distance(before, after);
}

DecouplingReport decoupling_diagnostics(const s6v::ArrowField& first, const s6v::ArrowField& second,
                                        std::int64_t t_lo, std::int64_t t_hi, std::int64_t y_lo, std::int64_t y_hi) {
    const auto pr = s6v::pair_trajectories(first, second);
    DecouplingReport rep;
    for (const auto& d : pr.discrepancies)
        if (d.column >= t_lo && d.column <= t_hi && d.row >= y_lo && d.row <= y_hi) ++rep.discrepancies_in_box;
    rep.box_clean = rep.discrepancies_in_box == 0;
    constexpr std::int32_t any = s6v::NO_ARROW + 1;
    for (std::int64_t t = t_lo; t <= t_hi; ++t)
        for (std::int64_t y = y_lo; y <= y_hi; ++y)
            rep.violation = std::max(rep.violation, s6v::colored_height(first, any, y, t) - s6v::colored_height(second, any, y, t));
    return rep;
}

namespace {

bool coin(std::uint64_t seed, std::int64_t k, std::uint64_t which) {
    return draw_uniform(SeedSpec{seed}, static_cast<std::uint64_t>(k), which) < 0.5;
}

}  // namespace

std::size_t finite_speed_failures(std::int64_t N1, double q, double z, std::size_t seeds, std::uint64_t seed) {
    const auto T = static_cast<std::int64_t>(std::floor((1 - coin_probabilities(q, z).b_right) * static_cast<double>(N1) / 4.0));
    if (T < 1) throw std::invalid_argument("agreement zone too small for a nonempty box");
    std::size_t failures = 0;
    for (std::size_t r = 0; r < seeds; ++r) {
        const std::uint64_t s = replica_seed(seed, r);
        s6v::Boundary a{-2 * N1, std::vector<std::int32_t>(static_cast<std::size_t>(4 * N1 + 1), s6v::NO_ARROW), 0};
        s6v::Boundary b = a;
        for (std::int64_t k = -2 * N1; k <= 2 * N1; ++k) {
            const auto i = static_cast<std::size_t>(k + 2 * N1);
            const bool occ_a = coin(s, k, 1);
            const bool occ_b = std::abs(k) <= N1 ? occ_a : coin(s, k, 2);
            a.colors[i] = occ_a ? 1 : s6v::NO_ARROW;
            b.colors[i] = occ_b ? 1 : s6v::NO_ARROW;
        }
        const auto cap = s6v::default_row_cap(2 * N1, T, q, z) + 2 * N1;
        const SeedSpec coins{s, StreamDomain::s6v_coin};
        const auto fa = s6v::sample(a, q, z, T, cap, coins);
        const auto fb = s6v::sample(b, q, z, T, cap, coins);
        if (s6v::pair_trajectories(fa, fb).discrepancy_in(1, T, -N1 / 2, N1 / 2)) ++failures;
    }
    return failures;
}

std::vector<double> monotonicity_tail(std::int64_t N, std::int64_t T, double q, double z,
                                      const std::vector<std::int64_t>& levels, std::size_t seeds, std::uint64_t seed) {
    std::vector<double> tail(levels.size(), 0.0);
    for (std::size_t r = 0; r < seeds; ++r) {
        const std::uint64_t s = replica_seed(seed, r);
        s6v::Boundary lower{-N, std::vector<std::int32_t>(static_cast<std::size_t>(2 * N + 1), s6v::NO_ARROW), 0};
        s6v::Boundary upper = lower;
        for (std::int64_t k = -N; k <= N; ++k) {
            const auto i = static_cast<std::size_t>(k + N);
            const bool base = coin(s, k, 1);
            lower.colors[i] = base ? 1 : s6v::NO_ARROW;
            upper.colors[i] = (base || coin(s, k, 2)) ? 1 : s6v::NO_ARROW;
        }
        const auto cap = s6v::default_row_cap(N, T, q, z) + N;
        const SeedSpec coins{s, StreamDomain::s6v_coin};
        const auto rep = decoupling_diagnostics(s6v::sample(lower, q, z, T, cap, coins),
                                                s6v::sample(upper, q, z, T, cap, coins), 1, T, -N / 2, N / 2);
        for (std::size_t i = 0; i < levels.size(); ++i)
            if (rep.violation >= levels[i]) tail[i] += 1.0 / static_cast<double>(seeds);
    }
    return tail;
}

}  // namespace kpz::verify
