#include "kpzlab/asep.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "asep_events.hpp"

namespace kpz::asep {

std::int32_t ColoredConfiguration::at(std::int64_t site) const {
    if (mode == BoundaryMode::ring) {
        const std::int64_t n = size();
        return colors[static_cast<std::size_t>(((site % n) + n) % n)];
    }
    if (!contains(site)) throw std::out_of_range("site " + std::to_string(site) + " outside window");
    return colors[static_cast<std::size_t>(site - lo)];
}

std::int64_t BernoulliPath::at(std::int64_t y) const {
    if (y < lo || y > hi()) throw std::out_of_range("path evaluated outside its domain");
    return values[static_cast<std::size_t>(y - lo)];
}

void validate_bernoulli(const BernoulliPath& p) {
    if (p.values.empty()) throw std::invalid_argument("empty Bernoulli path");
    for (std::size_t i = 1; i < p.values.size(); ++i) {
        const std::int64_t d = p.values[i] - p.values[i - 1];
        if (d != 0 && d != -1)
            throw std::invalid_argument("not a Bernoulli path: increment " + std::to_string(d) +
                                        " at " + std::to_string(p.lo + static_cast<std::int64_t>(i)));
    }
}

std::int64_t required_half_width(double t, std::int64_t radius) {
    if (t < 0.0) throw std::domain_error("negative time");
    return static_cast<std::int64_t>(std::ceil(4.0 * t)) + radius + 8;
}

ColoredConfiguration packed(std::int64_t half_width) {
    if (half_width < 0) throw std::invalid_argument("negative half-width");
    ColoredConfiguration c;
    c.lo = -half_width;
    c.colors.resize(static_cast<std::size_t>(2 * half_width + 1));
    for (std::int64_t k = -half_width; k <= half_width; ++k)
        c.colors[static_cast<std::size_t>(k + half_width)] = static_cast<std::int32_t>(-k);
    return c;
}

ColoredConfiguration ring_configuration(const std::vector<std::int32_t>& colors) {
    if (colors.empty()) throw std::invalid_argument("empty ring");
    return ColoredConfiguration{BoundaryMode::ring, 0, colors};
}

namespace {

std::uint64_t fingerprint(const std::vector<std::int32_t>& colors) {
    std::uint64_t h = 0;
    for (auto c : colors) h += mix64(static_cast<std::uint64_t>(static_cast<std::uint32_t>(c)));
    return h;
}

ColoredConfiguration run(const ColoredConfiguration& config, const SeedSpec& seed, double q,
                         double t1, double t0, bool checked) {
    ColoredConfiguration out = config;
    auto& col = out.colors;
    if (!checked) {
        detail::run_events(seed, q, out.mode, out.lo, out.size(), t0, t1,
                           [&](std::int64_t i, std::int64_t j, double) {
                               auto& a = col[static_cast<std::size_t>(i)];
                               auto& b = col[static_cast<std::size_t>(j)];
                               if (a > b) std::swap(a, b);
                           });
        return out;
    }
    const std::uint64_t before = fingerprint(col);
    std::uint64_t running = before;
    detail::run_events(seed, q, out.mode, out.lo, out.size(), t0, t1,
                       [&](std::int64_t i, std::int64_t j, double time) {
                           auto& a = col[static_cast<std::size_t>(i)];
                           auto& b = col[static_cast<std::size_t>(j)];
                           if (a <= b) return;
                           const std::uint64_t old_pair =
                               mix64(static_cast<std::uint32_t>(a)) + mix64(static_cast<std::uint32_t>(b));
                           std::swap(a, b);
                           running = running - old_pair + mix64(static_cast<std::uint32_t>(a)) +
                                     mix64(static_cast<std::uint32_t>(b));
                           if (running != before)
                               throw std::logic_error("color conservation violated at time " +
                                                      std::to_string(time));
                       });
    auto s0 = config.colors;
    auto s1 = col;
    std::sort(s0.begin(), s0.end());
    std::sort(s1.begin(), s1.end());
    if (s0 != s1) throw std::logic_error("color multiset changed during evolution");
    return out;
}

}  // namespace

ColoredConfiguration evolve(const ColoredConfiguration& config, const SeedSpec& seed, double q,
                            double t1, double t0) {
    return run(config, seed, q, t1, t0, false);
}

ColoredConfiguration evolve_checked(const ColoredConfiguration& config, const SeedSpec& seed,
                                    double q, double t1, double t0) {
    return run(config, seed, q, t1, t0, true);
}

std::int64_t colored_height(const ColoredConfiguration& config, std::int64_t x, std::int64_t y) {
    std::int64_t h = 0;
    const std::int64_t threshold = -x;
    for (std::int64_t z = std::max(y + 1, config.lo); z <= config.hi(); ++z)
        if (config.colors[static_cast<std::size_t>(z - config.lo)] >= threshold) ++h;
    return h;
}

std::int64_t colored_height_certified(const ColoredConfiguration& config, std::int64_t x,
                                      std::int64_t y, double t, std::int64_t radius) {
    if (config.mode != BoundaryMode::padded_window)
        throw std::invalid_argument("colored height needs a padded window");
    const std::int64_t need = required_half_width(t, radius);
    if (config.lo > -need || config.hi() < need)
        throw WindowTooSmall("window too small: half-width " + std::to_string(need) +
                             " required for t=" + std::to_string(t) + ", radius " +
                             std::to_string(radius));
    if (std::abs(x) > radius || std::abs(y) > radius)
        throw WindowTooSmall("query (" + std::to_string(x) + "," + std::to_string(y) +
                             ") outside certified radius " + std::to_string(radius));
    return colored_height(config, x, y);
}

BernoulliPath step_profile(std::int64_t x, std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw std::invalid_argument("empty domain");
    BernoulliPath p{lo, std::vector<std::int64_t>(static_cast<std::size_t>(hi - lo + 1))};
    for (std::int64_t z = lo; z <= hi; ++z) p.values[static_cast<std::size_t>(z - lo)] = z <= x ? x - z : 0;
    return p;
}

BernoulliPath bernoulli_profile(double p, std::int64_t lo, std::int64_t hi, const SeedSpec& seed) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("density must lie in [0,1]");
    if (hi < lo) throw std::invalid_argument("empty domain");
    const SeedSpec s = seed.with_domain(StreamDomain::replica);
    BernoulliPath path{lo, std::vector<std::int64_t>(static_cast<std::size_t>(hi - lo + 1), 0)};
    for (std::int64_t y = hi; y > lo; --y) {
        const bool occupied = draw_uniform(s, static_cast<std::uint64_t>(y), 0xb0e1) < p;
        path.values[static_cast<std::size_t>(y - 1 - lo)] =
            path.values[static_cast<std::size_t>(y - lo)] + (occupied ? 1 : 0);
    }
    return path;
}

namespace {

// Particle occupation plus running height for one uncolored system.
struct Tracker {
    std::vector<std::uint8_t> occ;  // window sites path.lo+1 .. path.hi
    std::vector<std::int64_t> h;    // same indexing as the path values
    double start = 0.0;

    explicit Tracker(const BernoulliPath& h0, double s) : h(h0.values), start(s) {
        occ.resize(h0.values.size() - 1);
        for (std::size_t i = 0; i + 1 < h0.values.size(); ++i)
            occ[i] = static_cast<std::uint8_t>(h0.values[i] - h0.values[i + 1]);
    }

    // Window indices i, j refer to occ; a jump from site i to site i+1 raises
    // h at site i, which is path index i+1.
    void attempt(std::int64_t i, std::int64_t j, double time) {
        if (time <= start) return;
        auto& a = occ[static_cast<std::size_t>(i)];
        auto& b = occ[static_cast<std::size_t>(j)];
        if (a != 1 || b != 0) return;
        a = 0;
        b = 1;
        if (j == i + 1)
            h[static_cast<std::size_t>(i + 1)] += 1;
        else
            h[static_cast<std::size_t>(j + 1)] -= 1;
    }
};

}  // namespace

std::vector<BernoulliPath> basic_couple(const std::vector<TimedProfile>& inits,
                                        const SeedSpec& seed, double q, double t) {
    if (inits.empty()) return {};
    const std::int64_t lo = inits.front().h0.lo;
    const std::int64_t sz = inits.front().h0.size();
    double t0 = inits.front().start_time;
    for (const auto& in : inits) {
        if (in.h0.lo != lo || in.h0.size() != sz)
            throw std::invalid_argument("basic coupling needs identical windows");
        validate_bernoulli(in.h0);
        if (in.start_time < 0.0) throw std::domain_error("negative start time");
        if (in.start_time > t) throw std::domain_error("start time after evaluation time");
        t0 = std::min(t0, in.start_time);
    }
    if (sz < 2) throw std::invalid_argument("window must contain at least one site");
    std::vector<Tracker> systems;
    systems.reserve(inits.size());
    for (const auto& in : inits) systems.emplace_back(in.h0, in.start_time);
    detail::run_events(seed, q, BoundaryMode::padded_window, lo + 1, sz - 1, t0, t,
                       [&](std::int64_t i, std::int64_t j, double time) {
                           for (auto& s : systems) s.attempt(i, j, time);
                       });
    std::vector<BernoulliPath> out;
    out.reserve(systems.size());
    for (auto& s : systems) out.push_back(BernoulliPath{lo, std::move(s.h)});
    return out;
}

BernoulliPath height_from_profile(const BernoulliPath& h0, double s, const SeedSpec& seed,
                                  double q, double t) {
    if (t < s) throw std::domain_error("evaluation time precedes start time");
    return basic_couple({TimedProfile{h0, s}}, seed, q, t).front();
}

std::int64_t height_from_profile_at(const BernoulliPath& h0, double s, const SeedSpec& seed,
                                    double q, std::int64_t y, double t) {
    return height_from_profile(h0, s, seed, q, t).at(y);
}

ColoredConfiguration merge_colors(const ColoredConfiguration& config, const ColorMap& tau) {
    std::vector<std::int32_t> present = config.colors;
    std::sort(present.begin(), present.end());
    present.erase(std::unique(present.begin(), present.end()), present.end());
    for (std::size_t i = 1; i < present.size(); ++i)
        if (tau(present[i]) < tau(present[i - 1]))
            throw std::invalid_argument("color map is not weakly monotone between " +
                                        std::to_string(present[i - 1]) + " and " +
                                        std::to_string(present[i]));
    ColoredConfiguration out = config;
    for (auto& c : out.colors) c = tau(c);
    return out;
}

double default_burn_in(std::int64_t ring_size) { return 20.0 * static_cast<double>(ring_size); }

ColoredConfiguration ring_stationary_sample(const std::vector<std::int64_t>& counts,
                                            std::int64_t ring_size, double burn_in, double q,
                                            const SeedSpec& seed) {
    if (ring_size <= 0) throw std::invalid_argument("ring size must be positive");
    if (burn_in < 0.0) throw std::domain_error("negative burn-in");
    std::int64_t total = 0;
    for (auto c : counts) {
        if (c < 0) throw std::invalid_argument("negative particle count");
        total += c;
    }
    if (total > ring_size)
        throw std::invalid_argument("overfull ring: " + std::to_string(total) + " particles on " +
                                    std::to_string(ring_size) + " sites");
    std::vector<std::int32_t> colors;
    colors.reserve(static_cast<std::size_t>(ring_size));
    for (std::size_t c = counts.size(); c >= 1; --c)
        colors.insert(colors.end(), static_cast<std::size_t>(counts[c - 1]), static_cast<std::int32_t>(c));
    colors.resize(static_cast<std::size_t>(ring_size), 0);
    return evolve(ring_configuration(colors), seed, q, burn_in);
}

void for_each_event(const SeedSpec& seed, double q, BoundaryMode mode, std::int64_t lo,
                    std::int64_t n, double t0, double t1,
                    const std::function<void(std::int64_t, std::int64_t, double)>& swap_attempt) {
    detail::run_events(seed, q, mode, lo, n, t0, t1, swap_attempt);
}

}  // namespace kpz::asep
