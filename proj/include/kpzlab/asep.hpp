#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "kpzlab/randomness.hpp"

namespace kpz::asep {

enum class BoundaryMode { padded_window, ring };

// Colors on a contiguous block of sites. In padded mode the block is the
// simulation window and everything outside it is frozen; in ring mode the
// sites 0..n-1 wrap around.
struct ColoredConfiguration {
    BoundaryMode mode = BoundaryMode::padded_window;
    std::int64_t lo = 0;
    std::vector<std::int32_t> colors;

    std::int64_t size() const { return static_cast<std::int64_t>(colors.size()); }
    std::int64_t hi() const { return lo + size() - 1; }
    bool contains(std::int64_t site) const { return site >= lo && site <= hi(); }
    std::int32_t at(std::int64_t site) const;
    bool operator==(const ColoredConfiguration&) const = default;
};

// Integer path with increments in {0,-1}; domain lo..lo+size-1.
struct BernoulliPath {
    std::int64_t lo = 0;
    std::vector<std::int64_t> values;

    std::int64_t size() const { return static_cast<std::int64_t>(values.size()); }
    std::int64_t hi() const { return lo + size() - 1; }
    std::int64_t at(std::int64_t y) const;
    bool operator==(const BernoulliPath&) const = default;
};

void validate_bernoulli(const BernoulliPath& p);

class WindowTooSmall : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Half-width ceil(4t) + radius + 8 of the padded window certified for queries
// within `radius` of the origin up to time t.
std::int64_t required_half_width(double t, std::int64_t radius);

// Packed initial condition on [-L, L]: color -k at site k.
ColoredConfiguration packed(std::int64_t half_width);

ColoredConfiguration ring_configuration(const std::vector<std::int32_t>& colors);

// Evolution under the graphical construction with clocks rung in (t0, t1].
ColoredConfiguration evolve(const ColoredConfiguration& config, const SeedSpec& seed, double q,
                            double t1, double t0 = 0.0);

// Like evolve but checks after every event that the window still holds the
// same multiset of colors.
ColoredConfiguration evolve_checked(const ColoredConfiguration& config, const SeedSpec& seed,
                                    double q, double t1, double t0 = 0.0);

// #{z > y : color(z) >= -x} over the window.
std::int64_t colored_height(const ColoredConfiguration& config, std::int64_t x, std::int64_t y);

// Same, but refuses queries outside the region certified by the window policy.
std::int64_t colored_height_certified(const ColoredConfiguration& config, std::int64_t x,
                                      std::int64_t y, double t, std::int64_t radius);

// Step profile (x - z) 1{z <= x} on [lo, hi].
BernoulliPath step_profile(std::int64_t x, std::int64_t lo, std::int64_t hi);

// Product Bernoulli(p) particle configuration turned into a height profile
// pinned to 0 at the right end.
BernoulliPath bernoulli_profile(double p, std::int64_t lo, std::int64_t hi, const SeedSpec& seed);

// Height profile at time t for the uncolored system started at time s from
// the particle configuration eta(y) = h0(y-1) - h0(y). Returned on h0's domain.
BernoulliPath height_from_profile(const BernoulliPath& h0, double s, const SeedSpec& seed,
                                  double q, double t);

std::int64_t height_from_profile_at(const BernoulliPath& h0, double s, const SeedSpec& seed,
                                    double q, std::int64_t y, double t);

struct TimedProfile {
    BernoulliPath h0;
    double start_time = 0.0;
};

// Several initial conditions driven by one set of clocks; all profiles must
// share a domain. Returns each height profile at time t.
std::vector<BernoulliPath> basic_couple(const std::vector<TimedProfile>& inits,
                                        const SeedSpec& seed, double q, double t);

using ColorMap = std::function<std::int32_t(std::int32_t)>;

// Applies tau sitewise after checking it is weakly monotone on the colors present.
ColoredConfiguration merge_colors(const ColoredConfiguration& config, const ColorMap& tau);

// counts[c-1] particles of color c (c = 1..C), holes are color 0. Starts from
// the blocked arrangement (highest color first from site 0) and runs the
// ring dynamics for burn_in time units.
ColoredConfiguration ring_stationary_sample(const std::vector<std::int64_t>& counts,
                                            std::int64_t ring_size, double burn_in, double q,
                                            const SeedSpec& seed);

double default_burn_in(std::int64_t ring_size);

// Low-level event loop. Calls swap_attempt(from, to, time) with window indices
// for every clock ring in (t0, t1] whose bond lies inside the window; the
// callee decides whether a swap happens.
void for_each_event(const SeedSpec& seed, double q, BoundaryMode mode, std::int64_t lo,
                    std::int64_t n, double t0, double t1,
                    const std::function<void(std::int64_t, std::int64_t, double)>& swap_attempt);

}  // namespace kpz::asep
