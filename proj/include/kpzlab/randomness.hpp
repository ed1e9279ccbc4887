#pragma once

// Coordinate-addressed random draws. Every draw is a pure function of
// (master seed, stream domain, coordinates), so the same vertex or clock
// sees the same randomness no matter which system or initial condition
// is being evolved.

#include <cstdint>
#include <string>
#include <vector>

namespace kpz {

enum class StreamDomain : std::uint64_t { asep_clock = 1, s6v_coin = 2, replica = 3 };

struct SeedSpec {
    std::uint64_t master_seed = 0;
    StreamDomain domain = StreamDomain::replica;

    SeedSpec with_domain(StreamDomain d) const { return SeedSpec{master_seed, d}; }
};

// Accepts decimal or 0x-prefixed hexadecimal. Throws std::invalid_argument.
std::uint64_t parse_seed(const std::string& text);

std::uint64_t mix64(std::uint64_t x);

// 64 random bits at the given coordinates.
std::uint64_t draw_bits(const SeedSpec& seed, std::uint64_t a, std::uint64_t b = 0,
                        std::uint64_t c = 0, std::uint64_t d = 0);

// Uniform on [0,1) with 53 bits of resolution.
double draw_uniform(const SeedSpec& seed, std::uint64_t a, std::uint64_t b = 0,
                    std::uint64_t c = 0, std::uint64_t d = 0);

// Uniform on (0,1), never exactly 0; used for logarithms.
double draw_open_uniform(const SeedSpec& seed, std::uint64_t a, std::uint64_t b = 0,
                         std::uint64_t c = 0, std::uint64_t d = 0);

// Seed for replica r of a run; the result is meant to be re-domained by the model.
std::uint64_t replica_seed(std::uint64_t master_seed, std::uint64_t r);

// Sequential draws from a counter-based stream; cheap to copy, no shared state.
class CounterStream {
public:
    CounterStream(const SeedSpec& seed, std::uint64_t key) : seed_(seed), key_(key) {}
    double uniform() { return draw_uniform(seed_, key_, counter_++); }
    double open_uniform() { return draw_open_uniform(seed_, key_, counter_++); }
    std::uint64_t bits() { return draw_bits(seed_, key_, counter_++); }
    std::uint64_t below(std::uint64_t n);
    int binomial(int n, double p);

private:
    SeedSpec seed_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

enum class Direction : std::uint8_t { right = 0, left = 1 };

struct ClockEvent {
    std::int64_t site;
    Direction direction;
    double time;
};

// Time of the n-th (0-based) ring of the Poisson clock at (site, direction).
// The gap sequence is indexed by n, so extending a horizon never changes
// earlier rings.
class PoissonClock {
public:
    PoissonClock(const SeedSpec& seed, std::int64_t site, Direction dir, double rate);
    double time() const { return time_; }
    std::uint64_t index() const { return index_; }
    void advance();
    bool active() const { return rate_ > 0.0; }

private:
    SeedSpec seed_;
    std::int64_t site_;
    Direction dir_;
    double rate_;
    std::uint64_t index_ = 0;
    double time_;
};

// All rings at one site up to the horizon, time ordered. Right clocks have
// rate 1 and left clocks rate q.
std::vector<ClockEvent> clock_events(const SeedSpec& seed, double q, std::int64_t site,
                                     double horizon);

struct VertexCoins {
    std::int64_t x;
    std::int64_t y;
    bool up_coin;
    bool right_coin;
};

struct CoinProbabilities {
    double b_up;
    double b_right;
};

CoinProbabilities coin_probabilities(double q, double z);

VertexCoins vertex_coins(const SeedSpec& seed, double q, double z, std::int64_t x, std::int64_t y);

// Single coins without the range checks, for inner loops.
inline bool up_coin_raw(const SeedSpec& seed, double b_up, std::int64_t x, std::int64_t y) {
    return b_up > 0.0 &&
           draw_uniform(seed, static_cast<std::uint64_t>(x), static_cast<std::uint64_t>(y), 0) < b_up;
}
inline bool right_coin_raw(const SeedSpec& seed, double b_right, std::int64_t x, std::int64_t y) {
    return draw_uniform(seed, static_cast<std::uint64_t>(x), static_cast<std::uint64_t>(y), 1) < b_right;
}

}  // namespace kpz
