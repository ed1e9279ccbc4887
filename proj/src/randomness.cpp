#include "kpzlab/randomness.hpp"

#include <cmath>
#include <stdexcept>

namespace kpz {

std::uint64_t parse_seed(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty seed");
    std::size_t pos = 0;
    std::uint64_t v = 0;
    try {
        if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
            v = std::stoull(text.substr(2), &pos, 16);
            pos += 2;
        } else {
            if (text[0] == '-') throw std::invalid_argument("negative seed");
            v = std::stoull(text, &pos, 10);
        }
    } catch (const std::out_of_range&) {
        throw std::invalid_argument("seed out of 64-bit range: " + text);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("malformed seed: " + text);
    }
    if (pos != text.size()) throw std::invalid_argument("malformed seed: " + text);
    return v;
}

// splitmix64 finalizer
std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t draw_bits(const SeedSpec& seed, std::uint64_t a, std::uint64_t b, std::uint64_t c,
                        std::uint64_t d) {
    std::uint64_t h = mix64(seed.master_seed ^ (static_cast<std::uint64_t>(seed.domain) * 0xd1b54a32d192ed03ULL));
    h = mix64(h ^ a);
    h = mix64(h ^ (b * 0xaef17502108ef2d9ULL));
    h = mix64(h ^ (c * 0x9e6c63d0676a9a99ULL));
    h = mix64(h ^ d);
    return h;
}

double draw_uniform(const SeedSpec& seed, std::uint64_t a, std::uint64_t b, std::uint64_t c,
                    std::uint64_t d) {
    return static_cast<double>(draw_bits(seed, a, b, c, d) >> 11) * 0x1.0p-53;
}

double draw_open_uniform(const SeedSpec& seed, std::uint64_t a, std::uint64_t b, std::uint64_t c,
                         std::uint64_t d) {
    return (static_cast<double>(draw_bits(seed, a, b, c, d) >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t replica_seed(std::uint64_t master_seed, std::uint64_t r) {
    return draw_bits(SeedSpec{master_seed, StreamDomain::replica}, r, 0x5eed);
}

std::uint64_t CounterStream::below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("below(0)");
    // rejection to avoid modulo bias
    const std::uint64_t limit = (~std::uint64_t{0}) - ((~std::uint64_t{0}) % n);
    for (;;) {
        std::uint64_t v = bits();
        if (v < limit) return v % n;
    }
}

int CounterStream::binomial(int n, double p) {
    int k = 0;
    for (int i = 0; i < n; ++i) k += uniform() < p ? 1 : 0;
    return k;
}

PoissonClock::PoissonClock(const SeedSpec& seed, std::int64_t site, Direction dir, double rate)
    : seed_(seed), site_(site), dir_(dir), rate_(rate) {
    if (rate_ > 0.0) {
        time_ = -std::log(draw_open_uniform(seed_, static_cast<std::uint64_t>(site_),
                                            static_cast<std::uint64_t>(dir_), 0)) / rate_;
    } else {
        time_ = INFINITY;
    }
}

void PoissonClock::advance() {
    if (rate_ <= 0.0) return;
    ++index_;
    time_ += -std::log(draw_open_uniform(seed_, static_cast<std::uint64_t>(site_),
                                         static_cast<std::uint64_t>(dir_), index_)) / rate_;
}

std::vector<ClockEvent> clock_events(const SeedSpec& seed, double q, std::int64_t site,
                                     double horizon) {
    if (!(horizon > 0.0)) throw std::domain_error("clock_events: horizon must be positive");
    if (!(q >= 0.0 && q < 1.0)) throw std::domain_error("clock_events: q must lie in [0,1)");
    const SeedSpec s = seed.with_domain(StreamDomain::asep_clock);
    PoissonClock right(s, site, Direction::right, 1.0);
    PoissonClock left(s, site, Direction::left, q);
    std::vector<ClockEvent> out;
    while (right.time() <= horizon || left.time() <= horizon) {
        if (right.time() <= left.time()) {
            out.push_back({site, Direction::right, right.time()});
            right.advance();
        } else {
            out.push_back({site, Direction::left, left.time()});
            left.advance();
        }
    }
    return out;
}

CoinProbabilities coin_probabilities(double q, double z) {
    return {q * (1.0 - z) / (1.0 - q * z), (1.0 - z) / (1.0 - q * z)};
}

VertexCoins vertex_coins(const SeedSpec& seed, double q, double z, std::int64_t x, std::int64_t y) {
    if (!(q >= 0.0 && q < 1.0)) throw std::domain_error("vertex_coins: q must lie in [0,1)");
    if (!(z > 0.0 && z < 1.0)) throw std::domain_error("vertex_coins: z must lie in (0,1)");
    if (x < 1) throw std::domain_error("vertex_coins: column index must be >= 1");
    const SeedSpec s = seed.with_domain(StreamDomain::s6v_coin);
    const auto p = coin_probabilities(q, z);
    return {x, y, up_coin_raw(s, p.b_up, x, y), right_coin_raw(s, p.b_right, x, y)};
}

}  // namespace kpz
