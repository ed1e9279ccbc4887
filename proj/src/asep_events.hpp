#pragma once

#include <cmath>
#include <cstdint>
#include <queue>
#include <stdexcept>
#include <vector>

#include "kpzlab/asep.hpp"

namespace kpz::asep::detail {

struct Pending {
    double time;
    std::uint32_t id;
    bool operator>(const Pending& o) const { return time != o.time ? time > o.time : id > o.id; }
};

// Global time-ordered merge of all clocks acting inside the window. Clock ids
// are 2*index + direction, so ties (never expected) resolve by site, then
// right before left.
template <class F>
void run_events(const SeedSpec& seed, double q, BoundaryMode mode, std::int64_t lo, std::int64_t n,
                double t0, double t1, F&& attempt) {
    if (!(q >= 0.0 && q < 1.0)) throw std::domain_error("asep: q must lie in [0,1)");
    if (t1 < t0) throw std::domain_error("asep: end time precedes start time");
    if (t0 < 0.0) throw std::domain_error("asep: negative time");
    if (n <= 1 || t1 == t0) return;
    const SeedSpec s = seed.with_domain(StreamDomain::asep_clock);
    const bool ring = mode == BoundaryMode::ring;

    std::vector<PoissonClock> clocks;
    clocks.reserve(static_cast<std::size_t>(2 * n));
    std::vector<Pending> heap_storage;
    heap_storage.reserve(static_cast<std::size_t>(2 * n));
    std::priority_queue<Pending, std::vector<Pending>, std::greater<>> heap(std::greater<>{},
                                                                            std::move(heap_storage));
    for (std::int64_t i = 0; i < n; ++i) {
        const std::int64_t site = lo + i;
        for (int d = 0; d < 2; ++d) {
            clocks.emplace_back(s, site, static_cast<Direction>(d), d == 0 ? 1.0 : q);
            PoissonClock& c = clocks.back();
            const bool usable = ring || (d == 0 ? i + 1 < n : i > 0);
            if (!usable || !c.active()) continue;
            while (c.time() <= t0) c.advance();
            if (c.time() <= t1) heap.push({c.time(), static_cast<std::uint32_t>(2 * i + d)});
        }
    }
    while (!heap.empty()) {
        const Pending ev = heap.top();
        heap.pop();
        const std::int64_t i = ev.id >> 1;
        const bool right = (ev.id & 1u) == 0;
        std::int64_t j = right ? i + 1 : i - 1;
        if (ring) j = (j + n) % n;
        attempt(i, j, ev.time);
        PoissonClock& c = clocks[ev.id];
        c.advance();
        if (c.time() <= t1) heap.push({c.time(), ev.id});
    }
}

}  // namespace kpz::asep::detail
