#pragma once

#include <climits>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "kpzlab/asep.hpp"
#include "kpzlab/randomness.hpp"

namespace kpz::s6v {

inline constexpr std::int32_t NO_ARROW = INT32_MIN;

using asep::BernoulliPath;

// Colors entering from the left on rows bottom..top, entering column
// entry_column + 1. NO_ARROW marks an empty row.
struct Boundary {
    std::int64_t bottom = 0;
    std::vector<std::int32_t> colors;
    std::int64_t entry_column = 0;

    std::int64_t top() const { return bottom + static_cast<std::int64_t>(colors.size()) - 1; }
    std::int32_t at(std::int64_t row) const;
};

// sigma(k) = k on [-N, N].
Boundary packed(std::int64_t N);

// Color-1 arrows on the rows where h0 decrements; h0 must vanish at its right end.
Boundary from_profile(const BernoulliPath& h0, std::int64_t entry_column = 0);

// Arrows of color 1 on rows lo..hi and nothing else; the merged image of the
// packed boundary under 1{color >= lo}.
Boundary step_boundary(std::int64_t lo, std::int64_t hi, std::int64_t entry_column = 0);

struct VertexOutcome {
    std::int32_t right;  // horizontal out
    std::int32_t up;     // vertical out
};

// Outgoing colors given vertical in `a`, horizontal in `h` and the two coins.
inline VertexOutcome vertex_rule(std::int32_t a, std::int32_t h, bool up_coin, bool right_coin) {
    if (a == h) return {h, a};
    if (a > h) return up_coin ? VertexOutcome{h, a} : VertexOutcome{a, h};
    return right_coin ? VertexOutcome{h, a} : VertexOutcome{a, h};
}

class CapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class OutOfSampledRegion : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// All edge colors on columns first_column..first_column+columns-1 and rows
// bottom..row_cap.
struct ArrowField {
    double q = 0.0;
    double z = 0.5;
    SeedSpec seed;
    std::int64_t bottom = 0;
    std::int64_t row_cap = 0;
    std::int64_t first_column = 1;
    std::int64_t columns = 0;
    Boundary boundary;
    std::vector<std::vector<std::int32_t>> horizontal;  // [column][row - bottom]
    std::vector<std::vector<std::int32_t>> vertical;

    std::int64_t last_column() const { return first_column + columns - 1; }
    // Horizontal exit of vertex (t, k); t = first_column - 1 gives the boundary.
    std::int32_t horizontal_exit(std::int64_t t, std::int64_t k) const;
    std::int32_t vertical_exit(std::int64_t t, std::int64_t k) const;
    bool operator==(const ArrowField& o) const {
        return q == o.q && z == o.z && seed.master_seed == o.seed.master_seed && bottom == o.bottom &&
               row_cap == o.row_cap && first_column == o.first_column && columns == o.columns &&
               horizontal == o.horizontal && vertical == o.vertical;
    }
};

// N + T + ceil(log(T (N+1) / 1e-9) / log(1/b_up)); the last term vanishes when b_up = 0.
std::int64_t default_row_cap(std::int64_t N, std::int64_t T, double q, double z);

void validate_parameters(double q, double z);

// Column-by-column, bottom-to-top sweep over T columns.
ArrowField sample(const Boundary& boundary, double q, double z, std::int64_t T, std::int64_t row_cap,
                  const SeedSpec& seed);

// #{k > y : j_(t,k) >= x}.
std::int64_t colored_height(const ArrowField& field, std::int32_t x, std::int64_t y, std::int64_t t);

// Horizontal exits of column T on rows bottom..ceiling. Exits at a row only
// depend on the rows beneath it, so cutting the strip at `ceiling` is exact.
std::vector<std::int32_t> exits_below(const Boundary& boundary, double q, double z, std::int64_t T,
                                      std::int64_t ceiling, const SeedSpec& seed);

using ColorMap = std::function<std::int32_t(std::int32_t)>;

// tau must fix NO_ARROW only if it is sent to itself; checked for monotonicity.
Boundary merge_colors(const Boundary& b, const ColorMap& tau);
ArrowField merge_colors(const ArrowField& f, const ColorMap& tau);

struct Interval {
    std::int64_t lo;
    std::int64_t hi;
    bool operator==(const Interval&) const = default;
};

// Single-color arrows stored as maximal runs of occupied rows; work per column
// is proportional to the number of runs rather than the number of arrows.
class UncoloredSweep {
public:
    UncoloredSweep(std::vector<Interval> arrows, std::int64_t first_column, std::int64_t ceiling,
                   double q, double z, const SeedSpec& seed);
    void advance_to(std::int64_t column);
    std::int64_t column() const { return column_; }
    const std::vector<Interval>& runs() const { return runs_; }
    std::int64_t exits_at_or_below(std::int64_t row) const;

private:
    void step();
    std::vector<Interval> runs_;
    std::vector<Interval> scratch_;
    std::int64_t column_;
    std::int64_t ceiling_;
    double b_up_;
    double b_right_;
    SeedSpec seed_;
};

// h(x,0;y,t) for the packed boundary on [-N, N], through the run sampler.
std::int64_t step_height(std::int64_t N, std::int64_t x, std::int64_t y, std::int64_t t, double q,
                         double z, const SeedSpec& seed);

// Height for general data h0 started at column s: color-1 exits above y at column t.
std::int64_t height_general(const BernoulliPath& h0, std::int64_t s, const SeedSpec& seed, double q,
                            double z, std::int64_t y, std::int64_t t);

struct Discrepancy {
    std::int64_t column;
    std::int64_t row;
};

struct PairReport {
    std::int64_t arrows_first = 0;
    std::int64_t arrows_second = 0;
    std::int64_t coupled_pairs = 0;
    std::int64_t uncoupled_first = 0;
    std::int64_t uncoupled_second = 0;
    std::int64_t overtaking = 0;
    std::vector<Discrepancy> discrepancies;
    // partner label per arrow (indexed by entry order), -1 when never coupled
    std::vector<std::int64_t> partner_first;
    std::vector<std::int64_t> partner_second;

    bool discrepancy_in(std::int64_t t_lo, std::int64_t t_hi, std::int64_t y_lo, std::int64_t y_hi) const;
};

// Arrow-level pairing of two fields sampled with the same coins; colors are
// ignored (any arrow counts).
PairReport pair_trajectories(const ArrowField& first, const ArrowField& second);

struct DegenerationParams {
    double t = 0.0;
    double theta = 40.0;
    double delta = 0.05;

    double z(double q) const { return (1.0 - delta) / (1.0 - delta * q); }
    std::int64_t N() const;
};

// M + x + 1 - h(-x, 0; M - y - 1, M) with N = M = floor(t / delta).
std::int64_t asep_degeneration(const DegenerationParams& params, double q, const SeedSpec& seed,
                               std::int64_t x, std::int64_t y);

}  // namespace kpz::s6v
