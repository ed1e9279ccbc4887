#include "kpzlab/s6v.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace kpz::s6v {

std::int32_t Boundary::at(std::int64_t row) const {
    if (row < bottom || row > top()) return NO_ARROW;
    return colors[static_cast<std::size_t>(row - bottom)];
}

Boundary packed(std::int64_t N) {
    if (N < 0) throw std::invalid_argument("packed boundary needs N >= 0");
    Boundary b{-N, std::vector<std::int32_t>(static_cast<std::size_t>(2 * N + 1)), 0};
    for (std::int64_t k = -N; k <= N; ++k) b.colors[static_cast<std::size_t>(k + N)] = static_cast<std::int32_t>(k);
    return b;
}

Boundary from_profile(const BernoulliPath& h0, std::int64_t entry_column) {
    asep::validate_bernoulli(h0);
    if (h0.values.back() != 0) throw std::invalid_argument("profile must vanish at its right end");
    if (h0.size() < 2) throw std::invalid_argument("profile needs at least two points");
    Boundary b{h0.lo + 1, std::vector<std::int32_t>(static_cast<std::size_t>(h0.size() - 1), NO_ARROW),
               entry_column};
    for (std::size_t i = 1; i < h0.values.size(); ++i)
        if (h0.values[i - 1] - h0.values[i] == 1) b.colors[i - 1] = 1;
    return b;
}

Boundary step_boundary(std::int64_t lo, std::int64_t hi, std::int64_t entry_column) {
    if (hi < lo) throw std::invalid_argument("empty step boundary");
    return Boundary{lo, std::vector<std::int32_t>(static_cast<std::size_t>(hi - lo + 1), 1), entry_column};
}

void validate_parameters(double q, double z) {
    if (!(q >= 0.0 && q < 1.0)) throw std::domain_error("q must lie in [0,1)");
    if (!(z > 0.0 && z < 1.0)) throw std::domain_error("z must lie in (0,1)");
}

std::int64_t default_row_cap(std::int64_t N, std::int64_t T, double q, double z) {
    validate_parameters(q, z);
    const double b_up = coin_probabilities(q, z).b_up;
    std::int64_t climb = 0;
    if (b_up > 0.0) {
        const double arrows = static_cast<double>(std::max<std::int64_t>(T, 1)) * static_cast<double>(N + 1);
        climb = static_cast<std::int64_t>(std::ceil(std::log(arrows / 1e-9) / std::log(1.0 / b_up)));
    }
    return N + T + climb;
}

std::int32_t ArrowField::horizontal_exit(std::int64_t t, std::int64_t k) const {
    if (t < first_column - 1 || t > last_column())
        throw OutOfSampledRegion("column " + std::to_string(t) + " was not sampled");
    if (k < bottom) return NO_ARROW;
    if (t == first_column - 1) return boundary.at(k);
    if (k > row_cap) return NO_ARROW;
    return horizontal[static_cast<std::size_t>(t - first_column)][static_cast<std::size_t>(k - bottom)];
}

std::int32_t ArrowField::vertical_exit(std::int64_t t, std::int64_t k) const {
    if (t < first_column || t > last_column())
        throw OutOfSampledRegion("column " + std::to_string(t) + " was not sampled");
    if (k < bottom || k > row_cap) return NO_ARROW;
    return vertical[static_cast<std::size_t>(t - first_column)][static_cast<std::size_t>(k - bottom)];
}

namespace {

// One column of the colored sweep over rows bottom..bottom+in.size()-1.
// Returns the color still travelling up past the top row.
std::int32_t sweep_column(const std::vector<std::int32_t>& in, std::vector<std::int32_t>& out,
                          std::vector<std::int32_t>* up_out, std::int64_t x, std::int64_t bottom,
                          const SeedSpec& coin_seed, double b_up, double b_right) {
    const std::size_t R = in.size();
    out.assign(R, NO_ARROW);
    if (up_out) up_out->assign(R, NO_ARROW);
    std::size_t last = R;
    for (std::size_t i = R; i-- > 0;)
        if (in[i] != NO_ARROW) {
            last = i;
            break;
        }
    std::int32_t carry = NO_ARROW;
    for (std::size_t i = 0; i < R; ++i) {
        const std::int32_t h = in[i];
        if (carry == NO_ARROW && (last == R || i > last)) break;
        if (carry == h) {
            out[i] = h;
            if (up_out) (*up_out)[i] = carry;
            continue;
        }
        const std::int64_t y = bottom + static_cast<std::int64_t>(i);
        VertexOutcome v;
        if (carry > h)
            v = vertex_rule(carry, h, up_coin_raw(coin_seed, b_up, x, y), false);
        else
            v = vertex_rule(carry, h, false, right_coin_raw(coin_seed, b_right, x, y));
        out[i] = v.right;
        carry = v.up;
        if (up_out) (*up_out)[i] = carry;
    }
    return carry;
}

}  // namespace

ArrowField sample(const Boundary& boundary, double q, double z, std::int64_t T, std::int64_t row_cap,
                  const SeedSpec& seed) {
    validate_parameters(q, z);
    if (T < 0) throw std::domain_error("negative column count");
    if (row_cap < boundary.top())
        throw std::invalid_argument("row cap " + std::to_string(row_cap) + " lies below the boundary top " +
                                    std::to_string(boundary.top()));
    if (boundary.entry_column + 1 < 1) throw std::domain_error("columns start at 1");
    const auto p = coin_probabilities(q, z);
    const SeedSpec coin_seed = seed.with_domain(StreamDomain::s6v_coin);

    ArrowField f;
    f.q = q;
    f.z = z;
    f.seed = seed;
    f.bottom = boundary.bottom;
    f.row_cap = row_cap;
    f.first_column = boundary.entry_column + 1;
    f.columns = T;
    f.boundary = boundary;
    const std::size_t R = static_cast<std::size_t>(row_cap - boundary.bottom + 1);
    std::vector<std::int32_t> current(R, NO_ARROW);
    std::copy(boundary.colors.begin(), boundary.colors.end(), current.begin());
    f.horizontal.resize(static_cast<std::size_t>(T));
    f.vertical.resize(static_cast<std::size_t>(T));
    for (std::int64_t c = 0; c < T; ++c) {
        const std::int64_t x = f.first_column + c;
        auto& out = f.horizontal[static_cast<std::size_t>(c)];
        const std::int32_t escaped = sweep_column(current, out, &f.vertical[static_cast<std::size_t>(c)], x,
                                                  boundary.bottom, coin_seed, p.b_up, p.b_right);
        if (escaped != NO_ARROW)
            throw CapExceeded("arrow of color " + std::to_string(escaped) + " passed row cap " +
                              std::to_string(row_cap) + " in column " + std::to_string(x));
        current = out;
    }
    return f;
}

std::int64_t colored_height(const ArrowField& field, std::int32_t x, std::int64_t y, std::int64_t t) {
    if (t < field.first_column - 1 || t > field.last_column())
        throw OutOfSampledRegion("column " + std::to_string(t) + " was not sampled");
    if (y >= field.row_cap) return 0;
    std::int64_t h = 0;
    const std::int64_t from = std::max(y + 1, field.bottom);
    for (std::int64_t k = from; k <= field.row_cap; ++k)
        if (field.horizontal_exit(t, k) >= x && field.horizontal_exit(t, k) != NO_ARROW) ++h;
    return h;
}

std::vector<std::int32_t> exits_below(const Boundary& boundary, double q, double z, std::int64_t T,
                                      std::int64_t ceiling, const SeedSpec& seed) {
    validate_parameters(q, z);
    if (ceiling < boundary.bottom) return {};
    const auto p = coin_probabilities(q, z);
    const SeedSpec coin_seed = seed.with_domain(StreamDomain::s6v_coin);
    const std::size_t R = static_cast<std::size_t>(ceiling - boundary.bottom + 1);
    std::vector<std::int32_t> current(R, NO_ARROW), next;
    for (std::size_t i = 0; i < R && i < boundary.colors.size(); ++i) current[i] = boundary.colors[i];
    for (std::int64_t c = 0; c < T; ++c) {
        sweep_column(current, next, nullptr, boundary.entry_column + 1 + c, boundary.bottom, coin_seed,
                     p.b_up, p.b_right);
        current.swap(next);
    }
    return current;
}

namespace {

void check_monotone(std::vector<std::int32_t> present, const ColorMap& tau) {
    std::sort(present.begin(), present.end());
    present.erase(std::unique(present.begin(), present.end()), present.end());
    for (std::size_t i = 1; i < present.size(); ++i)
        if (tau(present[i]) < tau(present[i - 1]))
            throw std::invalid_argument("color map is not weakly monotone");
}

std::int32_t apply(const ColorMap& tau, std::int32_t c) { return c == NO_ARROW ? NO_ARROW : tau(c); }

}  // namespace

Boundary merge_colors(const Boundary& b, const ColorMap& tau) {
    std::vector<std::int32_t> present;
    for (auto c : b.colors)
        if (c != NO_ARROW) present.push_back(c);
    check_monotone(present, tau);
    Boundary out = b;
    for (auto& c : out.colors) c = apply(tau, c);
    return out;
}

ArrowField merge_colors(const ArrowField& f, const ColorMap& tau) {
    std::vector<std::int32_t> present;
    for (auto c : f.boundary.colors)
        if (c != NO_ARROW) present.push_back(c);
    check_monotone(present, tau);
    ArrowField out = f;
    out.boundary = merge_colors(f.boundary, tau);
    for (auto& col : out.horizontal)
        for (auto& c : col) c = apply(tau, c);
    for (auto& col : out.vertical)
        for (auto& c : col) c = apply(tau, c);
    return out;
}

UncoloredSweep::UncoloredSweep(std::vector<Interval> arrows, std::int64_t first_column, std::int64_t ceiling,
                               double q, double z, const SeedSpec& seed)
    : column_(first_column - 1), ceiling_(ceiling), seed_(seed.with_domain(StreamDomain::s6v_coin)) {
    validate_parameters(q, z);
    if (first_column < 1) throw std::domain_error("columns start at 1");
    const auto p = coin_probabilities(q, z);
    b_up_ = p.b_up;
    b_right_ = p.b_right;
    std::sort(arrows.begin(), arrows.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    for (auto iv : arrows) {
        if (iv.hi < iv.lo) throw std::invalid_argument("empty run");
        iv.hi = std::min(iv.hi, ceiling_);
        if (iv.hi < iv.lo) continue;
        if (!runs_.empty() && iv.lo <= runs_.back().hi) throw std::invalid_argument("overlapping runs");
        if (!runs_.empty() && iv.lo == runs_.back().hi + 1)
            runs_.back().hi = iv.hi;
        else
            runs_.push_back(iv);
    }
}

void UncoloredSweep::advance_to(std::int64_t column) {
    if (column < column_) throw std::invalid_argument("sweep cannot move backwards");
    while (column_ < column) step();
}

void UncoloredSweep::step() {
    const std::int64_t x = ++column_;
    auto& out = scratch_;
    out.clear();
    auto emit = [&](std::int64_t lo, std::int64_t hi) {
        if (!out.empty() && out.back().hi + 1 == lo)
            out.back().hi = hi;
        else
            out.push_back({lo, hi});
    };
    bool carry = false;
    std::int64_t r = 0;  // row the carried arrow enters from below
    std::size_t k = 0;
    while (k < runs_.size() || carry) {
        if (carry && (k == runs_.size() || runs_[k].lo != r)) {
            if (r > ceiling_) {
                carry = false;
                continue;
            }
            if (up_coin_raw(seed_, b_up_, x, r)) {
                ++r;
            } else {
                emit(r, r);
                carry = false;
            }
            continue;
        }
        const Interval iv = runs_[k++];
        std::int64_t row = iv.lo;
        if (!carry) {
            while (row <= iv.hi) {
                if (right_coin_raw(seed_, b_right_, x, row)) {
                    emit(row, row);
                    ++row;
                } else {
                    carry = true;
                    ++row;
                    break;
                }
            }
            if (!carry) continue;
        }
        if (row <= iv.hi) emit(row, iv.hi);
        r = iv.hi + 1;
    }
    runs_.swap(out);
}

std::int64_t UncoloredSweep::exits_at_or_below(std::int64_t row) const {
    if (row > ceiling_) throw OutOfSampledRegion("row above the sweep ceiling");
    std::int64_t n = 0;
    for (const auto& iv : runs_) {
        if (iv.lo > row) break;
        n += std::min(iv.hi, row) - iv.lo + 1;
    }
    return n;
}

std::int64_t step_height(std::int64_t N, std::int64_t x, std::int64_t y, std::int64_t t, double q, double z,
                         const SeedSpec& seed) {
    validate_parameters(q, z);
    if (t < 0) throw std::domain_error("negative column");
    const std::int64_t lo = std::max(x, -N);
    if (lo > N) return 0;
    const std::int64_t total = N - lo + 1;
    UncoloredSweep sweep({{lo, N}}, 1, y, q, z, seed);
    sweep.advance_to(t);
    return total - sweep.exits_at_or_below(y);
}

std::int64_t height_general(const BernoulliPath& h0, std::int64_t s, const SeedSpec& seed, double q, double z,
                            std::int64_t y, std::int64_t t) {
    validate_parameters(q, z);
    const Boundary b = from_profile(h0, s);
    if (t < s) throw std::domain_error("evaluation column precedes the start column");
    const std::int64_t total = h0.values.front();
    if (y < b.bottom) return total;
    std::vector<Interval> runs;
    for (std::int64_t row = b.bottom; row <= b.top(); ++row) {
        if (b.at(row) == NO_ARROW) continue;
        if (!runs.empty() && runs.back().hi + 1 == row)
            runs.back().hi = row;
        else
            runs.push_back({row, row});
    }
    UncoloredSweep sweep(runs, s + 1, y, q, z, seed);
    sweep.advance_to(t);
    return total - sweep.exits_at_or_below(y);
}

bool PairReport::discrepancy_in(std::int64_t t_lo, std::int64_t t_hi, std::int64_t y_lo, std::int64_t y_hi) const {
    for (const auto& d : discrepancies)
        if (d.column >= t_lo && d.column <= t_hi && d.row >= y_lo && d.row <= y_hi) return true;
    return false;
}

PairReport pair_trajectories(const ArrowField& first, const ArrowField& second) {
    if (first.seed.master_seed != second.seed.master_seed || first.q != second.q || first.z != second.z)
        throw std::invalid_argument("fields were not sampled with the same coins");
    if (first.bottom != second.bottom || first.row_cap != second.row_cap ||
        first.first_column != second.first_column || first.columns != second.columns)
        throw std::invalid_argument("fields cover different strips");

    PairReport rep;
    const std::int64_t bottom = first.bottom;
    const std::size_t R = static_cast<std::size_t>(first.row_cap - bottom + 1);
    // arrow ids travelling horizontally in each row, -1 for none
    std::vector<std::int64_t> h1(R, -1), h2(R, -1);
    for (std::size_t i = 0; i < first.boundary.colors.size(); ++i)
        if (first.boundary.colors[i] != NO_ARROW) h1[i] = rep.arrows_first++;
    for (std::size_t i = 0; i < second.boundary.colors.size(); ++i)
        if (second.boundary.colors[i] != NO_ARROW) h2[i] = rep.arrows_second++;
    rep.partner_first.assign(static_cast<std::size_t>(rep.arrows_first), -1);
    rep.partner_second.assign(static_cast<std::size_t>(rep.arrows_second), -1);
    auto couple = [&](std::int64_t a, std::int64_t b) {
        if (a < 0 || b < 0) return;
        if (rep.partner_first[static_cast<std::size_t>(a)] < 0) {
            rep.partner_first[static_cast<std::size_t>(a)] = b;
            rep.partner_second[static_cast<std::size_t>(b)] = a;
        }
    };
    for (std::size_t i = 0; i < R; ++i) couple(h1[i], h2[i]);

    for (std::int64_t c = 0; c < first.columns; ++c) {
        const auto& o1 = first.horizontal[static_cast<std::size_t>(c)];
        const auto& u1 = first.vertical[static_cast<std::size_t>(c)];
        const auto& o2 = second.horizontal[static_cast<std::size_t>(c)];
        const auto& u2 = second.vertical[static_cast<std::size_t>(c)];
        std::int64_t v1 = -1, v2 = -1;
        bool vin1 = false, vin2 = false;
        for (std::size_t i = 0; i < R; ++i) {
            const bool hin1 = h1[i] >= 0, hin2 = h2[i] >= 0;
            const bool hout1 = o1[i] != NO_ARROW, vout1 = u1[i] != NO_ARROW;
            const bool hout2 = o2[i] != NO_ARROW, vout2 = u2[i] != NO_ARROW;
            if (hin1 != hin2 || vin1 != vin2 || hout1 != hout2 || vout1 != vout2)
                rep.discrepancies.push_back({first.first_column + c, bottom + static_cast<std::int64_t>(i)});
            const int n1 = hin1 + vin1, n2 = hin2 + vin2;
            if (n1 == 1 && n2 == 1 && ((vin1 && vout1 && hin2 && hout2) || (hin1 && hout1 && vin2 && vout2)))
                ++rep.overtaking;

            auto route = [](std::int64_t hid, std::int64_t vid, bool hin, bool vin, bool hout, bool straight_h,
                            std::int64_t& out_h, std::int64_t& out_v) {
                out_h = -1;
                out_v = -1;
                if (hin && vin) {
                    if (straight_h) {
                        out_h = hid;
                        out_v = vid;
                    } else {
                        out_h = vid;
                        out_v = hid;
                    }
                } else if (hin || vin) {
                    const std::int64_t id = hin ? hid : vid;
                    (hout ? out_h : out_v) = id;
                }
            };
            // With two arrows facing one, the arrow sharing the lone arrow's
            // direction copies its move; otherwise two arrows cross.
            bool straight1 = false, straight2 = false;
            if (n1 == 2 && n2 == 1) straight1 = hin2 ? hout2 : vout2;
            if (n2 == 2 && n1 == 1) straight2 = hin1 ? hout1 : vout1;
            std::int64_t oh1, ov1, oh2, ov2;
            route(h1[i], v1, hin1, vin1, hout1, straight1, oh1, ov1);
            route(h2[i], v2, hin2, vin2, hout2, straight2, oh2, ov2);
            couple(oh1, oh2);
            couple(ov1, ov2);
            h1[i] = oh1;
            h2[i] = oh2;
            v1 = ov1;
            v2 = ov2;
            vin1 = ov1 >= 0;
            vin2 = ov2 >= 0;
        }
    }
    for (auto p : rep.partner_first)
        if (p >= 0) ++rep.coupled_pairs;
    rep.uncoupled_first = rep.arrows_first - rep.coupled_pairs;
    rep.uncoupled_second = rep.arrows_second - rep.coupled_pairs;
    return rep;
}

std::int64_t DegenerationParams::N() const {
    if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("delta must lie in (0,1)");
    if (t < 0.0) throw std::domain_error("negative time");
    return static_cast<std::int64_t>(std::floor(t / delta));
}

std::int64_t asep_degeneration(const DegenerationParams& params, double q, const SeedSpec& seed, std::int64_t x,
                               std::int64_t y) {
    const std::int64_t M = params.N();
    const std::int64_t N = M;
    const double z = params.z(q);
    validate_parameters(q, z);
    if (static_cast<double>(std::abs(x)) > 2.0 * params.t || static_cast<double>(std::abs(y)) > 2.0 * params.t)
        throw OutOfSampledRegion("query outside |x|,|y| <= 2t");
    return M + x + 1 - step_height(N, -x, M - y - 1, M, q, z, seed);
}

}  // namespace kpz::s6v
