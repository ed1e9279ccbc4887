#pragma once

#include <cstdint>
#include <istream>
#include <vector>

#include "kpzlab/qboson.hpp"

namespace kpz::lpp {

using Path = std::vector<std::int64_t>;

// Curves f_1..f_n sampled at the integer points lo, lo+1, ...; values in
// between are linear, so every optimum is attained at these points.
struct Environment {
    std::int64_t lo = 0;
    std::vector<Path> curves;  // curves[i-1] = f_i

    std::int64_t hi() const;
    std::int64_t f(int i, std::int64_t t) const;
    void validate() const;
};

Environment read_environment(std::istream& in, std::int64_t lo = 0);

// f[(u,k) -> (v,j)] with j <= k and u <= v.
std::int64_t lpp_value(const Environment& env, std::int64_t u, int k, std::int64_t v, int j);

// Exhaustive maximum over jump times; exponential, used as an oracle.
std::int64_t lpp_brute_force(const Environment& env, std::int64_t u, int k, std::int64_t v, int j);

// PT(f, g)(y) = f(y) + max_{y' <= y} (g(y') - f(y')).
Path pitman(const Path& f, const Path& g);

// PT^(k)((f_i)_{i=1..k}, g), applying f_k first.
Path pitman_iter(const std::vector<Path>& f, const Path& g);

// max_{z <= y} (g(z) + env[(z,k) -> (y,1)]) with env = f.
Path lpp_variational(const std::vector<Path>& f, const Path& g);

// sup_y |L^(j)_1(y) - max_{z <= y}(L^(j)_{k+1}(z) + L^(1)[(z,k) -> (y,1)])|.
std::int64_t pitman_deviation(const qboson::LineEnsemble& L1, const qboson::LineEnsemble& Lj, int k);

// L^(j)_k >= PT(L^(1)_k, L^(j)_{k+1}) pointwise; returns the worst shortfall (0 if it holds).
std::int64_t pitman_lower_bound_shortfall(const qboson::LineEnsemble& L1, const qboson::LineEnsemble& Lj,
                                          int k);

// z -> env[(z,k)->(y1,1)] - env[(z,k)->(y2,1)] is non-increasing over the grid (z <= y1 < y2).
bool crossing_check(const Environment& env, int k, const std::vector<std::int64_t>& z_grid, std::int64_t y1,
                    std::int64_t y2);

// z -> env[(z,k)->(x,1)] + f_k(z) is non-increasing over the grid (z <= x).
bool modified_lpp_monotone(const Environment& env, int k, const std::vector<std::int64_t>& z_grid,
                           std::int64_t x);

}  // namespace kpz::lpp
