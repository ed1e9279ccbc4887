#include "kpzlab/lpp.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

namespace kpz::lpp {

std::int64_t Environment::hi() const {
    return lo + static_cast<std::int64_t>(curves.empty() ? 0 : curves.front().size()) - 1;
}

std::int64_t Environment::f(int i, std::int64_t t) const {
    if (i < 1 || i > static_cast<int>(curves.size())) throw std::out_of_range("curve index out of range");
    if (t < lo || t > hi()) throw std::out_of_range("time outside the environment");
    return curves[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(t - lo)];
}

void Environment::validate() const {
    if (curves.empty() || curves.front().empty()) throw std::invalid_argument("empty environment");
    for (const auto& c : curves)
        if (c.size() != curves.front().size()) throw std::invalid_argument("curves must share one domain");
}

Environment read_environment(std::istream& in, std::int64_t lo) {
    Environment env{lo, {}};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ls(line);
        Path p;
        std::string tok;
        while (ls >> tok) {
            try {
                std::size_t used = 0;
                p.push_back(std::stoll(tok, &used));
                if (used != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                throw std::invalid_argument("environment line " + std::to_string(lineno) + ": bad value '" + tok + "'");
            }
        }
        env.curves.push_back(std::move(p));
    }
    env.validate();
    return env;
}

namespace {

void check_query(const Environment& env, std::int64_t u, int k, std::int64_t v, int j) {
    env.validate();
    const int n = static_cast<int>(env.curves.size());
    if (j < 1 || k > n || j > k) throw std::out_of_range("need 1 <= j <= k <= n");
    if (u > v) throw std::out_of_range("need u <= v");
    if (u < env.lo || v > env.hi()) throw std::out_of_range("endpoints outside the environment");
}

}  // namespace

std::int64_t lpp_value(const Environment& env, std::int64_t u, int k, std::int64_t v, int j) {
    check_query(env, u, k, v, j);
    const std::size_t len = static_cast<std::size_t>(v - u + 1);
    std::vector<std::int64_t> D(len);
    for (std::size_t s = 0; s < len; ++s) D[s] = env.f(k, u + static_cast<std::int64_t>(s)) - env.f(k, u);
    for (int i = k - 1; i >= j; --i) {
        std::int64_t best = std::numeric_limits<std::int64_t>::min();
        for (std::size_t s = 0; s < len; ++s) {
            const std::int64_t fi = env.f(i, u + static_cast<std::int64_t>(s));
            best = std::max(best, D[s] - fi);
            D[s] = fi + best;
        }
    }
    return D.back();
}

std::int64_t lpp_brute_force(const Environment& env, std::int64_t u, int k, std::int64_t v, int j) {
    check_query(env, u, k, v, j);
    std::vector<std::int64_t> t(static_cast<std::size_t>(k + 1));
    t[static_cast<std::size_t>(k)] = u;
    t[static_cast<std::size_t>(j - 1)] = v;
    std::int64_t best = std::numeric_limits<std::int64_t>::min();
    std::function<void(int)> rec = [&](int i) {
        if (i < j) {
            std::int64_t s = 0;
            for (int m = j; m <= k; ++m)
                s += env.f(m, t[static_cast<std::size_t>(m - 1)]) - env.f(m, t[static_cast<std::size_t>(m)]);
            best = std::max(best, s);
            return;
        }
        for (std::int64_t x = t[static_cast<std::size_t>(i + 1)]; x <= v; ++x) {
            t[static_cast<std::size_t>(i)] = x;
            rec(i - 1);
        }
    };
    if (k == j) return env.f(k, v) - env.f(k, u);
    rec(k - 1);
    return best;
}

Path pitman(const Path& f, const Path& g) {
    if (f.size() != g.size() || f.empty()) throw std::invalid_argument("pitman: paths must share a nonempty domain");
    Path out(f.size());
    std::int64_t best = std::numeric_limits<std::int64_t>::min();
    for (std::size_t y = 0; y < f.size(); ++y) {
        best = std::max(best, g[y] - f[y]);
        out[y] = f[y] + best;
    }
    return out;
}

Path pitman_iter(const std::vector<Path>& f, const Path& g) {
    if (f.empty()) throw std::invalid_argument("pitman_iter: no curves");
    Path cur = g;
    for (std::size_t i = f.size(); i-- > 0;) cur = pitman(f[i], cur);
    return cur;
}

Path lpp_variational(const std::vector<Path>& f, const Path& g) {
    if (f.empty()) throw std::invalid_argument("lpp_variational: no curves");
    const Environment env{0, f};
    env.validate();
    if (g.size() != f.front().size()) throw std::invalid_argument("lpp_variational: g has the wrong length");
    const int k = static_cast<int>(f.size());
    Path out(g.size());
    for (std::size_t y = 0; y < g.size(); ++y) {
        std::int64_t best = std::numeric_limits<std::int64_t>::min();
        for (std::size_t z = 0; z <= y; ++z)
            best = std::max(best, g[z] + lpp_value(env, static_cast<std::int64_t>(z), k, static_cast<std::int64_t>(y), 1));
        out[y] = best;
    }
    return out;
}

namespace {

void check_pair(const qboson::LineEnsemble& L1, const qboson::LineEnsemble& Lj, int k) {
    if (k < 1) throw std::invalid_argument("k must be positive");
    if (L1.curves.empty() || L1.curves.size() != Lj.curves.size() ||
        L1.curves.front().size() != Lj.curves.front().size())
        throw std::invalid_argument("line ensembles have mismatched domains");
}

Path curve(const qboson::LineEnsemble& L, int i) {
    return L.curves[static_cast<std::size_t>(std::min<int>(i, static_cast<int>(L.curves.size())) - 1)];
}

}  // namespace

std::int64_t pitman_deviation(const qboson::LineEnsemble& L1, const qboson::LineEnsemble& Lj, int k) {
    check_pair(L1, Lj, k);
    std::vector<Path> f;
    for (int i = 1; i <= k; ++i) f.push_back(curve(L1, i));
    const Path rep = lpp_variational(f, curve(Lj, k + 1));
    const Path top = curve(Lj, 1);
    std::int64_t dev = 0;
    for (std::size_t y = 0; y < top.size(); ++y) dev = std::max<std::int64_t>(dev, std::abs(top[y] - rep[y]));
    return dev;
}

std::int64_t pitman_lower_bound_shortfall(const qboson::LineEnsemble& L1, const qboson::LineEnsemble& Lj,
                                          int k) {
    check_pair(L1, Lj, k);
    const Path pt = pitman(curve(L1, k), curve(Lj, k + 1));
    const Path lk = curve(Lj, k);
    std::int64_t worst = 0;
    for (std::size_t y = 0; y < pt.size(); ++y) worst = std::max(worst, pt[y] - lk[y]);
    return worst;
}

bool crossing_check(const Environment& env, int k, const std::vector<std::int64_t>& z_grid, std::int64_t y1,
                    std::int64_t y2) {
    if (y1 >= y2) throw std::invalid_argument("crossing check needs y1 < y2");
    std::vector<std::int64_t> zs = z_grid;
    std::sort(zs.begin(), zs.end());
    std::int64_t prev = std::numeric_limits<std::int64_t>::max();
    for (std::int64_t z : zs) {
        if (z > y1) break;
        const std::int64_t d = lpp_value(env, z, k, y1, 1) - lpp_value(env, z, k, y2, 1);
        if (d > prev) return false;
        prev = d;
    }
    return true;
}

bool modified_lpp_monotone(const Environment& env, int k, const std::vector<std::int64_t>& z_grid,
                           std::int64_t x) {
    std::vector<std::int64_t> zs = z_grid;
    std::sort(zs.begin(), zs.end());
    std::int64_t prev = std::numeric_limits<std::int64_t>::max();
    for (std::int64_t z : zs) {
        if (z > x) break;
        const std::int64_t d = lpp_value(env, z, k, x, 1) + env.f(k, z);
        if (d > prev) return false;
        prev = d;
    }
    return true;
}

}  // namespace kpz::lpp
