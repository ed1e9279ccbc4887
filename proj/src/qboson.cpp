#include "kpzlab/qboson.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace kpz::qboson {

Word Model::sigma_word() const {
    Word w(static_cast<std::size_t>(rows()), 0);
    for (int r = 0; r < N; ++r) w[static_cast<std::size_t>(r)] = sigma[static_cast<std::size_t>(r)];
    return w;
}

void Model::validate() const {
    if (N < 1 || M < 0) throw std::invalid_argument("qboson: need N >= 1 and M >= 0");
    if (static_cast<int>(sigma.size()) != N) throw std::invalid_argument("qboson: sigma must have N entries");
    for (int c : sigma)
        if (c < 1 || c > N) throw std::invalid_argument("qboson: sigma takes values in [1, N]");
    if (!(q >= 0.0 && q < 1.0)) throw std::domain_error("qboson: q must lie in [0,1)");
    if (!(z > 0.0 && z < 1.0)) throw std::domain_error("qboson: z must lie in (0,1)");
}

Model packed_model(int N, int M, double q, double z) {
    Model m{N, M, {}, q, z};
    for (int k = 1; k <= N; ++k) m.sigma.push_back(k);
    m.validate();
    return m;
}

const Word& Configuration::exit_word(int d) const {
    if (d < 1) throw std::out_of_range("column 0 sends every arrow up");
    if (d > K) return boundary;
    return exits[static_cast<std::size_t>(d - 1)];
}

namespace {

double row_u(const Model& m, int row) { return row <= m.N ? 1.0 : m.z; }

// Every out-word of a non-final column fed by `in`, with its weight.
template <class F>
void column_moves(const Model& m, const Word& in, F&& emit) {
    const int U = m.rows();
    Word out(static_cast<std::size_t>(U), 0);
    Counts A(static_cast<std::size_t>(m.N), 0);
    std::function<void(int, double, int)> rec = [&](int r, double w, int stack) {
        if (r == U) {
            if (stack == 0) emit(out, w);
            return;
        }
        const int i = in[static_cast<std::size_t>(r)];
        if (i > 0) {
            ++A[static_cast<std::size_t>(i - 1)];
            ++stack;
        }
        const int room = U - r - 1;
        for (int j = 0; j <= m.N; ++j) {
            if (j > 0 && A[static_cast<std::size_t>(j - 1)] == 0) continue;
            const int after = stack - (j > 0 ? 1 : 0);
            if (after > room) continue;
            Counts before = A;
            if (i > 0) --before[static_cast<std::size_t>(i - 1)];
            if (j > 0) --A[static_cast<std::size_t>(j - 1)];
            const double vw = weight_L(row_u(m, r + 1), m.q, before, i, A, j);
            if (vw != 0.0) {
                out[static_cast<std::size_t>(r)] = j;
                rec(r + 1, w * vw, after);
            }
            if (j > 0) ++A[static_cast<std::size_t>(j - 1)];
        }
        out[static_cast<std::size_t>(r)] = 0;
        if (i > 0) --A[static_cast<std::size_t>(i - 1)];
    };
    rec(0, 1.0, 0);
}

}  // namespace

std::vector<std::vector<Vertex>> records(const Model& model, const Configuration& config) {
    const int U = model.rows();
    std::vector<std::vector<Vertex>> out(static_cast<std::size_t>(config.K + 1));
    for (int d = config.K; d >= 0; --d) {
        const Word& in = config.exit_word(d + 1);
        const Word zero(static_cast<std::size_t>(U), 0);
        const Word& exit = d == 0 ? zero : config.exit_word(d);
        Counts A(static_cast<std::size_t>(model.N), 0);
        auto& col = out[static_cast<std::size_t>(d)];
        for (int r = 0; r < U; ++r) {
            Vertex v{A, in[static_cast<std::size_t>(r)], A, exit[static_cast<std::size_t>(r)]};
            if (v.i > 0) ++v.B[static_cast<std::size_t>(v.i - 1)];
            if (v.j > 0 && --v.B[static_cast<std::size_t>(v.j - 1)] < 0)
                throw std::invalid_argument("configuration releases a missing arrow at column " +
                                            std::to_string(-d) + ", row " + std::to_string(r + 1));
            A = v.B;
            col.push_back(std::move(v));
        }
        if (d > 0 && total(A) != 0)
            throw std::invalid_argument("arrows leave the top of column " + std::to_string(-d));
    }
    return out;
}

double configuration_weight(const Model& model, const Configuration& config) {
    const auto rec = records(model, config);
    double w = 1.0;
    for (const auto& col : rec)
        for (std::size_t r = 0; r < col.size(); ++r) {
            const Vertex& v = col[r];
            w *= weight_L(row_u(model, static_cast<int>(r) + 1), model.q, v.A, v.i, v.B, v.j);
        }
    return w;
}

Transfer::Transfer(const Model& model, const WordFilter& allow) : model_(model) {
    model_.validate();
    const Word s = model_.sigma_word();
    if (allow && !allow(s)) throw std::invalid_argument("filter rejects the boundary word");
    words_.push_back(s);
    index_[s] = 0;
    for (std::size_t k = 0; k < words_.size(); ++k) {
        std::vector<std::pair<std::size_t, double>> mv;
        const Word from = words_[k];
        column_moves(model_, from, [&](const Word& out, double w) {
            if (allow && !allow(out)) return;
            auto it = index_.find(out);
            std::size_t t;
            if (it == index_.end()) {
                t = words_.size();
                index_.emplace(out, t);
                words_.push_back(out);
            } else {
                t = it->second;
            }
            mv.emplace_back(t, w);
        });
        moves_.push_back(std::move(mv));
    }
}

std::vector<double> Transfer::forward(int K) const {
    if (K < 0) throw std::invalid_argument("negative column cutoff");
    std::vector<double> v(words_.size(), 0.0);
    v[start_] = 1.0;
    for (int k = 0; k < K; ++k) {
        std::vector<double> nv(words_.size(), 0.0);
        for (std::size_t s = 0; s < words_.size(); ++s)
            if (v[s] != 0.0)
                for (const auto& [t, w] : moves_[s]) nv[t] += v[s] * w;
        v.swap(nv);
    }
    return v;
}

double Transfer::partition(int K) const {
    const auto v = forward(K);
    double z = 0.0;
    for (double x : v) z += x;
    return z;
}

double Transfer::tail_estimate(int K) const { return partition(2 * K) - partition(K); }

std::vector<WeightedConfiguration> Transfer::enumerate(int K, std::size_t max_configs) const {
    if (K < 1) throw std::invalid_argument("column cutoff must be at least 1");
    std::vector<WeightedConfiguration> out;
    std::vector<std::size_t> path(static_cast<std::size_t>(K));
    std::function<void(int, std::size_t, double)> rec = [&](int step, std::size_t s, double w) {
        if (step == K) {
            if (out.size() >= max_configs)
                throw ResourceLimit("enumeration exceeds " + std::to_string(max_configs) +
                                    " configurations; lower K or use the transfer partition function");
            Configuration c{K, std::vector<Word>(static_cast<std::size_t>(K)), model_.sigma_word()};
            for (int k = 0; k < K; ++k)
                c.exits[static_cast<std::size_t>(K - 1 - k)] = words_[path[static_cast<std::size_t>(k)]];
            out.push_back({std::move(c), w});
            return;
        }
        for (const auto& [t, mw] : moves_[s]) {
            path[static_cast<std::size_t>(step)] = t;
            rec(step + 1, t, w * mw);
        }
    };
    rec(0, start_, 1.0);
    return out;
}

std::map<std::vector<Word>, double> Transfer::exit_law(int K, int m) const {
    if (m < 1 || m > K) throw std::invalid_argument("exit law needs 1 <= m <= K");
    const auto F = forward(K - m);
    const double Z = partition(K);
    std::map<std::vector<Word>, double> law;
    std::vector<Word> tuple(static_cast<std::size_t>(m));
    std::function<void(int, std::size_t, double)> rec = [&](int step, std::size_t s, double w) {
        if (step == m) {
            law[tuple] += w / Z;
            return;
        }
        for (const auto& [t, mw] : moves_[s]) {
            tuple[static_cast<std::size_t>(m - 1 - step)] = words_[t];
            rec(step + 1, t, w * mw);
        }
    };
    for (std::size_t s = 0; s < words_.size(); ++s)
        if (F[s] != 0.0) rec(0, s, F[s]);
    return law;
}

int default_cutoff(const Transfer& transfer, double tol) {
    for (int K = 8; K <= 4096; K *= 2)
        if (transfer.tail_estimate(K) <= tol) return K;
    throw ResourceLimit("no column cutoff up to 4096 reaches the requested tail");
}

ExactSampler::ExactSampler(const Transfer& transfer, int K) : transfer_(transfer), K_(K) {
    if (K < 1) throw std::invalid_argument("column cutoff must be at least 1");
    const std::size_t n = transfer.states();
    remaining_.assign(static_cast<std::size_t>(K + 1), std::vector<double>(n, 0.0));
    std::fill(remaining_[0].begin(), remaining_[0].end(), 1.0);
    for (int m = 1; m <= K; ++m)
        for (std::size_t s = 0; s < n; ++s) {
            double acc = 0.0;
            for (const auto& [t, w] : transfer.moves(s)) acc += w * remaining_[static_cast<std::size_t>(m - 1)][t];
            remaining_[static_cast<std::size_t>(m)][s] = acc;
        }
}

double ExactSampler::partition() const { return remaining_[static_cast<std::size_t>(K_)][transfer_.start()]; }

Configuration ExactSampler::draw(const SeedSpec& seed) const {
    const SeedSpec s = seed.with_domain(StreamDomain::replica);
    Configuration c{K_, std::vector<Word>(static_cast<std::size_t>(K_)), transfer_.model().sigma_word()};
    std::size_t cur = transfer_.start();
    for (int step = 0; step < K_; ++step) {
        const auto& rem = remaining_[static_cast<std::size_t>(K_ - step - 1)];
        const double target =
            draw_uniform(s, 0x9b05, static_cast<std::uint64_t>(step)) *
            remaining_[static_cast<std::size_t>(K_ - step)][cur];
        double acc = 0.0;
        std::size_t next = transfer_.moves(cur).back().first;
        for (const auto& [t, w] : transfer_.moves(cur)) {
            const double p = w * rem[t];
            if (p == 0.0) continue;
            next = t;
            acc += p;
            if (acc > target) break;
        }
        cur = next;
        c.exits[static_cast<std::size_t>(K_ - 1 - step)] = transfer_.word(cur);
    }
    return c;
}

Configuration exact_sample(const Model& model, int K, const SeedSpec& seed) {
    const Transfer t(model);
    return ExactSampler(t, K).draw(seed);
}

std::int64_t LineEnsemble::at(int i, int y) const {
    if (i < 1) throw std::out_of_range("curve index starts at 1");
    const auto& c = curves[static_cast<std::size_t>(std::min<int>(i, static_cast<int>(curves.size())) - 1)];
    if (y < 0 || y >= static_cast<int>(c.size())) throw std::out_of_range("row outside [0, U]");
    return c[static_cast<std::size_t>(y)];
}

LineEnsemble line_ensemble(const Configuration& config, int k) {
    if (k < 1) throw std::invalid_argument("color index starts at 1");
    const int U = static_cast<int>(config.boundary.size());
    LineEnsemble le{k, {}};
    for (int i = 1; i <= config.K + 1; ++i) {
        const Word& w = config.exit_word(i);
        Path p(static_cast<std::size_t>(U + 1), 0);
        for (int y = U - 1; y >= 0; --y)
            p[static_cast<std::size_t>(y)] = p[static_cast<std::size_t>(y + 1)] + (w[static_cast<std::size_t>(y)] >= k ? 1 : 0);
        le.curves.push_back(std::move(p));
    }
    return le;
}

std::string check_basic_properties(const std::vector<LineEnsemble>& colors) {
    for (std::size_t k = 0; k < colors.size(); ++k) {
        const auto& cv = colors[k].curves;
        for (std::size_t i = 0; i < cv.size(); ++i)
            for (std::size_t y = 0; y < cv[i].size(); ++y) {
                if (y + 1 < cv[i].size()) {
                    const auto d = cv[i][y + 1] - cv[i][y];
                    if (d != 0 && d != -1) return "increment outside {0,-1}";
                }
                if (i + 1 < cv.size() && cv[i][y] < cv[i + 1][y]) return "curves out of order";
                if (k + 1 < colors.size() && cv[i][y] < colors[k + 1].curves[i][y]) return "colors out of order";
            }
    }
    return {};
}

YangBaxterResult yang_baxter_check(const Rational& q, const Rational& x, const Rational& y, int a1,
                                   int i1, int b2, int j2, const Counts& I, const Counts& J) {
    if (I.size() != J.size()) throw std::invalid_argument("I and J differ in length");
    const int n = static_cast<int>(I.size());
    for (int c : {a1, i1, b2, j2})
        if (c < 0 || c > n) throw std::invalid_argument("color out of range");
    YangBaxterResult res;
    for (int c = 1; c <= n; ++c)
        if (I[c - 1] + (a1 == c) + (i1 == c) != J[c - 1] + (b2 == c) + (j2 == c)) res.compatible = false;
    if (!res.compatible) return res;
    const Rational zr = y / x;
    auto shifted = [](Counts v, int plus, int minus) -> std::optional<Counts> {
        if (plus > 0) ++v[plus - 1];
        if (minus > 0 && --v[minus - 1] < 0) return std::nullopt;
        return v;
    };
    for (int b1 = 0; b1 <= n; ++b1)
        for (int j1 = 0; j1 <= n; ++j1) {
            if (auto K = shifted(I, j1, j2)) {
                const Rational r = weight_R(zr, q, a1, i1, b1, j1);
                if (r != 0) res.lhs += r * weight_L(x, q, I, j1, *K, j2) * weight_L(y, q, *K, b1, J, b2);
            }
            if (auto K = shifted(I, a1, b1)) {
                const Rational r = weight_R(zr, q, b1, j1, b2, j2);
                if (r != 0) res.rhs += weight_L(y, q, I, a1, *K, b1) * weight_L(x, q, *K, i1, J, j1) * r;
            }
        }
    return res;
}

void validate_merge(const ColorMerge& tau) {
    if (tau.empty() || tau[0] != 0) throw std::invalid_argument("color map must send 0 to 0");
    for (std::size_t c = 1; c < tau.size(); ++c) {
        if (tau[c] < 1) throw std::invalid_argument("color map must send positive colors to positive colors");
        if (tau[c] < tau[c - 1]) throw std::invalid_argument("color map must be non-decreasing");
    }
}

Counts merge_counts(const Counts& A, const ColorMerge& tau) {
    validate_merge(tau);
    if (tau.size() != A.size() + 1) throw std::invalid_argument("color map has wrong length");
    Counts out(static_cast<std::size_t>(tau.back()), 0);
    for (std::size_t c = 1; c < tau.size(); ++c) out[static_cast<std::size_t>(tau[c] - 1)] += A[c - 1];
    return out;
}

bool compatible(const Word& v, const Word& x) {
    if (v.size() != x.size()) return false;
    long in = 0, out = 0;
    for (std::size_t y = 0; y < v.size(); ++y) {
        if (v[y] < 0 || v[y] > 2 || (x[y] != 0 && x[y] != 1)) return false;
        in += v[y] > 0;
        out += x[y];
        if (out > in) return false;
    }
    return in == out;
}

Word q0_assign_colors(const Word& v, const Word& x) {
    if (!compatible(v, x)) throw std::invalid_argument("incoming colors and exit indicators are not compatible");
    Word w(v.size(), 0);
    int ones = 0, twos = 0;
    for (std::size_t y = 0; y < v.size(); ++y) {
        ones += v[y] == 1;
        twos += v[y] == 2;
        if (!x[y]) continue;
        if (twos > 0) {
            w[y] = 2;
            --twos;
        } else {
            w[y] = 1;
            --ones;
        }
    }
    return w;
}

std::int64_t color_height(const Word& w, int color, int y) {
    std::int64_t h = 0;
    for (std::size_t k = static_cast<std::size_t>(std::max(y, 0)); k < w.size(); ++k) h += w[k] == color;
    return h;
}

std::vector<Word> valid_assignments(const Word& v, const Word& x) {
    if (!compatible(v, x)) throw std::invalid_argument("incoming colors and exit indicators are not compatible");
    const int U = static_cast<int>(v.size());
    std::vector<int> slots;
    for (int y = 0; y < U; ++y)
        if (x[static_cast<std::size_t>(y)]) slots.push_back(y);
    std::vector<Word> out;
    for (std::uint32_t mask = 0; mask < (1u << slots.size()); ++mask) {
        Word w(v.size(), 0);
        for (std::size_t k = 0; k < slots.size(); ++k) w[static_cast<std::size_t>(slots[k])] = (mask >> k & 1u) ? 2 : 1;
        bool ok = true;
        for (int c = 1; c <= 2 && ok; ++c) {
            if (color_height(w, c, 0) != color_height(v, c, 0)) ok = false;
            for (int y = 0; y < U && ok; ++y)
                if (color_height(w, c, y) < color_height(v, c, y)) ok = false;
        }
        if (ok) out.push_back(std::move(w));
    }
    return out;
}

std::int64_t pitman_error(const Word& w, const Word& w_star) {
    if (w.size() != w_star.size()) throw std::invalid_argument("words differ in length");
    std::int64_t best = 0;
    for (int y = 0; y <= static_cast<int>(w.size()); ++y)
        best = std::max(best, color_height(w, 2, y) - color_height(w_star, 2, y));
    return best;
}

double weight_factor(const std::vector<Path>& gamma, const std::optional<Path>& f,
                     const std::optional<Path>& g, double q) {
    if (gamma.empty()) throw std::invalid_argument("weight factor needs at least one curve");
    const std::size_t len = gamma.front().size();
    std::vector<const Path*> stack;
    stack.push_back(f ? &*f : nullptr);
    for (const auto& p : gamma) stack.push_back(&p);
    stack.push_back(g ? &*g : nullptr);
    for (const Path* p : stack)
        if (p && p->size() != len) throw std::invalid_argument("paths must share one interval");
    double w = 1.0;
    for (std::size_t i = 0; i + 1 < stack.size(); ++i) {
        const Path* hi = stack[i];
        const Path* lo = stack[i + 1];
        if (!hi || !lo) continue;
        for (std::size_t x = 0; x < len; ++x) {
            const std::int64_t d = (*hi)[x] - (*lo)[x];
            if (d < 0) return 0.0;
            if (x > 0) {
                const std::int64_t prev = (*hi)[x - 1] - (*lo)[x - 1];
                if (d == prev - 1) w *= 1.0 - ipow(q, static_cast<long>(prev));
            }
        }
    }
    return w;
}

std::vector<Path> PathLaw::draw(const SeedSpec& seed) const {
    const double u = draw_uniform(seed.with_domain(StreamDomain::replica), 0x6a1b, 0);
    double acc = 0.0;
    for (std::size_t k = 0; k < outcomes.size(); ++k) {
        acc += probabilities[k];
        if (u < acc) return outcomes[k];
    }
    for (std::size_t k = outcomes.size(); k-- > 0;)
        if (probabilities[k] > 0.0) return outcomes[k];
    throw std::runtime_error("empty law");
}

namespace {

// All Bernoulli bridges from `start` dropping `drops` over `steps` steps.
std::vector<Path> bridges(std::int64_t start, std::int64_t drops, std::size_t steps) {
    if (drops < 0 || drops > static_cast<std::int64_t>(steps))
        throw std::runtime_error("no admissible bridge between the given endpoints");
    std::vector<Path> out;
    Path p(steps + 1, start);
    std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t x, std::int64_t left) {
        if (x == steps) {
            if (left == 0) out.push_back(p);
            return;
        }
        if (static_cast<std::int64_t>(steps - x) > left) {
            p[x + 1] = p[x];
            rec(x + 1, left);
        }
        if (left > 0) {
            p[x + 1] = p[x] - 1;
            rec(x + 1, left - 1);
        }
    };
    rec(0, drops);
    return out;
}

void normalize(PathLaw& law, const char* what) {
    double s = 0.0;
    for (double w : law.probabilities) s += w;
    if (!(s > 0.0)) throw std::runtime_error(std::string(what) + ": conditional law has empty support");
    for (auto& w : law.probabilities) w /= s;
}

}  // namespace

PathLaw hl_gibbs_law(const std::vector<Path>& top, const std::optional<Path>& f, const std::optional<Path>& g,
                     double q, const std::vector<double>& step_factor, std::size_t max_outcomes) {
    if (top.empty()) throw std::invalid_argument("no curves to resample");
    const std::size_t len = top.front().size();
    if (len < 1) throw std::invalid_argument("empty interval");
    if (!step_factor.empty() && step_factor.size() != len)
        throw std::invalid_argument("step factors must cover the interval");
    std::vector<std::vector<Path>> choices;
    double count = 1.0;
    for (const auto& c : top) {
        if (c.size() != len) throw std::invalid_argument("curves must share one interval");
        choices.push_back(bridges(c.front(), c.front() - c.back(), len - 1));
        count *= static_cast<double>(choices.back().size());
    }
    if (count > static_cast<double>(max_outcomes))
        throw ResourceLimit("bridge enumeration exceeds " + std::to_string(max_outcomes) + " tuples");
    PathLaw law;
    std::vector<Path> cur(top.size());
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
        if (k == top.size()) {
            double w = weight_factor(cur, f, g, q);
            if (w == 0.0) return;
            if (!step_factor.empty())
                for (const auto& p : cur)
                    for (std::size_t x = 1; x < len; ++x)
                        if (p[x] == p[x - 1] - 1) w *= step_factor[x];
            law.outcomes.push_back(cur);
            law.probabilities.push_back(w);
            return;
        }
        for (const auto& b : choices[k]) {
            cur[k] = b;
            rec(k + 1);
        }
    };
    rec(0);
    normalize(law, "hl_gibbs");
    return law;
}

std::vector<Path> hl_gibbs_resample(const std::vector<Path>& top, const std::optional<Path>& f,
                                    const std::optional<Path>& g, double q, const SeedSpec& seed,
                                    const std::vector<double>& step_factor) {
    return hl_gibbs_law(top, f, g, q, step_factor).draw(seed);
}

PathLaw colored_gibbs_law(const Path& L1_k, const Path& L1_next, const Path& L2_next, int N, double q,
                          double z) {
    const std::size_t len = L1_k.size();
    if (len < 2 || L1_next.size() != len || L2_next.size() != len)
        throw std::invalid_argument("curves must share [0, U]");
    const int U = static_cast<int>(len) - 1;
    auto drop = [](const Path& p, int y) { return p[static_cast<std::size_t>(y - 1)] - p[static_cast<std::size_t>(y)]; };
    Word in(static_cast<std::size_t>(U), 0);
    std::vector<int> slots;
    for (int y = 1; y <= U; ++y) {
        for (const Path* p : {&L1_k, &L1_next, &L2_next})
            if (drop(*p, y) != 0 && drop(*p, y) != 1) throw std::invalid_argument("not a Bernoulli path");
        if (drop(L2_next, y) && !drop(L1_next, y)) throw std::invalid_argument("color-2 exit without an arrow");
        in[static_cast<std::size_t>(y - 1)] = drop(L2_next, y) ? 2 : drop(L1_next, y) ? 1 : 0;
        if (drop(L1_k, y)) slots.push_back(y);
    }
    const std::int64_t need = L2_next.front();
    if (need < 0 || need > static_cast<std::int64_t>(slots.size()))
        throw std::runtime_error("colored_gibbs: conditional law has empty support");
    PathLaw law;
    std::vector<int> pick;
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
        if (static_cast<std::int64_t>(pick.size()) == need) {
            Path Lp(len, 0);
            Word out(static_cast<std::size_t>(U), 0);
            for (int y : slots) out[static_cast<std::size_t>(y - 1)] = 1;
            for (int y : pick) out[static_cast<std::size_t>(y - 1)] = 2;
            for (int y = U - 1; y >= 0; --y)
                Lp[static_cast<std::size_t>(y)] = Lp[static_cast<std::size_t>(y + 1)] + (out[static_cast<std::size_t>(y)] == 2);
            for (std::size_t y = 0; y < len; ++y)
                if (Lp[y] < L2_next[y]) return;
            Counts A{0, 0};
            double w = 1.0;
            for (int y = 1; y <= U && w != 0.0; ++y) {
                const int i = in[static_cast<std::size_t>(y - 1)];
                const int j = out[static_cast<std::size_t>(y - 1)];
                Counts B = A;
                if (i > 0) ++B[static_cast<std::size_t>(i - 1)];
                if (j > 0 && --B[static_cast<std::size_t>(j - 1)] < 0) {
                    w = 0.0;
                    break;
                }
                w *= weight_L(y <= N ? 1.0 : z, q, A, i, B, j);
                A = B;
            }
            if (w == 0.0 || total(A) != 0) return;
            law.outcomes.push_back({Lp});
            law.probabilities.push_back(w);
            return;
        }
        for (std::size_t s = k; s < slots.size(); ++s) {
            pick.push_back(slots[s]);
            rec(s + 1);
            pick.pop_back();
        }
    };
    rec(0);
    normalize(law, "colored_gibbs");
    return law;
}

Path colored_gibbs_resample(const Path& L1_k, const Path& L1_next, const Path& L2_next, int N, double q,
                            double z, const SeedSpec& seed) {
    return colored_gibbs_law(L1_k, L1_next, L2_next, N, q, z).draw(seed).front();
}

}  // namespace kpz::qboson
