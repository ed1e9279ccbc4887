#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "kpzlab/randomness.hpp"

namespace kpz::qboson {

using Rational = boost::multiprecision::cpp_rational;

// Per-color vertical arrow counts; index c-1 holds color c.
using Counts = std::vector<int>;
// Horizontal colors on rows 1..U (index row-1); 0 means no arrow.
using Word = std::vector<int>;
using Path = std::vector<std::int64_t>;

class ResourceLimit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

template <class S>
S ipow(const S& base, long e) {
    S out = 1;
    for (long k = 0; k < e; ++k) out *= base;
    return out;
}

inline int total(const Counts& A) {
    int s = 0;
    for (int a : A) s += a;
    return s;
}

// A_[from, N] for 1-based colors.
inline int tail_count(const Counts& A, int from) {
    int s = 0;
    for (int c = from; c <= static_cast<int>(A.size()); ++c) s += A[c - 1];
    return s;
}

// L_u(A, i; B, j). Zero unless B = A + e_i - e_j.
template <class S>
S weight_L(const S& u, const S& q, const Counts& A, int i, const Counts& B, int j) {
    if (A.size() != B.size()) throw std::invalid_argument("weight_L: count vectors differ in length");
    const int n = static_cast<int>(A.size());
    for (std::size_t c = 0; c < A.size(); ++c)
        if (A[c] < 0 || B[c] < 0) throw std::domain_error("weight_L: negative arrow count");
    if (i < 0 || j < 0 || i > n || j > n) throw std::domain_error("weight_L: color out of range");
    for (int c = 1; c <= n; ++c)
        if (A[c - 1] + (i == c) != B[c - 1] + (j == c)) return S(0);
    if (j == 0) return S(1);
    if (i == j) return u * ipow(q, tail_count(A, i + 1));
    if (i > j) return S(0);
    return u * (S(1) - ipow(q, A[j - 1])) * ipow(q, tail_count(A, j + 1));
}

// Colored stochastic six-vertex weight R_z(a, i; b, j), 0 = no arrow.
template <class S>
S weight_R(const S& z, const S& q, int a, int i, int b, int j) {
    if (a == i) return (b == a && j == i) ? S(1) : S(0);
    const S den = S(1) - q * z;
    const bool straight = b == a && j == i;
    const bool cross = b == i && j == a;
    if (!straight && !cross) return S(0);
    if (a > i) return straight ? q * (S(1) - z) / den : (S(1) - q) / den;
    return straight ? (S(1) - z) / den : z * (S(1) - q) / den;
}

struct Model {
    int N = 1;
    int M = 1;
    std::vector<int> sigma;  // sigma(1..N), colors in 1..N
    double q = 0.5;
    double z = 0.5;

    int rows() const { return N + M; }
    Word sigma_word() const;
    void validate() const;
};

Model packed_model(int N, int M, double q, double z);

// Horizontal exits of columns -1..-K; every column further left carries the
// boundary word unchanged and column 0 sends all arrows up.
struct Configuration {
    int K = 0;
    std::vector<Word> exits;  // exits[d-1] = word leaving column -d
    Word boundary;

    const Word& exit_word(int d) const;
    bool operator==(const Configuration&) const = default;
};

struct WeightedConfiguration {
    Configuration config;
    double weight = 0.0;
};

struct Vertex {
    Counts A;
    int i = 0;
    Counts B;
    int j = 0;
};

// records[d][y-1] for column -d, d = 0..K.
std::vector<std::vector<Vertex>> records(const Model& model, const Configuration& config);

// Product of vertex weights over columns -K..0.
double configuration_weight(const Model& model, const Configuration& config);

using WordFilter = std::function<bool(const Word&)>;

// Column transfer structure on words reachable from the boundary word.
class Transfer {
public:
    explicit Transfer(const Model& model, const WordFilter& allow = {});

    const Model& model() const { return model_; }
    std::size_t states() const { return words_.size(); }
    const Word& word(std::size_t s) const { return words_[s]; }
    std::size_t start() const { return start_; }
    const std::vector<std::pair<std::size_t, double>>& moves(std::size_t s) const { return moves_[s]; }

    double partition(int K) const;
    double tail_estimate(int K) const;  // Z_{2K} - Z_K

    std::vector<WeightedConfiguration> enumerate(int K, std::size_t max_configs = 5'000'000) const;

    // Law of (W_{-1}, ..., W_{-m}) as a map from the word tuple to probability.
    std::map<std::vector<Word>, double> exit_law(int K, int m) const;

private:
    std::vector<double> forward(int K) const;
    Model model_;
    std::vector<Word> words_;
    std::map<Word, std::size_t> index_;
    std::vector<std::vector<std::pair<std::size_t, double>>> moves_;
    std::size_t start_ = 0;
};

// Smallest power of two K >= 8 with tail_estimate(K) <= tol.
int default_cutoff(const Transfer& transfer, double tol = 1e-10);

// Weight-proportional draws; the backward tables are built once.
class ExactSampler {
public:
    ExactSampler(const Transfer& transfer, int K);
    Configuration draw(const SeedSpec& seed) const;
    double partition() const;

private:
    const Transfer& transfer_;
    int K_;
    std::vector<std::vector<double>> remaining_;  // remaining_[m][s]
};

Configuration exact_sample(const Model& model, int K, const SeedSpec& seed);

// L^(k)_i(y) for i = 1..K+1 and y = 0..U.
struct LineEnsemble {
    int color = 1;
    std::vector<Path> curves;  // curves[i-1][y]

    std::int64_t at(int i, int y) const;
};

LineEnsemble line_ensemble(const Configuration& config, int k);

// Ordering, nesting and increment properties; returns an empty string when valid.
std::string check_basic_properties(const std::vector<LineEnsemble>& colors);

struct YangBaxterResult {
    Rational lhs = 0;
    Rational rhs = 0;
    bool compatible = true;
    Rational residual() const { return lhs > rhs ? lhs - rhs : rhs - lhs; }
};

YangBaxterResult yang_baxter_check(const Rational& q, const Rational& x, const Rational& y, int a1,
                                   int i1, int b2, int j2, const Counts& I, const Counts& J);

using ColorMerge = std::vector<int>;  // tau[c] for c = 0..N, tau[0] = 0

void validate_merge(const ColorMerge& tau);
Counts merge_counts(const Counts& A, const ColorMerge& tau);

template <class S>
S color_merge_residual(const S& q, const S& u, const Counts& A, int i, const Counts& merged_B,
                       int lambda, const ColorMerge& tau) {
    validate_merge(tau);
    const int n = static_cast<int>(A.size());
    if (static_cast<int>(tau.size()) != n + 1) throw std::invalid_argument("color map has wrong length");
    S lhs = 0;
    for (int j = 0; j <= n; ++j) {
        if (tau[j] != lambda) continue;
        Counts B = A;
        if (i > 0) ++B[i - 1];
        if (j > 0 && --B[j - 1] < 0) continue;
        if (merge_counts(B, tau) != merged_B) continue;
        lhs += weight_L(u, q, A, i, B, j);
    }
    const Counts mA = merge_counts(A, tau);
    S rhs = 0;
    bool balanced = true;
    for (std::size_t c = 0; c < mA.size(); ++c)
        if (mA[c] + (tau[i] == static_cast<int>(c) + 1) != merged_B[c] + (lambda == static_cast<int>(c) + 1))
            balanced = false;
    if (balanced) rhs = weight_L(u, q, mA, tau[i], merged_B, lambda);
    const S d = lhs - rhs;
    return d < 0 ? S(-d) : d;
}

// Greedy outgoing colors for incoming colors v in {0,1,2} and exit indicators x.
Word q0_assign_colors(const Word& v, const Word& x);
bool compatible(const Word& v, const Word& x);
std::vector<Word> valid_assignments(const Word& v, const Word& x);
// #{y' > y : w_y' = color}
std::int64_t color_height(const Word& w, int color, int y);
std::int64_t pitman_error(const Word& w, const Word& w_star);

// Paths share the interval [a, b] with index 0 at a. Missing boundaries are +-infinity.
double weight_factor(const std::vector<Path>& gamma, const std::optional<Path>& f,
                     const std::optional<Path>& g, double q);

struct PathLaw {
    std::vector<std::vector<Path>> outcomes;
    std::vector<double> probabilities;

    std::vector<Path> draw(const SeedSpec& seed) const;
};

// Conditional law of the curves `top` on their interval given the endpoints and
// the neighbours f (above) and g (below). `step_factor[x]` multiplies the weight
// for every decrement at step x (x = 1..b-a); empty means all ones.
PathLaw hl_gibbs_law(const std::vector<Path>& top, const std::optional<Path>& f,
                     const std::optional<Path>& g, double q, const std::vector<double>& step_factor = {},
                     std::size_t max_outcomes = 1'000'000);

std::vector<Path> hl_gibbs_resample(const std::vector<Path>& top, const std::optional<Path>& f,
                                    const std::optional<Path>& g, double q, const SeedSpec& seed,
                                    const std::vector<double>& step_factor = {});

// Two-color law of L^(2)_k on [0, U] given L^(1)_k, L^(1)_{k+1} and L^(2)_{k+1}.
// Rows 1..N carry u = 1 and rows N+1..U carry u = z.
PathLaw colored_gibbs_law(const Path& L1_k, const Path& L1_next, const Path& L2_next, int N, double q,
                          double z);

Path colored_gibbs_resample(const Path& L1_k, const Path& L1_next, const Path& L2_next, int N, double q,
                            double z, const SeedSpec& seed);

}  // namespace kpz::qboson
