#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "kpzlab/qboson.hpp"
#include "kpzlab/s6v.hpp"
#include "kpzlab/scaling.hpp"

namespace kpz::verify {

// Runs fn(r) for r = 0..n-1 on up to `threads` workers. Results are stored by
// index, so the output never depends on scheduling.
template <class T>
std::vector<T> parallel_map(std::size_t n, unsigned threads, const std::function<T(std::size_t)>& fn) {
    std::vector<T> out(n);
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        for (std::size_t r; (r = next.fetch_add(1)) < n;) {
            try {
                out[r] = fn(r);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                next = n;
            }
        }
    };
    const unsigned k = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < k; ++i) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
    return out;
}

unsigned default_threads();  // KPZLAB_THREADS, else 1

class EmpiricalDistribution {
public:
    EmpiricalDistribution() = default;
    explicit EmpiricalDistribution(const std::vector<double>& values, std::string provenance = {});

    void add(double value, double weight = 1.0);
    void merge(const EmpiricalDistribution& other);

    const std::map<double, double>& weights() const { return weights_; }
    double total() const;
    std::size_t sample_size() const { return samples_; }
    bool empty() const { return weights_.empty(); }
    double cdf(double x) const;
    double mean() const;
    double variance() const;

    std::string provenance;

private:
    std::map<double, double> weights_;
    std::size_t samples_ = 0;
};

double ks_distance(const EmpiricalDistribution& a, const EmpiricalDistribution& b);
double tv_distance(const EmpiricalDistribution& a, const EmpiricalDistribution& b);

template <class Key>
double tv_distance(const std::map<Key, double>& a, const std::map<Key, double>& b) {
    double sa = 0.0, sb = 0.0;
    for (const auto& [k, v] : a) sa += v;
    for (const auto& [k, v] : b) sb += v;
    if (sa <= 0.0 || sb <= 0.0) throw std::invalid_argument("tv_distance: empty distribution");
    std::map<Key, double> diff;
    for (const auto& [k, v] : a) diff[k] += v / sa;
    for (const auto& [k, v] : b) diff[k] -= v / sb;
    double s = 0.0;
    for (const auto& [k, v] : diff) s += std::abs(v);
    return 0.5 * s;
}

// One line of a verification report.
struct Check {
    std::string name;
    nlohmann::json parameters;
    double statistic = 0.0;
    double threshold = 0.0;
    bool pass = false;
    std::size_t sample_size = 0;
    double standard_error = 0.0;
    std::string note;
    nlohmann::json details;  // optional per-item records
};

nlohmann::json to_json(const Check& c);
nlohmann::json to_json(const std::vector<Check>& checks);

struct MatchingReport {
    double tv = 0.0;
    // expected TV of a perfect sampler at this sample size
    double noise_floor = 0.0;
    std::size_t samples = 0;
    std::size_t atoms = 0;
    int cutoff = 0;
    std::map<std::vector<std::int64_t>, double> exact;
    std::map<std::vector<std::int64_t>, double> empirical;
};

// Joint law of (h(k,0;y,M)) over k in [1,N], y in [1,N-1]: exact q-Boson top
// curves against S6V Monte Carlo.
MatchingReport matching_test(const qboson::Model& model, std::size_t samples, std::uint64_t seed,
                             unsigned threads = 1);

// One-point sheet values S(0;0) over replicas.
std::vector<double> one_point_sheet(scaling::Variant variant, double alpha, double eps_inv, double q, double z,
                                    std::size_t replicas, std::uint64_t seed, unsigned threads = 1);

// Full sheet grid for replica r of a run. S6V uses N = ceil(2 alpha / eps).
scaling::SheetGrid sample_sheet(const scaling::ScalingParams& p, const std::vector<double>& xs,
                                const std::vector<double>& ys, std::uint64_t seed, std::size_t r);

// L(x, s; y, t) for each replica, from step initial data started at the lattice time of s.
std::vector<double> landscape_samples(const scaling::ScalingParams& p, double x, double s, double y, double t,
                                      std::size_t replicas, std::uint64_t seed, unsigned threads = 1);

struct InvarianceReport {
    std::vector<double> qs;
    std::map<std::pair<std::size_t, std::size_t>, double> ks;  // pairwise
    double null_ks = 0.0;  // same q, independent seeds
    std::size_t replicas = 0;
};

InvarianceReport q_invariance_test(scaling::Variant variant, double alpha, double eps_inv,
                                   const std::vector<double>& qs, std::size_t replicas, std::uint64_t seed,
                                   double z = 0.25, unsigned threads = 1);

struct TrendReport {
    std::vector<double> eps_inv;
    std::vector<double> ks;
    bool non_increasing = false;
};

TrendReport q_invariance_trend(scaling::Variant variant, double alpha, const std::vector<double>& eps_inv,
                               double q0, double q1, std::size_t replicas, std::uint64_t seed, double z = 0.25,
                               unsigned threads = 1);

// KS between h(x,0;y,t) + x - N and its shift by (r, r) for the packed S6V.
double stationarity_test(double q, double z, std::int64_t N, std::int64_t t, std::int64_t x, std::int64_t y,
                         std::int64_t r, std::size_t samples, std::uint64_t seed, unsigned threads = 1);

// KS between the S6V proxy and direct ASEP heights at (x, y, t).
double degeneration_ks(double q, double t, double delta, std::int64_t x, std::int64_t y, std::size_t replicas,
                       std::uint64_t seed, unsigned threads = 1, double theta = 40.0);

struct TwoPointParams {
    double beta = 1.0;
    double epsilon = 1.0 / 125;
    double q = 0.0;
    std::int64_t ring_size = 256;
    double time = 0.0;
    std::vector<std::int64_t> offsets{0};
    std::size_t replicas = 100;
    // Each replica contributes the pairs (s_j, s_j + time) at s_j = burn_in + j*time.
    std::size_t origins = 1;
    std::optional<double> burn_in;  // default asep::default_burn_in
};

struct TwoPointEstimate {
    TwoPointParams params;
    std::int64_t color1 = 0;
    std::int64_t color2 = 0;
    // S[k][l][i] and se[k][l][i] for k,l in {0,1} (colors 1,2) and offsets[i]
    std::vector<double> S[2][2];
    std::vector<double> se[2][2];
    // sums of S[k][l] over all offsets, with standard errors
    double window_sum[2][2] = {};
    double window_se[2][2] = {};
};

TwoPointEstimate twopoint(const TwoPointParams& params, std::uint64_t seed, unsigned threads = 1);

// One kernel step on curve i (1-based) over [a, b] applied to the exact law of
// the first m uncolored curves. Row factors z on rows > N when requested.
double gibbs_invariance_uncolored(const qboson::Model& model, int m, int i, int a, int b, bool row_factors = true,
                                  std::optional<double> kernel_q = std::nullopt);

// One colored kernel step on L^(2)_1 applied to the exact law of
// (L^(1)_1, L^(1)_2, L^(2)_1, L^(2)_2); needs colors in {1, 2}.
double gibbs_invariance_colored(const qboson::Model& model);

struct DecouplingReport {
    bool box_clean = true;
    std::size_t discrepancies_in_box = 0;
    std::int64_t violation = 0;  // max over the box of (h_first - h_second)^+
};

// `first` should start below `second` for the violation to be meaningful.
DecouplingReport decoupling_diagnostics(const s6v::ArrowField& first, const s6v::ArrowField& second,
                                        std::int64_t t_lo, std::int64_t t_hi, std::int64_t y_lo, std::int64_t y_hi);

// Boundaries that agree on [-N1, N1] and are independent outside; returns the
// number of seeds with a discrepancy in [1,T] x [-N1/2, N1/2].
std::size_t finite_speed_failures(std::int64_t N1, double q, double z, std::size_t seeds, std::uint64_t seed);

// Empirical P(violation >= m) for nested Bernoulli boundaries.
std::vector<double> monotonicity_tail(std::int64_t N, std::int64_t T, double q, double z,
                                      const std::vector<std::int64_t>& levels, std::size_t seeds, std::uint64_t seed);

}  // namespace kpz::verify
