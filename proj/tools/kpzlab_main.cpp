#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "cli_support.hpp"
#include "kpzlab/asep.hpp"
#include "kpzlab/lpp.hpp"
#include "kpzlab/qboson.hpp"
#include "kpzlab/randomness.hpp"
#include "kpzlab/s6v.hpp"
#include "kpzlab/scaling.hpp"
#include "kpzlab/suites.hpp"
#include "kpzlab/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace kpz;

namespace {

constexpr int kUsage = 2;
constexpr int kFailure = 1;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

const CLI::Validator unit_interval_q(
    [](std::string& s) -> std::string {
        try {
            const double v = std::stod(s);
            if (v >= 0.0 && v < 1.0) return {};
        } catch (const std::exception&) {
        }
        return "q must lie in [0,1), got " + s;
    },
    "in [0,1)");

struct Common {
    std::string seed_text = "1";
    std::string out;
    unsigned threads = 0;

    std::uint64_t seed() const {
        try {
            return parse_seed(seed_text);
        } catch (const std::exception& e) {
            throw UsageError(std::string("--seed: ") + e.what());
        }
    }
    unsigned workers() const { return threads ? threads : verify::default_threads(); }
};

void add_seed(CLI::App* app, Common& c) {
    app->add_option("--seed", c.seed_text, "master seed, decimal or 0x-prefixed hexadecimal")->capture_default_str();
}
void add_threads(CLI::App* app, Common& c) {
    app->add_option("--threads", c.threads, "replica-level worker threads (default: KPZLAB_THREADS, else 1)")
        ->check(CLI::PositiveNumber);
}
void add_out(CLI::App* app, Common& c, bool required, const std::string& what) {
    auto* o = app->add_option("--out", c.out, what);
    if (required) o->required();
}

// Data sink: a file when a path is given, stdout otherwise.
class Sink {
public:
    explicit Sink(const std::string& path) : path_(path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_) throw std::runtime_error("cannot open '" + path + "' for writing");
        }
    }
    std::ostream& os() { return file_ ? *file_ : std::cout; }
    bool to_file() const { return static_cast<bool>(file_); }
    void close() {
        if (file_) file_->close();
    }

private:
    std::string path_;
    std::unique_ptr<std::ofstream> file_;
};

struct RunContext {
    std::vector<std::string> argv;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
};

RunContext* g_ctx = nullptr;

json header(const std::string& command, const Common& c, const json& params) {
    json h{{"tool", "kpzlab"}, {"version", cli::version()}, {"command", command}, {"seed", c.seed_text},
           {"parameters", params}};
    if (!c.out.empty()) h["manifest"] = cli::manifest_path(c.out).filename().string();
    return h;
}

void finish(const std::string& command, const Common& c, const json& params, std::vector<fs::path> outputs,
            const std::string& summary) {
    if (!c.out.empty()) {
        cli::Manifest m;
        m.command_line = g_ctx->argv;
        m.command = command;
        m.seed = c.seed_text;
        m.parameters = params;
        m.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - g_ctx->start).count();
        m.outputs = std::move(outputs);
        cli::write_manifest(c.out, m);
        std::cout << summary << '\n';
    } else {
        std::cerr << summary << '\n';
    }
}

std::vector<std::int64_t> range_or(const std::string& text, std::vector<std::int64_t> fallback) {
    if (text.empty()) return fallback;
    try {
        return cli::parse_int_range(text);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
}

std::vector<std::int64_t> iota(std::int64_t lo, std::int64_t hi) {
    std::vector<std::int64_t> v;
    for (auto x = lo; x <= hi; ++x) v.push_back(x);
    return v;
}

template <class T>
T max_abs(const std::vector<T>& v) {
    T m = 0;
    for (T x : v) m = std::max<T>(m, x < 0 ? -x : x);
    return m;
}

// ---------------------------------------------------------------- asep simulate

struct AsepArgs {
    Common c;
    double q = 0.5;
    std::string times;
    std::int64_t window = 0;
    std::string init = "packed";
    std::string xs, ys;
};

int asep_simulate(const AsepArgs& a) {
    const std::uint64_t seed = a.c.seed();
    std::vector<double> ts;
    try {
        ts = cli::parse_double_list(a.times);
    } catch (const std::exception& e) {
        throw UsageError(std::string("--t: ") + e.what());
    }
    for (double t : ts)
        if (!(t >= 0.0)) throw UsageError("--t: times must be nonnegative");
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    const double tmax = ts.back();
    const SeedSpec clocks{seed, StreamDomain::asep_clock};
    json params{{"q", a.q}, {"t", ts}, {"init", a.init}, {"window", a.window}, {"xs", a.xs}, {"ys", a.ys}};

    Sink sink(a.c.out);
    sink.os() << json{{"header", header("asep simulate", a.c, params)}}.dump() << '\n';
    std::size_t records = 0;
    auto emit = [&](const json& x, std::int64_t y, double t, std::int64_t h) {
        sink.os() << json{{"x", x}, {"s", 0.0}, {"y", y}, {"t", t}, {"h", h}, {"seed", a.c.seed_text}, {"q", a.q}}.dump()
                  << '\n';
        ++records;
    };
    auto half_width = [&](std::int64_t radius) {
        const auto need = asep::required_half_width(tmax, radius);
        if (a.window == 0) return need;
        if (a.window < need)
            throw UsageError("--window " + std::to_string(a.window) + " is below the certified half-width " +
                             std::to_string(need) + " for these queries");
        return a.window;
    };

    const std::string& init = a.init;
    if (init == "packed") {
        const auto xs = range_or(a.xs, iota(-10, 10)), ys = range_or(a.ys, iota(-10, 10));
        const auto radius = std::max(max_abs(xs), max_abs(ys));
        const auto L = half_width(radius);
        auto c = asep::packed(L);
        double now = 0.0;
        for (double t : ts) {
            c = asep::evolve(c, clocks, a.q, t, now);
            now = t;
            for (auto x : xs)
                for (auto y : ys) emit(x, y, t, asep::colored_height_certified(c, x, y, t, radius));
        }
    } else if (init.rfind("step:", 0) == 0) {
        std::vector<std::int64_t> starts;
        try {
            starts = cli::parse_int_list(init.substr(5));
        } catch (const std::exception& e) {
            throw UsageError(std::string("--init: ") + e.what());
        }
        const auto ys = range_or(a.ys, iota(-10, 10));
        const auto L = half_width(std::max(max_abs(starts), max_abs(ys)));
        std::vector<asep::TimedProfile> inits;
        for (auto x : starts) inits.push_back({asep::step_profile(x, -L - 1, L), 0.0});
        for (double t : ts) {
            const auto out = asep::basic_couple(inits, clocks, a.q, t);
            for (std::size_t k = 0; k < starts.size(); ++k)
                for (auto y : ys) emit(starts[k], y, t, out[k].at(y));
        }
    } else if (init.rfind("bernoulli:", 0) == 0) {
        double p = 0.0;
        try {
            p = std::stod(init.substr(10));
        } catch (const std::exception&) {
            throw UsageError("--init: bad density in '" + init + "'");
        }
        if (!(p >= 0.0 && p <= 1.0)) throw UsageError("--init: density must lie in [0,1]");
        const auto ys = range_or(a.ys, iota(-10, 10));
        const auto L = half_width(max_abs(ys));
        const auto h0 = asep::bernoulli_profile(p, -L - 1, L, SeedSpec{seed, StreamDomain::replica});
        for (double t : ts) {
            const auto h = asep::height_from_profile(h0, 0.0, clocks, a.q, t);
            for (auto y : ys) emit(nullptr, y, t, h.at(y));
        }
    } else if (init.rfind("ring:", 0) == 0) {
        std::vector<std::int64_t> counts;
        try {
            counts = cli::parse_int_list(init.substr(5));
        } catch (const std::exception& e) {
            throw UsageError(std::string("--init: ") + e.what());
        }
        if (a.window <= 0) throw UsageError("ring initial data needs --window (the ring size)");
        const auto R = a.window;
        const auto colors = static_cast<std::int64_t>(counts.size());
        const auto xs = range_or(a.xs, iota(1, colors)), ys = range_or(a.ys, iota(0, R - 1));
        // Blocked arrangement, highest color first from site 0.
        auto c = asep::ring_stationary_sample(counts, R, 0.0, a.q, clocks);
        double now = 0.0;
        for (double t : ts) {
            c = asep::evolve(c, clocks, a.q, t, now);
            now = t;
            for (auto x : xs)
                for (auto y : ys) {
                    if (y < -1 || y >= R) throw UsageError("--ys must lie in [-1, ring size - 1]");
                    emit(x, y, t, asep::colored_height(c, -x, y));
                }
        }
    } else {
        throw UsageError("--init must be packed, step:x1,..., bernoulli:p or ring:n1,...");
    }
    sink.close();
    finish("asep simulate", a.c, params, sink.to_file() ? std::vector<fs::path>{a.c.out} : std::vector<fs::path>{},
           "asep simulate: " + std::to_string(records) + " records");
    return 0;
}

// ---------------------------------------------------------------- s6v simulate

struct S6vArgs {
    Common c;
    double q = 0.5;
    double z = 0.5;
    std::int64_t N = 0;
    std::string times;
    std::string boundary = "packed";
    std::string xs, ys;
};

s6v::Boundary read_boundary(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read boundary file '" + path + "'");
    std::map<std::int64_t, std::int32_t> rows;
    std::string line;
    for (int n = 1; std::getline(in, line); ++n) {
        if (line.find_first_not_of(" \t\r") == std::string::npos || line[line.find_first_not_of(" \t")] == '#') continue;
        std::istringstream ls(line);
        std::int64_t row = 0;
        std::int64_t color = 0;
        std::string rest;
        if (!(ls >> row >> color) || (ls >> rest))
            throw UsageError(path + ":" + std::to_string(n) + ": expected 'row color'");
        if (color <= s6v::NO_ARROW || color > INT32_MAX)
            throw UsageError(path + ":" + std::to_string(n) + ": color out of range");
        if (!rows.emplace(row, static_cast<std::int32_t>(color)).second)
            throw UsageError(path + ":" + std::to_string(n) + ": row " + std::to_string(row) + " given twice");
    }
    if (rows.empty()) throw UsageError("boundary file '" + path + "' has no arrows");
    s6v::Boundary b;
    b.bottom = rows.begin()->first;
    b.colors.assign(static_cast<std::size_t>(rows.rbegin()->first - b.bottom + 1), s6v::NO_ARROW);
    for (auto [row, color] : rows) b.colors[static_cast<std::size_t>(row - b.bottom)] = color;
    return b;
}

int s6v_simulate(const S6vArgs& a) {
    const std::uint64_t seed = a.c.seed();
    std::vector<std::int64_t> ts;
    try {
        ts = cli::parse_int_list(a.times);
    } catch (const std::exception& e) {
        throw UsageError(std::string("--t: ") + e.what());
    }
    for (auto t : ts)
        if (t < 0) throw UsageError("--t: columns must be nonnegative");
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    try {
        s6v::validate_parameters(a.q, a.z);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }

    s6v::Boundary b;
    std::int64_t N = a.N;
    if (a.boundary == "packed") {
        if (N < 0) throw UsageError("--N must be nonnegative");
        b = s6v::packed(N);
    } else {
        b = read_boundary(a.boundary);
        if (N == 0) N = std::max(std::abs(b.bottom), std::abs(b.top()));
    }
    std::int32_t cmin = INT32_MAX, cmax = INT32_MIN + 1;
    for (auto c : b.colors)
        if (c != s6v::NO_ARROW) cmin = std::min(cmin, c), cmax = std::max(cmax, c);
    const auto xs = range_or(a.xs, iota(cmin, cmax));
    const auto span = std::max(std::abs(b.bottom), std::abs(b.top()));
    const auto T = ts.back();
    const auto cap = s6v::default_row_cap(span, T, a.q, a.z);
    const auto ys = range_or(a.ys, iota(b.bottom - 1, b.top()));
    json params{{"q", a.q}, {"z", a.z}, {"N", N}, {"t", ts}, {"boundary", a.boundary}, {"row_cap", cap},
                {"xs", a.xs}, {"ys", a.ys}};

    const auto f = s6v::sample(b, a.q, a.z, T, cap, SeedSpec{seed, StreamDomain::s6v_coin});
    Sink sink(a.c.out);
    sink.os() << json{{"header", header("s6v simulate", a.c, params)}}.dump() << '\n';
    std::size_t records = 0;
    for (auto t : ts)
        for (auto x : xs)
            for (auto y : ys) {
                const auto h = s6v::colored_height(f, static_cast<std::int32_t>(x), y, t);
                sink.os() << json{{"x", x}, {"y", y}, {"t", t}, {"h", h}, {"q", a.q}, {"z", a.z}, {"N", N},
                                  {"seed", a.c.seed_text}}
                                 .dump()
                          << '\n';
                ++records;
            }
    sink.close();
    finish("s6v simulate", a.c, params, sink.to_file() ? std::vector<fs::path>{a.c.out} : std::vector<fs::path>{},
           "s6v simulate: " + std::to_string(records) + " records");
    return 0;
}

// ---------------------------------------------------------------- qboson

struct QbosonArgs {
    Common c;
    int N = 2;
    int M = 2;
    double q = 0.5;
    double z = 0.4;
    int K = 0;
    std::string sigma;
    std::size_t samples = 1000;
    std::size_t max_configs = 1'000'000;
};

qboson::Model qboson_model(const QbosonArgs& a) {
    qboson::Model m = qboson::packed_model(a.N, a.M, a.q, a.z);
    if (!a.sigma.empty()) {
        m.sigma.clear();
        try {
            for (auto v : cli::parse_int_list(a.sigma)) m.sigma.push_back(static_cast<int>(v));
        } catch (const std::exception& e) {
            throw UsageError(std::string("--sigma: ") + e.what());
        }
    }
    try {
        m.validate();
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    return m;
}

json qboson_params(const QbosonArgs& a, const qboson::Model& m, int K) {
    return {{"N", a.N}, {"M", a.M}, {"q", a.q}, {"z", a.z}, {"K", K}, {"sigma", m.sigma}};
}

int qboson_enumerate(const QbosonArgs& a) {
    const auto m = qboson_model(a);
    const qboson::Transfer t(m);
    const int K = a.K ? a.K : qboson::default_cutoff(t);
    const auto all = t.enumerate(K, a.max_configs);
    const double Z = t.partition(K);
    json params = qboson_params(a, m, K);
    params["max_configs"] = a.max_configs;
    Sink sink(a.c.out);
    json h = header("qboson enumerate", a.c, params);
    h["partition"] = Z;
    h["tail_estimate"] = t.tail_estimate(K);
    h["configurations"] = all.size();
    sink.os() << json{{"header", h}}.dump() << '\n';
    for (std::size_t i = 0; i < all.size(); ++i)
        sink.os() << json{{"index", i}, {"exits", all[i].config.exits}, {"weight", all[i].weight},
                          {"probability", all[i].weight / Z}}
                         .dump()
                  << '\n';
    sink.close();
    finish("qboson enumerate", a.c, params, sink.to_file() ? std::vector<fs::path>{a.c.out} : std::vector<fs::path>{},
           "qboson enumerate: " + std::to_string(all.size()) + " configurations, Z = " + std::to_string(Z));
    return 0;
}

int qboson_sample(const QbosonArgs& a) {
    const std::uint64_t seed = a.c.seed();
    const auto m = qboson_model(a);
    const qboson::Transfer t(m);
    const int K = a.K ? a.K : qboson::default_cutoff(t);
    const qboson::ExactSampler sampler(t, K);
    json params = qboson_params(a, m, K);
    params["samples"] = a.samples;
    const int colors = *std::max_element(m.sigma.begin(), m.sigma.end());
    const auto draws = verify::parallel_map<std::string>(a.samples, a.c.workers(), [&](std::size_t r) {
        const auto cfg = sampler.draw(SeedSpec{replica_seed(seed, r)});
        json top = json::array();
        for (int k = 1; k <= colors; ++k) top.push_back(qboson::line_ensemble(cfg, k).curves.front());
        return json{{"replica", r}, {"exits", cfg.exits}, {"top_curves", top}}.dump();
    });
    Sink sink(a.c.out);
    sink.os() << json{{"header", header("qboson sample", a.c, params)}}.dump() << '\n';
    for (const auto& d : draws) sink.os() << d << '\n';
    sink.close();
    finish("qboson sample", a.c, params, sink.to_file() ? std::vector<fs::path>{a.c.out} : std::vector<fs::path>{},
           "qboson sample: " + std::to_string(a.samples) + " samples");
    return 0;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
    Common c;
    std::string suite;
    std::size_t trials = 0;
    std::string report;
};

int run_verify(const VerifyArgs& a, const std::string& command) {
    const std::uint64_t seed = a.c.seed();
    std::vector<std::string> names;
    if (a.suite == "all") {
        for (const auto& s : verify::suites()) names.push_back(s.name);
    } else {
        bool known = false;
        for (const auto& s : verify::suites()) known = known || s.name == a.suite;
        if (!known) throw UsageError("unknown suite '" + a.suite + "' (see 'kpzlab verify list')");
        names.push_back(a.suite);
    }
    std::vector<verify::Check> checks;
    for (const auto& n : names) {
        auto part = verify::run_suite(n, {seed, a.c.workers(), a.trials});
        for (auto& c : part) c.parameters["suite"] = n;
        checks.insert(checks.end(), part.begin(), part.end());
    }
    for (const auto& c : checks)
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << ": statistic " << c.statistic << ", threshold "
                  << c.threshold << ", n " << c.sample_size << '\n';
    const bool ok = verify::all_pass(checks);
    json params{{"suite", a.suite}, {"trials", a.trials}};
    if (!a.report.empty()) {
        json rep = verify::to_json(checks);
        rep["header"] = header(command, a.c, params);
        rep["header"]["manifest"] = cli::manifest_path(a.report).filename().string();
        {
            std::ofstream f(a.report, std::ios::binary);
            if (!f) throw std::runtime_error("cannot write report '" + a.report + "'");
            f << rep.dump(2) << '\n';
        }
        Common c = a.c;
        c.out = a.report;
        finish(command, c, params, {a.report}, std::string(ok ? "PASS" : "FAIL") + ": " + std::to_string(checks.size()) + " checks");
    } else {
        std::cout << (ok ? "PASS" : "FAIL") << ": " << checks.size() << " checks\n";
    }
    return ok ? 0 : kFailure;
}

// ---------------------------------------------------------------- sheet / landscape

struct SheetArgs {
    Common c;
    std::string variant = "asep";
    double alpha = 0.0;
    double q = 0.0;
    double z = 0.5;
    double eps_inv = 125.0;
    std::string grid = "-1:1:0.5";
    std::string ygrid;
    std::size_t replicas = 1;
    double x = 0, s = 0, y = 0, t = 1;
};

scaling::ScalingParams scaling_params(const SheetArgs& a) {
    try {
        const auto v = scaling::parse_variant(a.variant);
        if (!(a.eps_inv > 0.0)) throw std::invalid_argument("--eps-inv must be positive");
        return scaling::constants(v, a.alpha, a.q, v == scaling::Variant::s6v ? a.z : 0.0, 1.0 / a.eps_inv);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
}

int sheet(const SheetArgs& a) {
    const std::uint64_t seed = a.c.seed();
    const auto p = scaling_params(a);
    std::vector<double> xs, ys;
    try {
        xs = scaling::parse_grid(a.grid);
        ys = scaling::parse_grid(a.ygrid.empty() ? a.grid : a.ygrid);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    if (a.replicas < 1) throw UsageError("--replicas must be at least 1");
    if (p.variant == scaling::Variant::s6v) {
        const auto N = static_cast<std::int64_t>(std::ceil(2.0 * p.alpha * p.inv_eps()));
        try {
            for (double x : xs)
                for (double y : ys) scaling::check_domain(p, x, 0.0, y, 1.0, N);
        } catch (const std::exception& e) {
            throw UsageError(e.what());
        }
    }
    const auto grids = verify::parallel_map<scaling::SheetGrid>(
        a.replicas, a.c.workers(), [&](std::size_t r) { return verify::sample_sheet(p, xs, ys, seed, r); });
    scaling::SheetGrid mean = grids.front();
    for (std::size_t ix = 0; ix < xs.size(); ++ix)
        for (std::size_t iy = 0; iy < ys.size(); ++iy) {
            double s = 0.0;
            for (const auto& g : grids) s += g.values[ix][iy];
            mean.values[ix][iy] = s / static_cast<double>(grids.size());
        }
    json params = json::parse(scaling::params_json(p, seed));
    params["seed_text"] = a.c.seed_text;
    params["replicas"] = a.replicas;
    params["grid"] = a.grid;
    params["ygrid"] = a.ygrid.empty() ? a.grid : a.ygrid;
    params["cell"] = "mean over replicas of S(x; y)";
    {
        std::ofstream f(a.c.out, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write '" + a.c.out + "'");
        f << "# kpzlab sheet seed=" << a.c.seed_text << " manifest=" << cli::manifest_path(a.c.out).filename().string()
          << '\n';
        scaling::write_csv(f, mean);
    }
    const std::string sidecar = a.c.out + ".json";
    {
        std::ofstream f(sidecar, std::ios::binary);
        json side = params;
        side["header"] = header("sheet", a.c, params);
        f << side.dump(2) << '\n';
    }
    finish("sheet", a.c, params, {a.c.out, sidecar},
           "sheet: " + std::to_string(xs.size()) + "x" + std::to_string(ys.size()) + " grid, " +
               std::to_string(a.replicas) + " replicas");
    return 0;
}

int landscape(const SheetArgs& a) {
    const std::uint64_t seed = a.c.seed();
    const auto p = scaling_params(a);
    if (!(a.s < a.t)) throw UsageError("landscape needs s < t");
    if (a.replicas < 1) throw UsageError("--replicas must be at least 1");
    std::vector<double> values;
    try {
        values = verify::landscape_samples(p, a.x, a.s, a.y, a.t, a.replicas, seed, a.c.workers());
    } catch (const scaling::MissingSample& e) {
        throw;
    } catch (const std::domain_error& e) {
        throw UsageError(e.what());
    }
    json params = json::parse(scaling::params_json(p, seed));
    params["replicas"] = a.replicas;
    params["x"] = a.x;
    params["s"] = a.s;
    params["y"] = a.y;
    params["t"] = a.t;
    Sink sink(a.c.out);
    sink.os() << json{{"header", header("landscape", a.c, params)}}.dump() << '\n';
    for (std::size_t r = 0; r < values.size(); ++r)
        sink.os() << json{{"replica", r}, {"x", a.x}, {"s", a.s}, {"y", a.y}, {"t", a.t}, {"value", values[r]}}.dump()
                  << '\n';
    sink.close();
    double mean = 0.0;
    for (double v : values) mean += v / static_cast<double>(values.size());
    finish("landscape", a.c, params, sink.to_file() ? std::vector<fs::path>{a.c.out} : std::vector<fs::path>{},
           "landscape: " + std::to_string(values.size()) + " replicas, mean " + std::to_string(mean));
    return 0;
}

// ---------------------------------------------------------------- lpp eval

struct LppArgs {
    Common c;
    std::string env;
    std::string from, to;
    std::int64_t lo = 0;
};

int lpp_eval(const LppArgs& a) {
    std::ifstream in(a.env);
    if (!in) throw UsageError("cannot read environment file '" + a.env + "'");
    lpp::Environment env;
    std::vector<std::int64_t> from, to;
    try {
        env = lpp::read_environment(in, a.lo);
        from = cli::parse_int_list(a.from);
        to = cli::parse_int_list(a.to);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    if (from.size() != 2 || to.size() != 2) throw UsageError("--from and --to take 'position,curve'");
    std::int64_t value = 0;
    try {
        value = lpp::lpp_value(env, from[0], static_cast<int>(from[1]), to[0], static_cast<int>(to[1]));
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    json params{{"env", a.env}, {"from", from}, {"to", to}, {"lo", a.lo}};
    Sink sink(a.c.out);
    sink.os() << json{{"u", from[0]}, {"k", from[1]}, {"v", to[0]}, {"j", to[1]}, {"value", value}}.dump() << '\n';
    sink.close();
    if (sink.to_file())
        finish("lpp eval", a.c, params, {a.c.out}, "lpp eval: " + std::to_string(value));
    return 0;
}

// ---------------------------------------------------------------- twopoint

struct TwoPointArgs {
    Common c;
    double beta = 1.0;
    double eps_inv = 125.0;
    double q = 0.0;
    std::int64_t ring = 256;
    double time = 0.0;
    std::string offsets = "0:0";
    std::size_t replicas = 100;
    std::size_t origins = 1;
    double burn_in = -1.0;
};

int twopoint(const TwoPointArgs& a) {
    const std::uint64_t seed = a.c.seed();
    verify::TwoPointParams p;
    p.beta = a.beta;
    p.epsilon = 1.0 / a.eps_inv;
    p.q = a.q;
    p.ring_size = a.ring;
    p.time = a.time;
    try {
        p.offsets = a.offsets.find(':') != std::string::npos ? cli::parse_int_range(a.offsets)
                                                             : cli::parse_int_list(a.offsets);
    } catch (const std::exception& e) {
        throw UsageError(std::string("--offsets: ") + e.what());
    }
    p.replicas = a.replicas;
    p.origins = a.origins;
    if (a.burn_in >= 0.0) p.burn_in = a.burn_in;
    verify::TwoPointEstimate est;
    try {
        est = verify::twopoint(p, seed, a.c.workers());
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    json params{{"beta", a.beta}, {"eps_inv", a.eps_inv}, {"q", a.q}, {"ring", a.ring}, {"time", a.time},
                {"offsets", p.offsets}, {"replicas", a.replicas}, {"origins", a.origins},
                {"burn_in", p.burn_in ? *p.burn_in : asep::default_burn_in(a.ring)}};
    json S, se, ws, wse;
    for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
            const std::string key = std::to_string(k + 1) + std::to_string(l + 1);
            S[key] = est.S[k][l];
            se[key] = est.se[k][l];
            ws[key] = est.window_sum[k][l];
            wse[key] = est.window_se[k][l];
        }
    const json out{{"header", header("twopoint", a.c, params)},
                   {"color1_count", est.color1},
                   {"color2_count", est.color2},
                   {"offsets", p.offsets},
                   {"S", S},
                   {"standard_error", se},
                   {"window_sum", ws},
                   {"window_sum_standard_error", wse}};
    Sink sink(a.c.out);
    sink.os() << out.dump(2) << '\n';
    sink.close();
    finish("twopoint", a.c, params, sink.to_file() ? std::vector<fs::path>{a.c.out} : std::vector<fs::path>{},
           "twopoint: S22(x=" + std::to_string(p.offsets.front()) + ") = " + std::to_string(est.S[1][1].front()));
    return 0;
}

// ---------------------------------------------------------------- config handling

// Splices `key = value` lines from --config in front of the user's flags for the
// selected subcommand, so explicit flags (parsed later, last one wins) override.
std::vector<std::string> apply_config(CLI::App& app, std::vector<std::string> args) {
    std::optional<std::string> path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw UsageError("--config needs a file");
            path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
            break;
        }
    }
    if (!path) return args;
    CLI::App* cur = &app;
    std::size_t pos = 0;
    while (pos < args.size() && args[pos].rfind("-", 0) != 0) {
        CLI::App* next = cur->get_subcommand_no_throw(args[pos]);
        if (!next) break;
        cur = next;
        ++pos;
    }
    if (cur == &app) throw UsageError("--config needs a subcommand");
    std::vector<std::string> injected;
    try {
        for (const auto& e : cli::load_config(*path)) {
            if (e.key == "config" || !cur->get_option_no_throw("--" + e.key))
                throw cli::ConfigError(*path + ":" + std::to_string(e.line) + ": unknown key '" + e.key + "' for '" +
                                       cur->get_name() + "'");
            injected.push_back("--" + e.key + "=" + e.value);
        }
    } catch (const cli::ConfigError& e) {
        throw UsageError(e.what());
    }
    args.insert(args.begin() + static_cast<std::ptrdiff_t>(pos), injected.begin(), injected.end());
    return args;
}

const char* kAsepColumns =
    "Output (NDJSON): a header record, then one record per (x, y, t):\n"
    "  x     color threshold (packed, ring) or step position (step); null for bernoulli\n"
    "  s     start time (always 0)\n"
    "  y     site\n"
    "  t     time\n"
    "  h     height: packed #{z > y : color(z) >= -x}; ring #{z > y : color(z) >= x};\n"
    "        step/bernoulli the uncolored height h(y, t)\n"
    "  seed  master seed as given\n"
    "  q     left jump rate";

const char* kS6vColumns =
    "Output (NDJSON): a header record, then one record per (x, y, t):\n"
    "  x     color threshold\n"
    "  y     row\n"
    "  t     column\n"
    "  h     #{k > y : horizontal exit of vertex (t, k) has color >= x}\n"
    "  q, z  vertex parameters\n"
    "  N     packed half-width (or the largest |row| of a boundary file)\n"
    "  seed  master seed as given\n"
    "Boundary files hold one 'row color' pair per line.";

}  // namespace

int main(int argc, char** argv) {
    RunContext ctx;
    ctx.argv.assign(argv, argv + argc);
    g_ctx = &ctx;

    CLI::App app{"kpzlab: colored ASEP, stochastic six-vertex and q-Boson simulations with verification suites",
                 "kpzlab"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.set_version_flag("--version", cli::version());
    app.footer("Every subcommand accepts --config FILE with 'key = value' lines naming its long options;\n"
               "explicit flags override the file.");

    // asep simulate
    AsepArgs asep_args;
    auto* asep_cmd = app.add_subcommand("asep", "asymmetric simple exclusion process");
    asep_cmd->require_subcommand(1);
    auto* asep_sim = asep_cmd->add_subcommand("simulate", "evolve ASEP and export heights");
    asep_sim->add_option("--q", asep_args.q, "left jump rate")->check(unit_interval_q)->capture_default_str();
    asep_sim->add_option("--t", asep_args.times, "comma-separated times")->required();
    asep_sim->add_option("--window", asep_args.window, "half-width of the padded window (ring size for ring data)");
    asep_sim->add_option("--init", asep_args.init, "packed | step:x1,x2,.. | bernoulli:p | ring:n1,n2,..")
        ->capture_default_str();
    asep_sim->add_option("--xs", asep_args.xs, "thresholds lo:hi[:step]");
    asep_sim->add_option("--ys", asep_args.ys, "sites lo:hi[:step]");
    add_seed(asep_sim, asep_args.c);
    add_threads(asep_sim, asep_args.c);
    add_out(asep_sim, asep_args.c, false, "NDJSON output file (stdout if omitted)");
    asep_sim->footer(kAsepColumns);

    // s6v simulate
    S6vArgs s6v_args;
    auto* s6v_cmd = app.add_subcommand("s6v", "stochastic six-vertex model");
    s6v_cmd->require_subcommand(1);
    auto* s6v_sim = s6v_cmd->add_subcommand("simulate", "sample an S6V field and export heights");
    s6v_sim->add_option("--q", s6v_args.q, "parameter q")->check(unit_interval_q)->capture_default_str();
    s6v_sim->add_option("--z", s6v_args.z, "spectral parameter z in (0,1)")->capture_default_str();
    s6v_sim->add_option("--N", s6v_args.N, "packed boundary on rows -N..N")->capture_default_str();
    s6v_sim->add_option("--t", s6v_args.times, "comma-separated columns")->required();
    s6v_sim->add_option("--boundary", s6v_args.boundary, "packed or a file of 'row color' lines")
        ->capture_default_str();
    s6v_sim->add_option("--xs", s6v_args.xs, "color thresholds lo:hi[:step]");
    s6v_sim->add_option("--ys", s6v_args.ys, "rows lo:hi[:step]");
    add_seed(s6v_sim, s6v_args.c);
    add_threads(s6v_sim, s6v_args.c);
    add_out(s6v_sim, s6v_args.c, false, "NDJSON output file (stdout if omitted)");
    s6v_sim->footer(kS6vColumns);

    // qboson
    QbosonArgs qb_args;
    VerifyArgs qb_verify_args;
    auto* qb = app.add_subcommand("qboson", "colored q-Boson vertex model on small lattices");
    qb->require_subcommand(1);
    auto add_model = [&](CLI::App* s) {
        s->add_option("--N", qb_args.N, "boundary colors on rows 1..N")->check(CLI::PositiveNumber)->capture_default_str();
        s->add_option("--M", qb_args.M, "extra rows")->check(CLI::NonNegativeNumber)->capture_default_str();
        s->add_option("--q", qb_args.q, "parameter q")->check(unit_interval_q)->capture_default_str();
        s->add_option("--z", qb_args.z, "row parameter z in (0,1)")->capture_default_str();
        s->add_option("--K", qb_args.K, "column cutoff (default: automatic)");
        s->add_option("--sigma", qb_args.sigma, "boundary colors, comma-separated (default 1..N)");
        add_seed(s, qb_args.c);
        add_threads(s, qb_args.c);
        add_out(s, qb_args.c, false, "NDJSON output file (stdout if omitted)");
    };
    auto* qb_enum = qb->add_subcommand("enumerate", "list every configuration with its weight");
    add_model(qb_enum);
    qb_enum->add_option("--max-configs", qb_args.max_configs, "refuse larger enumerations")->capture_default_str();
    qb_enum->footer("Output (NDJSON): header (with partition, tail_estimate), then per configuration:\n"
                    "  index, exits (exit words of columns -1..-K, rows 1..N+M), weight, probability");
    auto* qb_sample = qb->add_subcommand("sample", "exact weight-proportional samples");
    add_model(qb_sample);
    qb_sample->add_option("--samples", qb_args.samples, "number of samples")->capture_default_str();
    qb_sample->footer("Output (NDJSON): header, then per sample:\n"
                      "  replica, exits, top_curves (L^(k)_1(y) for y = 0..N+M, one list per color k)");
    auto* qb_verify = qb->add_subcommand("verify", "exact identity checks");
    qb_verify->add_option("check", qb_verify_args.suite, "yang-baxter | partition | merge | gibbs")
        ->required()
        ->check(CLI::IsMember({"yang-baxter", "partition", "merge", "gibbs"}));
    qb_verify->add_option("--trials", qb_verify_args.trials, "trial count (0: suite default)");
    qb_verify->add_option("--report", qb_verify_args.report, "JSON report listing every residual");
    add_seed(qb_verify, qb_verify_args.c);
    add_threads(qb_verify, qb_verify_args.c);

    // verify
    VerifyArgs v_args;
    auto* v = app.add_subcommand("verify", "run a verification suite");
    v->add_option("suite", v_args.suite, "suite name, 'all', or 'list'")->required();
    v->add_option("--trials", v_args.trials, "trial / sample / replica count (0: suite default)");
    v->add_option("--report", v_args.report, "JSON report {checks: [{name, parameters, statistic, threshold, pass}], pass}");
    add_seed(v, v_args.c);
    add_threads(v, v_args.c);
    v->footer([] {
        std::string s = "Suites:\n";
        for (const auto& info : verify::suites()) s += "  " + info.name + "  " + info.summary + "\n";
        return s + "Exit status 1 when any check fails.";
    });

    // sheet / landscape
    SheetArgs sh_args, ls_args;
    auto add_scaling = [](CLI::App* s, SheetArgs& a) {
        s->add_option("--variant", a.variant, "asep | s6v")->check(CLI::IsMember({"asep", "s6v"}))->capture_default_str();
        s->add_option("--alpha", a.alpha, "characteristic direction inside the fan")->capture_default_str();
        s->add_option("--q", a.q, "parameter q")->check(unit_interval_q)->capture_default_str();
        s->add_option("--z", a.z, "S6V spectral parameter")->capture_default_str();
        s->add_option("--eps-inv", a.eps_inv, "1 / epsilon")->capture_default_str();
        s->add_option("--replicas", a.replicas, "independent replicas")->capture_default_str();
        add_seed(s, a.c);
        add_threads(s, a.c);
    };
    auto* sh = app.add_subcommand("sheet", "rescaled sheet S(x; y) on a grid");
    add_scaling(sh, sh_args);
    sh->add_option("--grid", sh_args.grid, "x grid lo:hi:step")->capture_default_str();
    sh->add_option("--ygrid", sh_args.ygrid, "y grid lo:hi:step (default: --grid)");
    add_out(sh, sh_args.c, true, "CSV output; metadata goes to <out>.json");
    sh->footer("Output (CSV): a '#' comment line with the seed, a header 'x,y1,y2,...', then one row per x;\n"
               "each cell is the replica mean of the sheet value at (x, y). The sidecar JSON holds\n"
               "mu, mu1 (mu'), mu2 (mu''), sigma, beta, gamma, lambda, the residuals and the seed.");
    auto* ls = app.add_subcommand("landscape", "rescaled landscape L(x, s; y, t)");
    add_scaling(ls, ls_args);
    ls->add_option("--x", ls_args.x)->capture_default_str();
    ls->add_option("--s", ls_args.s)->capture_default_str();
    ls->add_option("--y", ls_args.y)->capture_default_str();
    ls->add_option("--t", ls_args.t)->capture_default_str();
    add_out(ls, ls_args.c, false, "NDJSON output file (stdout if omitted)");
    ls->footer("Output (NDJSON): header, then per replica: replica, x, s, y, t, value (the landscape value)");

    // lpp eval
    LppArgs lpp_args;
    auto* lpp_cmd = app.add_subcommand("lpp", "last passage percolation through curve environments");
    lpp_cmd->require_subcommand(1);
    auto* lpp_ev = lpp_cmd->add_subcommand("eval", "f[(u,k) -> (v,j)]");
    lpp_ev->add_option("--env", lpp_args.env, "one curve per line, space-separated integers")->required();
    lpp_ev->add_option("--from", lpp_args.from, "u,k")->required();
    lpp_ev->add_option("--to", lpp_args.to, "v,j")->required();
    lpp_ev->add_option("--lo", lpp_args.lo, "position of the first column")->capture_default_str();
    add_seed(lpp_ev, lpp_args.c);
    add_out(lpp_ev, lpp_args.c, false, "NDJSON output file (stdout if omitted)");
    lpp_ev->footer("Output (NDJSON): one record {u, k, v, j, value}");

    // twopoint
    TwoPointArgs tp_args;
    auto* tp = app.add_subcommand("twopoint", "two-color ASEP space-time covariance on a ring");
    tp->add_option("--beta", tp_args.beta)->capture_default_str();
    tp->add_option("--eps-inv", tp_args.eps_inv)->capture_default_str();
    tp->add_option("--q", tp_args.q)->check(unit_interval_q)->capture_default_str();
    tp->add_option("--ring", tp_args.ring, "ring size")->capture_default_str();
    tp->add_option("--time", tp_args.time)->capture_default_str();
    tp->add_option("--offsets", tp_args.offsets, "lo:hi[:step] or a comma list")->capture_default_str();
    tp->add_option("--replicas", tp_args.replicas)->capture_default_str();
    tp->add_option("--origins", tp_args.origins, "time origins per replica")->capture_default_str();
    tp->add_option("--burn-in", tp_args.burn_in, "burn-in time (default 20 x ring size)");
    add_seed(tp, tp_args.c);
    add_threads(tp, tp_args.c);
    add_out(tp, tp_args.c, false, "JSON output file (stdout if omitted)");
    tp->footer("Output (JSON): S[kl][i] = Cov(eta^(k)_0(0), eta^(l)_t(offsets[i])) where eta^(1) marks\n"
               "colors >= 1 and eta^(2) color 2; standard_error per entry; window_sum over all offsets.");

    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        args = apply_config(app, args);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }

    try {
        if (asep_sim->parsed()) return asep_simulate(asep_args);
        if (s6v_sim->parsed()) return s6v_simulate(s6v_args);
        if (qb_enum->parsed()) return qboson_enumerate(qb_args);
        if (qb_sample->parsed()) return qboson_sample(qb_args);
        if (qb_verify->parsed()) return run_verify(qb_verify_args, "qboson verify");
        if (v->parsed()) {
            if (v_args.suite == "list") {
                for (const auto& info : verify::suites()) std::cout << info.name << "  " << info.summary << '\n';
                return 0;
            }
            return run_verify(v_args, "verify");
        }
        if (sh->parsed()) return sheet(sh_args);
        if (ls->parsed()) return landscape(ls_args);
        if (lpp_ev->parsed()) return lpp_eval(lpp_args);
        if (tp->parsed()) return twopoint(tp_args);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kUsage;
}
