#include "kpzlab/scaling.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace kpz::scaling {

std::string to_string(Variant v) { return v == Variant::asep ? "asep" : "s6v"; }

Variant parse_variant(const std::string& text) {
    if (text == "asep") return Variant::asep;
    if (text == "s6v") return Variant::s6v;
    throw std::invalid_argument("unknown variant '" + text + "' (expected asep or s6v)");
}

ScalingParams constants(Variant variant, double alpha, double q, double z, double epsilon) {
    if (!(q >= 0.0 && q < 1.0)) throw std::domain_error("q must lie in [0, 1)");
    if (epsilon < 0.0) throw std::domain_error("epsilon must be nonnegative");
    ScalingParams p;
    p.variant = variant;
    p.alpha = alpha;
    p.q = q;
    p.z = z;
    p.epsilon = epsilon;
    p.gamma = 1.0 - q;
    if (variant == Variant::asep) {
        if (!(alpha > -1.0 && alpha < 1.0)) throw std::domain_error("ASEP needs alpha in (-1, 1)");
        const double a2 = 1.0 - alpha * alpha;
        p.mu = 0.25 * (1.0 - alpha) * (1.0 - alpha);
        p.mu1 = -0.5 * (1.0 - alpha);
        p.mu2 = 0.5;
        p.sigma = 0.5 * std::cbrt(a2 * a2);
        p.beta = 2.0 * std::cbrt(a2);
        // ASEP time runs at 2 eps^-1, which halves the curvature coefficient.
        p.lambda = 0.25 * p.mu2;
    } else {
        if (!(z > 0.0 && z < 1.0)) throw std::domain_error("S6V needs z in (0, 1)");
        if (!(alpha > z && alpha < 1.0 / z)) throw std::domain_error("S6V needs alpha in (z, 1/z)");
        const double ra = std::sqrt(alpha), rz = std::sqrt(z);
        p.mu = -(ra - rz) * (ra - rz) / (1.0 - z);
        p.mu1 = -(ra - rz) / (ra * (1.0 - z));
        p.mu2 = -0.5 * rz / (alpha * ra * (1.0 - z));
        const double base = (1.0 - std::sqrt(z * alpha)) * (ra - rz);
        p.sigma = std::pow(z / alpha, 1.0 / 6.0) * std::cbrt(base * base) / (1.0 - z);
        const double m = std::abs(p.mu1);
        p.beta = 2.0 * p.sigma * p.sigma / (m * (1.0 - m));
        p.lambda = 0.5 * std::abs(p.mu2);
    }
    const double m = std::abs(p.mu1);
    p.curvature_residual = std::abs(p.beta * p.beta * p.lambda / p.sigma - 1.0);
    p.diffusion_residual = std::abs(p.beta * m * (1.0 - m) / (p.sigma * p.sigma) - 2.0);
    return p;
}

std::int64_t HeightTable::operator()(std::int64_t X, std::int64_t Y) const {
    auto it = table_.find({X, Y});
    if (it == table_.end())
        throw MissingSample("no height sample at (" + std::to_string(X) + ", " + std::to_string(Y) + ")");
    return it->second;
}

HeightLookup HeightTable::lookup() const {
    return [this](std::int64_t X, std::int64_t Y) { return (*this)(X, Y); };
}

namespace {

void need_epsilon(const ScalingParams& p) {
    if (!(p.epsilon > 0.0)) throw std::domain_error("epsilon must be positive");
}

// Time scale of the variant: ASEP runs at 2 eps^-1 per unit, S6V at eps^-1.
double time_scale(const ScalingParams& p) { return (p.variant == Variant::asep ? 2.0 : 1.0) / p.epsilon; }

}  // namespace

TimeWindow landscape_times(const ScalingParams& p, double s, double t) {
    need_epsilon(p);
    if (p.variant == Variant::asep) return {2.0 * s / (p.gamma * p.epsilon), 2.0 * t / (p.gamma * p.epsilon)};
    return {std::floor(s / p.epsilon), std::floor(t / p.epsilon)};
}

double centering(const ScalingParams& p, double s, double t) {
    need_epsilon(p);
    return p.mu * (t - s) * time_scale(p);
}

std::pair<double, double> lattice_arguments(const ScalingParams& p, double x, double s, double y, double t) {
    need_epsilon(p);
    const double space = p.beta * std::pow(p.epsilon, -2.0 / 3.0);
    return {space * x, p.alpha * (t - s) * time_scale(p) + space * y};
}

std::vector<LatticePoint> stencil(const ScalingParams& p, double x, double s, double y, double t) {
    auto [X, Y] = lattice_arguments(p, x, s, y, t);
    // Arguments within 1e-9 of an integer are treated as that integer so that
    // round-off in eps^{-2/3} does not pull in a neighbouring lattice point.
    for (double* v : {&X, &Y})
        if (std::abs(*v - std::round(*v)) < 1e-9) *v = std::round(*v);
    const double fx = std::floor(X), fy = std::floor(Y);
    const double wx = X - fx, wy = Y - fy;
    std::vector<LatticePoint> out;
    for (int dx = 0; dx <= (wx > 0.0 ? 1 : 0); ++dx)
        for (int dy = 0; dy <= (wy > 0.0 ? 1 : 0); ++dy) {
            const double w = (dx ? wx : 1.0 - wx) * (dy ? wy : 1.0 - wy);
            if (w == 0.0) continue;
            out.push_back({static_cast<std::int64_t>(fx) + dx, static_cast<std::int64_t>(fy) + dy, w});
        }
    return out;
}

void check_domain(const ScalingParams& p, double x, double s, double y, double t, std::int64_t N) {
    need_epsilon(p);
    if (!(s < t)) throw std::domain_error("landscape needs s < t");
    if (s < 0.0) throw std::domain_error("landscape needs s >= 0");
    if (p.variant == Variant::s6v) {
        const double box = std::pow(p.epsilon, -1.0 / 6.0);
        if (std::abs(x) > box || std::abs(y) > box)
            throw std::domain_error("S6V queries must satisfy |x|, |y| <= eps^{-1/6}");
        if (static_cast<double>(N) < 2.0 * p.alpha / p.epsilon)
            throw std::domain_error("S6V needs N >= 2 alpha / eps");
    }
}

double lattice_value(const ScalingParams& p, std::int64_t X, std::int64_t Y, double s, double t, std::int64_t h,
                     std::int64_t N) {
    need_epsilon(p);
    const double scale = std::cbrt(p.epsilon) / p.sigma;
    const double drift = p.alpha * (t - s) * time_scale(p);
    const double tilt = p.mu1 * (static_cast<double>(Y) - drift - static_cast<double>(X));
    const double c = centering(p, s, t);
    const double H = static_cast<double>(h);
    if (p.variant == Variant::asep) return scale * (c + tilt - H);
    return scale * (H + static_cast<double>(X) - static_cast<double>(N) - c - tilt);
}

double landscape(const ScalingParams& p, double x, double s, double y, double t, const HeightLookup& h,
                 std::int64_t N) {
    check_domain(p, x, s, y, t, N);
    double v = 0.0;
    for (const auto& pt : stencil(p, x, s, y, t)) v += pt.weight * lattice_value(p, pt.X, pt.Y, s, t, h(pt.X, pt.Y), N);
    return v;
}

double asep_sheet(const ScalingParams& p, double x, double y, const HeightLookup& h) {
    if (p.variant != Variant::asep) throw std::invalid_argument("asep_sheet needs ASEP parameters");
    return landscape(p, x, 0.0, y, 1.0, h);
}

double s6v_sheet(const ScalingParams& p, double x, double y, const HeightLookup& h, std::int64_t N) {
    if (p.variant != Variant::s6v) throw std::invalid_argument("s6v_sheet needs S6V parameters");
    return landscape(p, x, 0.0, y, 1.0, h, N);
}

std::vector<double> parse_grid(const std::string& spec) {
    std::istringstream in(spec);
    std::string a, b, c;
    if (!std::getline(in, a, ':') || !std::getline(in, b, ':') || !std::getline(in, c) || c.empty())
        throw std::invalid_argument("grid must look like lo:hi:step, got '" + spec + "'");
    double lo = 0, hi = 0, step = 0;
    try {
        lo = std::stod(a);
        hi = std::stod(b);
        step = std::stod(c);
    } catch (const std::exception&) {
        throw std::invalid_argument("grid must look like lo:hi:step, got '" + spec + "'");
    }
    if (!(step > 0.0) || hi < lo) throw std::invalid_argument("grid needs lo <= hi and step > 0");
    std::vector<double> out;
    const auto n = static_cast<std::int64_t>(std::floor((hi - lo) / step + 1e-9));
    for (std::int64_t i = 0; i <= n; ++i) out.push_back(lo + static_cast<double>(i) * step);
    return out;
}

SheetGrid sheet_grid(const ScalingParams& p, const std::vector<double>& xs, const std::vector<double>& ys,
                     const HeightLookup& h, std::int64_t N) {
    SheetGrid g{xs, ys, {}};
    for (double x : xs) {
        std::vector<double> row;
        for (double y : ys) row.push_back(landscape(p, x, 0.0, y, 1.0, h, N));
        g.values.push_back(std::move(row));
    }
    return g;
}

std::vector<std::pair<std::int64_t, std::int64_t>> required_points(const ScalingParams& p,
                                                                   const std::vector<double>& xs,
                                                                   const std::vector<double>& ys) {
    std::set<std::pair<std::int64_t, std::int64_t>> pts;
    for (double x : xs)
        for (double y : ys)
            for (const auto& pt : stencil(p, x, 0.0, y, 1.0)) pts.insert({pt.X, pt.Y});
    return {pts.begin(), pts.end()};
}

void write_csv(std::ostream& out, const SheetGrid& grid) {
    out << std::setprecision(17) << "x";
    for (double y : grid.ys) out << ',' << y;
    out << '\n';
    for (std::size_t i = 0; i < grid.xs.size(); ++i) {
        out << grid.xs[i];
        for (double v : grid.values[i]) out << ',' << v;
        out << '\n';
    }
}

std::string params_json(const ScalingParams& p, std::uint64_t seed) {
    nlohmann::json j{{"variant", to_string(p.variant)},
                     {"alpha", p.alpha},
                     {"q", p.q},
                     {"epsilon", p.epsilon},
                     {"mu", p.mu},
                     {"mu_prime", p.mu1},
                     {"mu_double_prime", p.mu2},
                     {"sigma", p.sigma},
                     {"beta", p.beta},
                     {"gamma", p.gamma},
                     {"lambda", p.lambda},
                     {"curvature_residual", p.curvature_residual},
                     {"diffusion_residual", p.diffusion_residual},
                     {"seed", seed}};
    if (p.variant == Variant::s6v) j["z"] = p.z;
    return j.dump(2);
}

double RescaledProfile::grid_step() const { return 0.5 * std::pow(epsilon, 2.0 / 3.0); }

double RescaledProfile::operator()(double x) const {
    const double u = 2.0 * x * std::pow(epsilon, -2.0 / 3.0);
    const double fu = std::floor(u);
    const double w = u - fu;
    auto at = [&](std::int64_t k) {
        const double kk = static_cast<double>(k);
        return -2.0 * std::cbrt(epsilon) * (static_cast<double>(h0.at(k)) + 0.5 * kk);
    };
    const auto k = static_cast<std::int64_t>(fu);
    if (w == 0.0) return at(k);
    return (1.0 - w) * at(k) + w * at(k + 1);
}

RescaledProfile init_rescale(const asep::BernoulliPath& h0, double epsilon) {
    if (!(epsilon > 0.0)) throw std::domain_error("epsilon must be positive");
    asep::validate_bernoulli(h0);
    return {epsilon, h0};
}

}  // namespace kpz::scaling
