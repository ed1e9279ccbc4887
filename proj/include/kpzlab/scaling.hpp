#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kpzlab/asep.hpp"

namespace kpz::scaling {

enum class Variant { asep, s6v };

std::string to_string(Variant v);
Variant parse_variant(const std::string& text);

struct ScalingParams {
    Variant variant = Variant::asep;
    double alpha = 0.0;
    double q = 0.0;
    double z = 0.0;  // s6v only
    double epsilon = 0.0;

    double mu = 0.0;
    double mu1 = 0.0;  // mu'
    double mu2 = 0.0;  // mu''
    double sigma = 0.0;
    double beta = 0.0;
    double gamma = 1.0;
    double lambda = 0.0;

    // |sigma^-1 beta^2 lambda - 1| and |sigma^-2 beta |mu'| (1 - |mu'|) - 2|
    double curvature_residual = 0.0;
    double diffusion_residual = 0.0;

    double inv_eps() const { return 1.0 / epsilon; }
};

// Throws std::domain_error when alpha is outside the rarefaction fan.
ScalingParams constants(Variant variant, double alpha, double q, double z = 0.0, double epsilon = 0.0);

// h(X, Y) at integer lattice arguments; times are fixed by the caller.
using HeightLookup = std::function<std::int64_t(std::int64_t X, std::int64_t Y)>;

class MissingSample : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// Heights keyed by lattice arguments. Lookups of absent keys throw MissingSample.
class HeightTable {
public:
    void set(std::int64_t X, std::int64_t Y, std::int64_t h) { table_[{X, Y}] = h; }
    bool contains(std::int64_t X, std::int64_t Y) const { return table_.count({X, Y}) > 0; }
    std::int64_t operator()(std::int64_t X, std::int64_t Y) const;
    std::size_t size() const { return table_.size(); }
    HeightLookup lookup() const;

private:
    std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t> table_;
};

// Lattice times of the height function behind L(., s; ., t).
struct TimeWindow {
    double start = 0.0;
    double end = 0.0;
};
TimeWindow landscape_times(const ScalingParams& p, double s, double t);

// Deterministic centering mu (t - s) times the variant's time scale.
double centering(const ScalingParams& p, double s, double t);

struct LatticePoint {
    std::int64_t X = 0;
    std::int64_t Y = 0;
    double weight = 1.0;
};

// Real lattice arguments of L(x, s; y, t) before rounding.
std::pair<double, double> lattice_arguments(const ScalingParams& p, double x, double s, double y, double t);

// Bilinear corners with nonzero weight. Rounding is toward -infinity and a
// coordinate that is already an integer contributes a single corner.
std::vector<LatticePoint> stencil(const ScalingParams& p, double x, double s, double y, double t);

// Checks s < t, the certified square for s6v and N >= 2 alpha t / epsilon.
void check_domain(const ScalingParams& p, double x, double s, double y, double t, std::int64_t N);

// Landscape value from heights at lattice arguments, bilinear between grid points.
double landscape(const ScalingParams& p, double x, double s, double y, double t, const HeightLookup& h,
                 std::int64_t N = 0);

// Value at one lattice point (no interpolation).
double lattice_value(const ScalingParams& p, std::int64_t X, std::int64_t Y, double s, double t,
                     std::int64_t h, std::int64_t N = 0);

double asep_sheet(const ScalingParams& p, double x, double y, const HeightLookup& h);
double s6v_sheet(const ScalingParams& p, double x, double y, const HeightLookup& h, std::int64_t N);

struct SheetGrid {
    std::vector<double> xs;
    std::vector<double> ys;
    std::vector<std::vector<double>> values;  // values[ix][iy]
};

// Inclusive grid "lo:hi:step".
std::vector<double> parse_grid(const std::string& spec);

SheetGrid sheet_grid(const ScalingParams& p, const std::vector<double>& xs, const std::vector<double>& ys,
                     const HeightLookup& h, std::int64_t N = 0);

// Every lattice point needed for a sheet grid.
std::vector<std::pair<std::int64_t, std::int64_t>> required_points(const ScalingParams& p,
                                                                   const std::vector<double>& xs,
                                                                   const std::vector<double>& ys);

void write_csv(std::ostream& out, const SheetGrid& grid);
std::string params_json(const ScalingParams& p, std::uint64_t seed);

// x -> -2 eps^{1/3} (h0(2 x eps^{-2/3}) + x eps^{-2/3}), linear between grid points.
struct RescaledProfile {
    double epsilon = 0.0;
    asep::BernoulliPath h0;
    double operator()(double x) const;
    double grid_step() const;
};

RescaledProfile init_rescale(const asep::BernoulliPath& h0, double epsilon);

}  // namespace kpz::scaling
