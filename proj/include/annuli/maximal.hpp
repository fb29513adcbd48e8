#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "annuli/fields.hpp"
#include "annuli/geometry.hpp"
#include "annuli/quadrature.hpp"

namespace annuli {

//! Product rule for d <= 3, Monte Carlo with 10^5 samples above.
QuadratureScheme default_scheme(int d);

//---------------------------------------------------------------------------//
// Maximal averages
//---------------------------------------------------------------------------//

struct RadiusMaximum
{
    double value = 0;
    //! Radius attaining the maximum (first one on ties).
    double radius = 0;
    //! Error estimate of the average at that radius.
    double error = 0;
};

//! Max over the grid of |annulus_average(field, x, r, fn(r))|.
RadiusMaximum maximal_over_radii(const ScalarField& field, std::span<const double> x,
                                 std::span<const double> radii, const ThicknessFunction& fn,
                                 const QuadratureScheme& scheme);

//! annulus_average(field, x, |x|, fn(|x|)).
Estimate proof_radius_average(const ScalarField& field, std::span<const double> x,
                              const ThicknessFunction& fn, const QuadratureScheme& scheme);

inline Estimate proof_radius_average(const ScalarField& field, std::span<const double> x,
                                     const ThicknessFunction& fn)
{
    return proof_radius_average(field, x, fn, default_scheme(static_cast<int>(x.size())));
}

//---------------------------------------------------------------------------//
// Sphere-annulus intersection
//---------------------------------------------------------------------------//

enum class CapMethod
{
    exact3,
    mc
};

/*!
 * Normalized measure of the points t with |t| = rho and
 * |x| - eps <= |x - t| <= |x|, for any x of norm xnorm.
 *
 * Requires xnorm > 1 >= rho >= eps > 0. exact3 is the closed form
 * (2 eps |x| - eps^2) / (4 rho |x|), available in d = 3 only.
 */
Estimate cap_measure(int d, double xnorm, double eps, double rho, CapMethod method,
                     std::uint64_t n = 1'000'000, std::uint64_t seed = 1);

//---------------------------------------------------------------------------//
// Superlevel sets
//---------------------------------------------------------------------------//

namespace region {
//! Axis-aligned box [lo, hi].
struct Box
{
    Point lo, hi;
};
//! Centered shell inner < |x| <= outer.
struct Shell
{
    int d;
    double inner, outer;
};
}  // namespace region

namespace sampling {
//! Midpoint grid with n points per axis (boxes).
struct Grid
{
    int n;
};
//! Radial x angular cells of equal angular measure (shells, d <= 3).
struct Polar
{
    int n_rad, n_ang;
};
struct MonteCarlo
{
    std::uint64_t n, seed;
};
}  // namespace sampling

using Region = std::variant<region::Box, region::Shell>;
using RegionSampling = std::variant<sampling::Grid, sampling::Polar, sampling::MonteCarlo>;

int region_dim(const Region& region);
double region_volume(const Region& region);

//! Polar 256 x 512 in d = 2, 128 x 64 in d = 3, 2^16 Monte Carlo points otherwise.
RegionSampling default_sampling(const Region& region);

/*!
 * Values of proof_radius_average at weighted sample points of a region.
 *
 * Built once, then queried for the measure of { value >= lambda } at any
 * threshold.
 */
class SuperlevelMap
{
  public:
    SuperlevelMap(const ScalarField& field, const ThicknessFunction& fn, const Region& region,
                  const RegionSampling& sampling, const QuadratureScheme& scheme);

    //! Measure of the sample points with value >= lambda; error is the MC standard error.
    Estimate volume(double lambda) const;

    //! Distinct sample values, descending, each with the measure of { value >= it }.
    std::vector<std::pair<double, double>> distribution() const;

    double region_volume() const { return region_volume_; }
    double max_value() const;

  private:
    std::vector<double> values_;
    std::vector<double> weights_;
    double region_volume_ = 0;
    bool monte_carlo_ = false;
};

Estimate superlevel_volume(const ScalarField& field, double lambda, const ThicknessFunction& fn,
                           const Region& region, const RegionSampling& sampling,
                           const QuadratureScheme& scheme);

//! lambda^p |{ proof_radius_average >= lambda }| / int |field|^p.
double weak_type_ratio(const ScalarField& field, double p, double lambda,
                       const ThicknessFunction& fn, const Region& region,
                       const RegionSampling& sampling, const QuadratureScheme& scheme);

//---------------------------------------------------------------------------//
// Thin versus thick annuli
//---------------------------------------------------------------------------//

//! Frozen lower-bound constant for the counterexample (d = 2, 3), see calibrate_constant.
std::optional<double> calibrated_constant(int d);

struct Calibration
{
    //! min over the grid of M |x|^{d-1} / ln|ln delta|
    double constant;
    //! least-squares fit of min-over-directions M |x|^{d-1} against ln|ln delta|
    double slope;
    double intercept;
    double r_squared;
    //! Regression points, norm-major: ln|ln delta| and the scaled minimum.
    std::vector<double> log_log;
    std::vector<double> scaled;
};

/*!
 * Averages of the counterexample at r = |x| over constant thickness delta,
 * for each norm in `xnorms` and `directions` equally spaced directions in
 * the (e1, e2) plane.
 */
Calibration calibrate_constant(int d, std::span<const double> xnorms,
                               std::span<const double> deltas, int directions,
                               const QuadratureScheme& scheme);

//! C ln|ln delta| / a^{d-1}
double threshold(int d, double a, double delta, double constant);

struct WeakTypeRow
{
    double delta;
    double h;
    double lambda;
    double measure;
    double norm_p;
    double ratio;
    double paper_bound;
};

struct DichotomyOptions
{
    double p = 0;  // 0 selects d / (d - 1)
    //! Thickness family; empty selects const:delta per row.
    std::optional<ThicknessFunction> fn;
    std::optional<double> constant;
    std::optional<RegionSampling> sampling;
    std::optional<QuadratureScheme> scheme;
};

/*!
 * Rows sorted by delta descending. With const:delta thickness the ratio is
 * taken at lambda(delta). With a fixed thickness family the ratio is the
 * largest lambda^p |{M >= lambda}| / norm over thresholds lambda <= lambda(delta),
 * the empirical weak-type constant on the probe shell.
 */
std::vector<WeakTypeRow> dichotomy_report(int d, double a, std::span<const double> deltas,
                                          const DichotomyOptions& options = {});

}  // namespace annuli
