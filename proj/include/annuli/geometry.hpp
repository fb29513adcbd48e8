#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "annuli/error.hpp"

namespace annuli {

using Point = std::vector<double>;

enum class Norm
{
    euclidean,
    max
};

Norm parse_norm(std::string_view text);
std::string to_string(Norm norm);

//---------------------------------------------------------------------------//
// Volumes and areas
//---------------------------------------------------------------------------//

//! Volume of the Euclidean unit ball, pi^{d/2} / Gamma(d/2 + 1).
double unit_ball_volume(int d);

//! Surface area of the Euclidean unit sphere, 2 pi^{d/2} / Gamma(d/2).
double unit_sphere_area(int d);

double annulus_volume(int d, double r, double e, Norm norm = Norm::euclidean);

double sphere_area(int d, double rho);

//! r^d - (r-e)^d without cancellation for thin shells.
double shell_power_difference(int d, double r, double e);

//---------------------------------------------------------------------------//
// Thickness functions
//---------------------------------------------------------------------------//

namespace thickness {
struct Ball
{
};
struct Proportional
{
    double gamma;
};
struct Constant
{
    double e0;
};
struct PowerLaw
{
    double c;
    double alpha;
};
struct Table
{
    //! Strictly increasing radii with positive thicknesses.
    std::vector<std::pair<double, double>> nodes;
    //! Where the nodes were loaded from; empty for in-memory tables.
    std::string source;
};
}  // namespace thickness

struct ThicknessValue
{
    double e;
    bool clamped;
};

/*!
 * Rule r -> e(r) with 0 < e(r) <= r.
 *
 * Values of the underlying rule above r are clamped to r and reported through
 * ThicknessValue::clamped. Tables interpolate log-linearly in (r, e) and hold
 * the nearest node value outside their range.
 */
class ThicknessFunction
{
  public:
    using Rule = std::variant<thickness::Ball,
                              thickness::Proportional,
                              thickness::Constant,
                              thickness::PowerLaw,
                              thickness::Table>;

    ThicknessFunction() : rule_(thickness::Ball{}) {}
    explicit ThicknessFunction(Rule rule);

    static ThicknessFunction ball() { return ThicknessFunction{}; }
    static ThicknessFunction proportional(double gamma);
    static ThicknessFunction constant(double e0);
    static ThicknessFunction power_law(double c, double alpha);
    static ThicknessFunction table(std::vector<std::pair<double, double>> nodes);

    //! Parse `ball | prop:<g> | const:<e0> | pow:<c>,<alpha> | table:<path>`.
    static ThicknessFunction parse(std::string_view spec);

    ThicknessValue operator()(double r) const;

    const Rule& rule() const { return rule_; }

    //! Canonical mini-grammar form (round-trips through parse).
    std::string to_string() const;

  private:
    Rule rule_;
};

//! Read a CSV file with header `r,e` into table nodes.
std::vector<std::pair<double, double>> read_thickness_table(const std::string& path);

//---------------------------------------------------------------------------//
// Annuli
//---------------------------------------------------------------------------//

/*!
 * The closed annulus { t : r - e <= |t - center| <= r } in the chosen norm.
 *
 * With e == r this is the closed ball of radius r.
 */
struct AnnulusSpec
{
    int dim;
    Point center;
    double r;
    double e;
    Norm norm = Norm::euclidean;

    //! Throws DomainError unless 1 <= dim <= 10, center.size() == dim and 0 < e <= r.
    void validate() const;

    double volume() const { return annulus_volume(dim, r, e, norm); }
};

double norm_of(std::span<const double> t, Norm norm);

bool contains(const AnnulusSpec& spec, std::span<const double> t);

}  // namespace annuli
