#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "annuli/error.hpp"

namespace annuli {

namespace field {
//! f(x) = -1 / (|x|^{d-1} ln|x|) on 0 < |x| < 1/2, zero elsewhere.
struct Counterexample
{
    int d;
};
//! Counterexample evaluated at x / h.
struct ScaledCounterexample
{
    int d;
    double h;
};
struct BallIndicator
{
    double radius;
};
//! |x|^beta, with 0^0 = 1.
struct RadialPower
{
    double beta;
};
//! cos(2 pi k.x).
struct TrigWave
{
    std::vector<int> k;
};
}  // namespace field

/*!
 * Real test function on R^d drawn from a closed registry, times an amplitude.
 *
 * Singular points evaluate to +infinity; quadrature treats them as
 * measure-zero events.
 */
class ScalarField
{
  public:
    using Kind = std::variant<field::Counterexample,
                              field::ScaledCounterexample,
                              field::BallIndicator,
                              field::RadialPower,
                              field::TrigWave>;

    explicit ScalarField(Kind kind, double amplitude = 1.0);

    static ScalarField counterexample(int d) { return ScalarField{field::Counterexample{d}}; }
    static ScalarField scaled_counterexample(int d, double h)
    {
        return ScalarField{field::ScaledCounterexample{d, h}};
    }
    static ScalarField ball_indicator(double radius)
    {
        return ScalarField{field::BallIndicator{radius}};
    }
    static ScalarField radial_power(double beta) { return ScalarField{field::RadialPower{beta}}; }
    static ScalarField constant(double c) { return ScalarField{field::RadialPower{0.0}, c}; }
    static ScalarField trig_wave(std::vector<int> k) { return ScalarField{field::TrigWave{std::move(k)}}; }

    /*!
     * Parse `[<amp>*](cex | cex-scaled:<h> | ball-ind:<R> | radial-pow:<beta>
     * | trig:<k1>,...,<kd>)` for ambient dimension d.
     */
    static ScalarField parse(std::string_view spec, int d);

    double operator()(std::span<const double> x) const;

    //! Value as a function of |x| for radial kinds.
    double profile(double rho) const;

    const Kind& kind() const { return kind_; }
    double amplitude() const { return amplitude_; }

    //! Dimension fixed by the kind, if any.
    std::optional<int> dim() const;

    //! True when the value depends on |x| only.
    bool is_radial() const;

    //! True when the value blows up at the origin.
    bool singular_at_origin() const;

    //! Radii |x| = R across which a radial field jumps.
    std::vector<double> jump_radii() const;

    std::string to_string() const;

  private:
    Kind kind_;
    double amplitude_;
};

//! Counterexample profile -1/(rho^{d-1} ln rho) on (0, 1/2), zero beyond.
double counterexample_profile(int d, double rho);

//! Critical exponent d / (d - 1).
double critical_exponent(int d);

struct CriticalNorm
{
    //! s_d (d-1) (ln 2)^{-1/(d-1)}
    double exact;
    //! Radial quadrature of s_d rho^{-1} |ln rho|^{-d/(d-1)} over (0, 1/2).
    double quadrature;
    double relative_difference;
};

//! Integral of f^{d/(d-1)} for the unscaled counterexample.
CriticalNorm critical_norm(int d);

/*!
 * Integral over R^d of |field|^p.
 *
 * Closed forms where available, radial quadrature otherwise. Throws
 * DomainError when the integral diverges.
 */
double lp_norm_power(const ScalarField& field, int d, double p);

/*!
 * C ln|ln e| / r^{d-1}, the counterexample's lower bound on its average over
 * the annulus of radius r = |x| centered at x. Empty outside r > 1,
 * 0 < e <= 1/4.
 */
std::optional<double> lower_bound_rhs(int d, double r, double e, double constant = 1.0);

}  // namespace annuli
