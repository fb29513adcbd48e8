#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "annuli/fields.hpp"
#include "annuli/geometry.hpp"

namespace annuli {

//! A quadrature result together with its error estimate.
struct Estimate
{
    double value = 0;
    double error = 0;
};

struct ComplexEstimate
{
    std::complex<double> value;
    double error = 0;
};

namespace scheme {
struct MonteCarlo
{
    std::uint64_t n;
    std::uint64_t seed;
};
/*!
 * Deterministic radial x angular rule (d <= 3).
 *
 * For general integrands: n_rad Gauss-Legendre radial nodes; n_ang equispaced
 * angles (d = 2) or n_ang azimuths times n_ang/2 Gauss-Legendre polar nodes
 * (d = 3). For radial fields the angle is reduced to the polar angle about
 * the direction of the origin, and the rule becomes a panel layout graded
 * toward the singular point and split at jump radii, with per-panel orders
 * n_rad/2 (radial) and n_ang/4 (angular).
 */
struct Product
{
    int n_rad;
    int n_ang;
};
}  // namespace scheme

class QuadratureScheme
{
  public:
    using Variant = std::variant<scheme::MonteCarlo, scheme::Product>;

    explicit QuadratureScheme(Variant v);

    static QuadratureScheme monte_carlo(std::uint64_t n, std::uint64_t seed)
    {
        return QuadratureScheme{scheme::MonteCarlo{n, seed}};
    }
    static QuadratureScheme product(int n_rad, int n_ang)
    {
        return QuadratureScheme{scheme::Product{n_rad, n_ang}};
    }

    //! Parse `mc:<n>,<seed>` or `prod:<n_rad>,<n_ang>`.
    static QuadratureScheme parse(std::string_view spec);

    //! Throws DomainError if the scheme cannot run in dimension d.
    void check_dimension(int d) const;

    const Variant& variant() const { return v_; }
    bool is_monte_carlo() const { return std::holds_alternative<scheme::MonteCarlo>(v_); }
    std::string to_string() const;

  private:
    Variant v_;
};

//---------------------------------------------------------------------------//
// Random streams and samplers
//---------------------------------------------------------------------------//

using Rng = std::mt19937_64;

//! Generator for (seed, stream), seeded through seed_seq from both values.
Rng make_stream(std::uint64_t seed, std::uint64_t stream);

//! Draws i.i.d. uniform points from an annulus centered at the origin.
class AnnulusSampler
{
  public:
    AnnulusSampler(int d, double r, double e, Norm norm);

    void operator()(Rng& rng, std::span<double> out) const;

    int dim() const { return d_; }

  private:
    int d_;
    double r_, e_;
    double shell_fraction_;  // 1 - (1 - e/r)^d
    Norm norm_;
};

//! Draws i.i.d. uniform points on the Euclidean sphere of radius rho.
class SphereSampler
{
  public:
    SphereSampler(int d, double rho);

    void operator()(Rng& rng, std::span<double> out) const;

  private:
    int d_;
    double rho_;
};

std::vector<Point> sample_annulus(int d, double r, double e, Norm norm, std::size_t n,
                                  std::uint64_t seed);

std::vector<Point> sample_sphere(int d, double rho, std::size_t n, std::uint64_t seed);

//---------------------------------------------------------------------------//
// Averages
//---------------------------------------------------------------------------//

//! Integrand in annulus coordinates t (the shift relative to the center).
using ComplexIntegrand = std::function<std::complex<double>(std::span<const double>)>;

/*!
 * Mean of g(t) over t uniform in the annulus { r - e <= |t| <= r }.
 *
 * Non-finite values are treated as measure-zero hits: Monte Carlo redraws
 * the sample, product rules drop the node.
 */
ComplexEstimate annulus_mean(int d, double r, double e, Norm norm,
                             const ComplexIntegrand& g, const QuadratureScheme& scheme);

//! Mean of g(t) over t uniform on the sphere |t| = rho.
ComplexEstimate sphere_mean(int d, double rho, const ComplexIntegrand& g,
                            const QuadratureScheme& scheme);

//! Mean of the field over x + C_{r,e}.
Estimate annulus_average(const ScalarField& field, std::span<const double> x, double r,
                         double e, Norm norm, const QuadratureScheme& scheme);

//! Mean of the field over the sphere of radius rho centered at x.
Estimate sphere_average(const ScalarField& field, std::span<const double> x, double rho,
                        const QuadratureScheme& scheme);

}  // namespace annuli
