#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "annuli/geometry.hpp"
#include "annuli/quadrature.hpp"

namespace annuli {

/*!
 * Translation action T_t w = w + A t (mod 1) of R^d on the torus [0, 1)^d.
 *
 * Every such flow preserves Lebesgue measure; it is ergodic exactly when
 * no nonzero integer vector k has A^T k = 0, which invertibility guarantees.
 */
class TorusSystem
{
  public:
    //! A in row-major order; throws DomainError when |det A| < 1e-9.
    TorusSystem(int d, std::vector<double> matrix);

    static TorusSystem identity(int d);

    int dim() const { return d_; }
    const std::vector<double>& matrix() const { return a_; }
    double determinant() const { return det_; }

    //! w + A t reduced to [0, 1)^d.
    Point flow(std::span<const double> omega, std::span<const double> t) const;

    //! A^T k, the frequency at which the character e^{2 pi i k.w} oscillates along the flow.
    std::vector<double> dual_frequency(std::span<const int> k) const;

  private:
    int d_;
    std::vector<double> a_;
    double det_;
};

//! Read a d x d matrix from CSV rows; lines starting with '#' are skipped.
std::vector<double> read_matrix_csv(const std::string& path, int d);

//! Finite Fourier series w -> sum_k c_k e^{2 pi i k.w} on the d-torus.
class TrigPoly
{
  public:
    using Coefficients = std::map<std::vector<int>, std::complex<double>>;

    explicit TrigPoly(int d);

    static TrigPoly constant(int d, std::complex<double> c);
    //! Single character e^{2 pi i k.w}.
    static TrigPoly wave(std::vector<int> k, std::complex<double> c = 1.0);

    //! CSV with header k1,...,kd,re,im; repeated frequencies add up.
    static TrigPoly read_csv(const std::string& path, int d);

    TrigPoly& add(std::vector<int> k, std::complex<double> c);

    int dim() const { return d_; }
    const Coefficients& coefficients() const { return c_; }

    std::complex<double> operator()(std::span<const double> omega) const;

    //! Coefficient of the zero frequency: the invariant part of an ergodic flow.
    std::complex<double> mean() const;

    //! True when c_{-k} = conj(c_k) for all k to 1e-15 relative.
    bool is_real() const;

  private:
    int d_;
    Coefficients c_;
};

//! Mean of phi(T_t w) over t uniform in C_{r, fn(r)}.
ComplexEstimate flow_average(const TorusSystem& sys, const TrigPoly& phi,
                             std::span<const double> omega, double r,
                             const ThicknessFunction& fn, const QuadratureScheme& scheme);

//! Closed form sum_k c_k e^{2 pi i k.w} kernel(|A^T k|); error bounds the kernel quadrature.
ComplexEstimate spectral_average(const TorusSystem& sys, const TrigPoly& phi,
                                 std::span<const double> omega, double r,
                                 const ThicknessFunction& fn);

//! L^2 distance between the annulus average of phi and its mean.
double mean_l2_error(const TorusSystem& sys, const TrigPoly& phi, double r,
                     const ThicknessFunction& fn);

//! Monte Carlo measure of { w : T_t w in [lo, hi) } with lo, hi inside [0, 1]^d.
Estimate preimage_measure(const TorusSystem& sys, std::span<const double> lo,
                          std::span<const double> hi, std::span<const double> t, std::uint64_t n,
                          std::uint64_t seed);

}  // namespace annuli
