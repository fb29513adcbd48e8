#pragma once

namespace annuli {

//! Bessel order nu = twice_order / 2, restricted to the orders (d-2)/2, d <= 10.
struct BesselOrder
{
    int twice_order = 0;

    static constexpr int kMaxTwiceOrder = 8;

    static BesselOrder for_dimension(int d) { return {d - 2}; }
    double value() const { return 0.5 * twice_order; }
};

/*!
 * Bessel function of the first kind J_nu(x) for x >= 0.
 *
 * Power series up to x = 12; above that, the Hankel expansion for integer
 * orders and the closed trigonometric forms with upward recurrence for
 * half-integer orders. Absolute error is below 1e-10 on [0, 200].
 */
double bessel_j(BesselOrder nu, double x);

/*!
 * Normalized Bessel function Gamma(nu+1) (2/x)^nu J_nu(x), equal to 1 at 0.
 */
double bessel_j_normalized(BesselOrder nu, double x);

/*!
 * Fourier transform of the uniform probability on the unit sphere of R^d,
 * evaluated at frequency magnitude s:
 *
 *   Gamma(d/2) J_{(d-2)/2}(2 pi s) / (pi s)^{(d-2)/2}.
 *
 * For d = 3 this is exactly sin(2 pi s) / (2 pi s).
 */
double sphere_fourier(int d, double s);

}  // namespace annuli
