#pragma once

#include <span>
#include <vector>

#include "annuli/geometry.hpp"

namespace annuli {

/*!
 * Fourier transform of the uniform probability on the annulus
 * { r - e <= |t| <= r } of R^d at a frequency of magnitude s.
 *
 * The transform is real. In d = 1 the frequency is signed; modulus and phase
 * (0 or pi) are reported alongside the value.
 */
struct KernelValue
{
    double value = 0;
    double modulus = 0;
    double phase = 0;
    //! Difference against the rule with half as many panels (0 for closed forms).
    double error = 0;
};

/*!
 * d >= 2: composite Gauss-Legendre in the radius with panels no wider than a
 * quarter period 1/(4s), doubled until two successive rules agree to 1e-8
 * relative, and normalized by the same rule applied to rho^{d-1} so that the
 * value at s = 0 is exactly 1.
 *
 * d = 1: cos(2 pi z (r - e/2)) sin(pi z e) / (pi z e).
 */
KernelValue annulus_kernel(int d, double r, double e, double s);

struct DecayRow
{
    double r;
    double e;
    double s;
    double value;
};

//! Kernel values along r_grid with e = fn(r).
std::vector<DecayRow> decay_scan(int d, const ThicknessFunction& fn, double s,
                                 std::span<const double> r_grid);

}  // namespace annuli
