#pragma once

// Reference computations used only by the tests. Each one follows a route
// that is independent of the library code it checks.

#include <cmath>
#include <numbers>
#include <random>

namespace oracle {

//! J_0 from the first 40 terms of its alternating power series, in long double.
inline long double bessel_j0_series(long double x)
{
    long double term = 1, sum = 1, q = -x * x / 4;
    for (int k = 1; k < 40; ++k)
    {
        term *= q / (static_cast<long double>(k) * k);
        sum += term;
    }
    return sum;
}

//! Fourier transform of the uniform probability on the unit ball of R^3.
inline double ball3_transform(double s)
{
    double u = 2 * std::numbers::pi * s;
    return 3 * (std::sin(u) - u * std::cos(u)) / (u * u * u);
}

//! Fourier transform of the uniform probability on the unit disk: 2 J1(u)/u.
inline double disk_transform(double s)
{
    double u = 2 * std::numbers::pi * s;
    return 2 * std::cyl_bessel_j(1.0, u) / u;
}

/*!
 * Integral over (0, 1/2) of s_d rho^{c-1} |ln rho|^{-p}, c = d - (d-1) p, which
 * is the L^p norm power of the counterexample. Uses w = ln|ln rho| and
 * composite Simpson on [ln ln 2, wmax]; for c = 0 the power-law tail beyond
 * wmax is added exactly, for c > 0 it is negligible.
 */
inline double log_radial_integral(int d, double sphere_area, double p, double wmax = 200,
                                  int n = 400000)
{
    double c = d - (d - 1) * p;
    if (std::abs(c) < 1e-14)
        c = 0;
    double a = std::log(std::numbers::ln2);
    if (c > 0)
        wmax = std::min(wmax, std::log(800 / c));
    double h = (wmax - a) / n;
    auto f = [p, c](double w) { return std::exp(-c * std::exp(w) + (1 - p) * w); };
    double sum = f(a) + f(wmax);
    for (int i = 1; i < n; ++i)
        sum += (i % 2 ? 4 : 2) * f(a + i * h);
    double body = sum * h / 3;
    double tail = c == 0 ? std::exp((1 - p) * wmax) / (p - 1) : 0.0;
    return sphere_area * (body + tail);
}

//! Monte Carlo mean of cos(2 pi s t.e1) over t uniform on the unit circle.
inline std::pair<double, double> circle_cos_mc(double s, long n, unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0, 2 * std::numbers::pi);
    double sum = 0, sum2 = 0;
    for (long i = 0; i < n; ++i)
    {
        double v = std::cos(2 * std::numbers::pi * s * std::cos(angle(rng)));
        sum += v;
        sum2 += v * v;
    }
    double mean = sum / n;
    double var = sum2 / n - mean * mean;
    return {mean, std::sqrt(var / n)};
}

//! Monte Carlo mean of cos(2 pi s t.e1) over t uniform on the unit sphere of R^d (d <= 10).
inline std::pair<double, double> sphere_cos_mc(int d, double s, long n, unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    double sum = 0, sum2 = 0;
    double g[16];
    for (long i = 0; i < n; ++i)
    {
        double nrm = 0;
        for (int k = 0; k < d; ++k)
        {
            g[k] = normal(rng);
            nrm += g[k] * g[k];
        }
        double v = std::cos(2 * std::numbers::pi * s * g[0] / std::sqrt(nrm));
        sum += v;
        sum2 += v * v;
    }
    double mean = sum / n;
    double var = sum2 / n - mean * mean;
    return {mean, std::sqrt(var / n)};
}

//! Monte Carlo mean of cos(2 pi s t.e1) over t uniform in the unit ball of R^3 (rejection).
inline std::pair<double, double> ball3_cos_mc(double s, long n, unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1, 1);
    double sum = 0, sum2 = 0;
    long accepted = 0;
    while (accepted < n)
    {
        double x = unif(rng), y = unif(rng), z = unif(rng);
        if (x * x + y * y + z * z > 1)
            continue;
        double v = std::cos(2 * std::numbers::pi * s * x);
        sum += v;
        sum2 += v * v;
        ++accepted;
    }
    double mean = sum / n;
    double var = sum2 / n - mean * mean;
    return {mean, std::sqrt(var / n)};
}

}  // namespace oracle
