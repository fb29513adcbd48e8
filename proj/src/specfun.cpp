#include "annuli/specfun.hpp"

#include <cmath>
#include <numbers>

#include "annuli/error.hpp"
#include "annuli/format.hpp"

namespace annuli {
namespace {

constexpr double kSeriesLimit = 12.0;

void check_order(BesselOrder nu)
{
    if (nu.twice_order < 0 || nu.twice_order > BesselOrder::kMaxTwiceOrder)
        throw DomainError("Bessel order " + format_double(nu.value())
                          + " outside the supported range [0, 4]");
}

// sum_k (-x^2/4)^k / (k! (nu+1)_k)
double normalized_series(double nu, double x)
{
    long double q = -0.25L * x * x;
    long double term = 1.0L;
    long double sum = 1.0L;
    for (int k = 1; k < 200; ++k)
    {
        term *= q / (k * (nu + k));
        sum += term;
        if (std::fabs(term) < 1e-21L * std::fabs(sum) && std::fabs(term) < 1e-21L)
            break;
    }
    return static_cast<double>(sum);
}

// Hankel asymptotic expansion; truncated at the smallest term.
double hankel_integer(int n, double x)
{
    double mu = 4.0 * n * n;
    double p = 1.0, q = 0.0;
    double a = 1.0;  // a_k / x^k
    double last = INFINITY;
    for (int k = 1; k < 80; ++k)
    {
        double odd = 2.0 * k - 1.0;
        a *= (mu - odd * odd) / (k * 8.0 * x);
        double mag = std::fabs(a);
        if (mag > last || mag < 1e-18)
            break;
        last = mag;
        // even k contributes to P, odd k to Q, alternating in pairs
        switch (k % 4)
        {
            case 1: q += a; break;
            case 2: p -= a; break;
            case 3: q -= a; break;
            case 0: p += a; break;
        }
    }
    double shift = (0.5 * n + 0.25) * std::numbers::pi;
    double c = std::cos(x) * std::cos(shift) + std::sin(x) * std::sin(shift);
    double s = std::sin(x) * std::cos(shift) - std::cos(x) * std::sin(shift);
    return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * c - q * s);
}

double half_integer_recurrence(int twice_order, double x)
{
    double amp = std::sqrt(2.0 / (std::numbers::pi * x));
    double prev = amp * std::cos(x);  // J_{-1/2}
    double cur = amp * std::sin(x);   // J_{1/2}
    for (int two_nu = 1; two_nu < twice_order; two_nu += 2)
    {
        double next = (two_nu / x) * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

}  // namespace

double bessel_j(BesselOrder nu, double x)
{
    check_order(nu);
    if (!(x >= 0))
        throw DomainError("bessel_j requires x >= 0, got " + format_double(x));
    double v = nu.value();
    if (x <= kSeriesLimit)
    {
        if (x == 0)
            return nu.twice_order == 0 ? 1.0 : 0.0;
        return std::pow(0.5 * x, v) / std::tgamma(v + 1) * normalized_series(v, x);
    }
    if (nu.twice_order % 2 == 0)
        return hankel_integer(nu.twice_order / 2, x);
    return half_integer_recurrence(nu.twice_order, x);
}

double bessel_j_normalized(BesselOrder nu, double x)
{
    check_order(nu);
    if (!(x >= 0))
        throw DomainError("bessel_j_normalized requires x >= 0, got " + format_double(x));
    double v = nu.value();
    if (x <= kSeriesLimit)
        return normalized_series(v, x);
    return std::tgamma(v + 1) * bessel_j(nu, x) / std::pow(0.5 * x, v);
}

double sphere_fourier(int d, double s)
{
    require_dim(d, 2);
    if (!(s >= 0))
        throw DomainError("sphere_fourier requires s >= 0, got " + format_double(s));
    if (s == 0)
        return 1.0;
    double x = 2 * std::numbers::pi * s;
    if (d == 3)
        return std::sin(x) / x;
    return bessel_j_normalized(BesselOrder::for_dimension(d), x);
}

}  // namespace annuli
