#include "annuli/fourier.hpp"

#include <cmath>
#include <numbers>

#include "annuli/format.hpp"
#include "annuli/gauss_legendre.hpp"
#include "annuli/parallel.hpp"
#include "annuli/specfun.hpp"

namespace annuli {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRelTol = 1e-8;
constexpr int kOrder = 16;
constexpr long kMaxPanels = 1L << 22;

// Weighted mean of sphere_fourier(d, rho s) with weight rho^{d-1} over [r - e, r].
double radial_rule(int d, double r, double e, double s, long panels)
{
    const auto& gl = gauss_legendre(kOrder);
    double num = 0, den = 0;
    for (long p = 0; p < panels; ++p)
    {
        double u0 = static_cast<double>(p) / panels;
        double h = 1.0 / panels;
        for (int i = 0; i < kOrder; ++i)
        {
            double u = u0 + 0.5 * h * (gl.nodes[i] + 1);
            double rho = r - e * u;
            double w = gl.weights[i] * std::pow(rho, d - 1);
            num += w * sphere_fourier(d, rho * s);
            den += w;
        }
    }
    return num / den;
}

}  // namespace

KernelValue annulus_kernel(int d, double r, double e, double s)
{
    require_dim(d);
    if (!(r > 0) || !std::isfinite(r))
        throw DomainError("radius must be positive, got " + format_double(r));
    if (!(e > 0) || e > r)
        throw DomainError("thickness must lie in (0, r], got e=" + format_double(e));
    if (!std::isfinite(s))
        throw DomainError("frequency must be finite");

    KernelValue out;
    if (d == 1)
    {
        if (s == 0)
            out.value = 1;
        else
        {
            double x = kPi * s * e;
            out.value = std::cos(2 * kPi * s * (r - 0.5 * e)) * std::sin(x) / x;
        }
    }
    else
    {
        if (s < 0)
            throw DomainError("frequency magnitude must be non-negative");
        if (s == 0)
            out.value = 1;
        else
        {
            long panels = std::max(1L, static_cast<long>(std::ceil(4 * e * s)));
            double coarse = radial_rule(d, r, e, s, panels);
            while (true)
            {
                if (panels > kMaxPanels)
                    throw DomainError("kernel quadrature did not converge");
                panels *= 2;
                double fine = radial_rule(d, r, e, s, panels);
                out.error = std::abs(fine - coarse);
                out.value = fine;
                if (out.error <= kRelTol * std::max(std::abs(fine), 1e-6))
                    break;
                coarse = fine;
            }
        }
    }
    out.modulus = std::abs(out.value);
    out.phase = out.value < 0 ? kPi : 0.0;
    return out;
}

std::vector<DecayRow> decay_scan(int d, const ThicknessFunction& fn, double s,
                                 std::span<const double> r_grid)
{
    if (!(s > 0))
        throw DomainError("decay scans need a positive frequency");
    for (std::size_t i = 0; i < r_grid.size(); ++i)
        if (!(r_grid[i] > 0) || (i > 0 && !(r_grid[i] > r_grid[i - 1])))
            throw DomainError("radius grid must be positive and increasing");
    std::vector<DecayRow> rows(r_grid.size());
    parallel_for(r_grid.size(), [&](std::size_t i) {
        double r = r_grid[i];
        double e = fn(r).e;
        rows[i] = {r, e, s, annulus_kernel(d, r, e, s).value};
    });
    return rows;
}

}  // namespace annuli
