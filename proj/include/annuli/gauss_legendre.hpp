#pragma once

#include <vector>

namespace annuli {

//! Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule
{
    std::vector<double> nodes;
    std::vector<double> weights;
};

//! Cached n-point rule; safe to call concurrently.
const GaussLegendreRule& gauss_legendre(int n);

//! Integrate f over [a, b] with a composite rule of `panels` equal panels.
template<class F>
double integrate_panels(F&& f, double a, double b, int panels, int order)
{
    const auto& rule = gauss_legendre(order);
    double h = (b - a) / panels;
    double total = 0;
    for (int p = 0; p < panels; ++p)
    {
        double mid = a + (p + 0.5) * h;
        double sum = 0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            sum += rule.weights[i] * f(mid + 0.5 * h * rule.nodes[i]);
        total += 0.5 * h * sum;
    }
    return total;
}

}  // namespace annuli
