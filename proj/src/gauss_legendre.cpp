#include "annuli/gauss_legendre.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "annuli/error.hpp"

namespace annuli {
namespace {

GaussLegendreRule build_rule(int n)
{
    GaussLegendreRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    // Newton iteration on P_n from the Chebyshev-like initial guess.
    for (int i = 0; i < (n + 1) / 2; ++i)
    {
        long double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        long double dp = 0;
        for (int iter = 0; iter < 100; ++iter)
        {
            long double p0 = 1, p1 = 0;
            for (int j = 1; j <= n; ++j)
            {
                long double p2 = p1;
                p1 = p0;
                p0 = ((2 * j - 1) * z * p1 - (j - 1) * p2) / j;
            }
            dp = n * (z * p0 - p1) / (z * z - 1);
            long double dz = p0 / dp;
            z -= dz;
            if (std::fabs(dz) < 1e-19L)
                break;
        }
        double w = static_cast<double>(2 / ((1 - z * z) * dp * dp));
        rule.nodes[i] = -static_cast<double>(z);
        rule.nodes[n - 1 - i] = static_cast<double>(z);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int n)
{
    if (n < 1 || n > 512)
        throw DomainError("Gauss-Legendre order must lie in [1, 512]");
    static std::mutex mutex;
    static std::map<int, GaussLegendreRule> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, build_rule(n)).first;
    return it->second;
}

}  // namespace annuli
