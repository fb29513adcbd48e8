#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "annuli/error.hpp"
#include "annuli/specfun.hpp"

using namespace annuli;
using std::numbers::pi;

TEST_CASE("bessel_j examples")
{
    CHECK(bessel_j({0}, 0) == 1.0);
    CHECK(std::abs(bessel_j({1}, pi)) < 1e-15);
    // frozen from the 40-term extended-precision series
    double j0_2pi = static_cast<double>(oracle::bessel_j0_series(2 * std::numbers::pi_v<long double>));
    CHECK(j0_2pi == doctest::Approx(0.2202769085399345).epsilon(1e-14));
    CHECK(std::abs(bessel_j({0}, 2 * pi) - j0_2pi) < 1e-14);
    CHECK_THROWS_AS(bessel_j({0}, -1), DomainError);
    CHECK_THROWS_AS(bessel_j({9}, 1), DomainError);
    CHECK_THROWS_AS(bessel_j({-1}, 1), DomainError);
}

TEST_CASE("bessel_j agrees with the standard library on [0, 200]")
{
    for (int twice = 0; twice <= BesselOrder::kMaxTwiceOrder; ++twice)
    {
        double nu = 0.5 * twice;
        double worst = 0;
        for (int i = 0; i <= 20000; ++i)
        {
            double x = 0.01 * i;
            double ref = std::cyl_bessel_j(nu, x);
            worst = std::max(worst, std::abs(bessel_j({twice}, x) - ref));
        }
        INFO("nu = " << nu);
        CHECK(worst <= 1e-10);
    }
}

TEST_CASE("bessel_j branches agree at the series limit")
{
    for (int twice = 0; twice <= 8; ++twice)
    {
        double below = bessel_j({twice}, std::nextafter(12.0, 0.0));
        double above = bessel_j({twice}, std::nextafter(12.0, 13.0));
        CHECK(std::abs(below - above) < 1e-11);
    }
}

TEST_CASE("half-integer orders match the closed trigonometric forms")
{
    for (double x : {0.3, 1.0, 5.0, 13.0, 77.7})
    {
        double amp = std::sqrt(2 / (pi * x));
        CHECK(bessel_j({1}, x) == doctest::Approx(amp * std::sin(x)).epsilon(1e-12));
        double j32 = amp * (std::sin(x) / x - std::cos(x));
        CHECK(std::abs(bessel_j({3}, x) - j32) < 1e-12);
    }
}

TEST_CASE("sphere_fourier examples")
{
    CHECK(std::abs(sphere_fourier(3, 0.5)) < 1e-15);
    for (int d = 2; d <= 10; ++d)
        CHECK(sphere_fourier(d, 0) == 1.0);
    double j0_2pi = static_cast<double>(oracle::bessel_j0_series(2 * std::numbers::pi_v<long double>));
    CHECK(std::abs(sphere_fourier(2, 1) - j0_2pi) < 1e-14);
    // Monte Carlo oracle on the circle
    auto [mc, se] = oracle::circle_cos_mc(1.0, 10'000'000, 2024);
    CHECK(std::abs(sphere_fourier(2, 1) - mc) <= 4 * se);
    CHECK_THROWS_AS(sphere_fourier(1, 1), DomainError);
    CHECK_THROWS_AS(sphere_fourier(2, -1), DomainError);
}

TEST_CASE("sphere_fourier in d = 3 is sinc")
{
    for (double s : {1e-8, 0.1, 0.77, 3.0, 41.5})
    {
        double x = 2 * pi * s;
        CHECK(sphere_fourier(3, s) == std::sin(x) / x);
    }
}

TEST_CASE("sphere_fourier is continuous at zero and bounded by one")
{
    for (int d = 2; d <= 10; ++d)
    {
        CHECK(sphere_fourier(d, 1e-9) == doctest::Approx(1.0).epsilon(1e-12));
        for (int i = 1; i <= 4000; ++i)
            CHECK(std::abs(sphere_fourier(d, 0.01 * i)) <= 1.0);
    }
}

TEST_CASE("sphere_fourier decays")
{
    for (int d : {2, 3})
    {
        double prev = INFINITY;
        for (double start : {10.0, 20.0, 40.0, 80.0})
        {
            double m = 0;
            for (int i = 0; i <= 10000; ++i)
                m = std::max(m, std::abs(sphere_fourier(d, start + 0.001 * i)));
            CHECK(m <= prev);
            prev = m;
        }
    }
}

TEST_CASE("sphere_fourier agrees with Monte Carlo sphere averages")
{
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> unif(0.0, 10.0);
    for (int trial = 0; trial < 20; ++trial)
    {
        int d = 2 + trial % 4;
        double s = unif(rng);
        auto [mc, se] = oracle::sphere_cos_mc(d, s, 200000, 1000 + trial);
        INFO("d=" << d << " s=" << s);
        CHECK(std::abs(sphere_fourier(d, s) - mc) <= 4 * se);
    }
}
