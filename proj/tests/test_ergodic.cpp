#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "doctest.h"

#include "annuli/ergodic.hpp"
#include "annuli/fourier.hpp"

using namespace annuli;
using std::numbers::pi;

TEST_CASE("torus system validation")
{
    CHECK_THROWS_AS(TorusSystem(2, {1, 2, 2, 4}), DomainError);
    CHECK_THROWS_AS(TorusSystem(2, {1, 0, 0}), DomainError);
    CHECK_THROWS_AS(TorusSystem(2, {1e-5, 0, 0, 1e-5}), DomainError);
    TorusSystem sys(2, {2, 1, 0, 1});
    CHECK(sys.determinant() == doctest::Approx(2));
    std::vector<int> k{1, 1};
    auto dual = sys.dual_frequency(k);
    CHECK(dual[0] == 2);
    CHECK(dual[1] == 2);
}

TEST_CASE("flow obeys the group law exactly on dyadic data")
{
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> num(-64, 64);
    auto dyadic = [&] { return num(rng) / 16.0; };
    for (int trial = 0; trial < 200; ++trial)
    {
        int d = 1 + trial % 3;
        std::vector<double> a(d * d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                a[i * d + j] = i == j ? 1 + std::abs(num(rng)) / 8.0 : (i < j ? dyadic() : 0.0);
        TorusSystem sys(d, a);
        Point w(d), t(d), s(d), ts(d);
        for (int i = 0; i < d; ++i)
        {
            w[i] = std::abs(num(rng)) / 64.0;
            w[i] -= std::floor(w[i]);
            t[i] = dyadic();
            s[i] = dyadic();
            ts[i] = t[i] + s[i];
        }
        CHECK(sys.flow(w, ts) == sys.flow(sys.flow(w, s), t));
    }
}

TEST_CASE("flow preserves the measure of boxes")
{
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    TorusSystem sys(2, {1.0, 0.3, -0.7, 2.0});
    for (int trial = 0; trial < 10; ++trial)
    {
        double a = 0.8 * unif(rng), b = 0.8 * unif(rng);
        std::vector<double> lo{a, b}, hi{a + 0.05 + 0.15 * unif(rng), b + 0.05 + 0.15 * unif(rng)};
        std::vector<double> t{10 * unif(rng) - 5, 10 * unif(rng) - 5};
        auto m = preimage_measure(sys, lo, hi, t, 200000, trial);
        double exact = (hi[0] - lo[0]) * (hi[1] - lo[1]);
        CHECK(std::abs(m.value - exact) <= 4 * m.error);
    }
}

TEST_CASE("trigonometric polynomials")
{
    auto p = TrigPoly::wave({1, -2}, {0.5, 0.25});
    p.add({-1, 2}, {0.5, -0.25}).add({0, 0}, 3);
    CHECK(p.is_real());
    CHECK(p.mean() == std::complex<double>(3, 0));
    std::vector<double> w{0.1, 0.3};
    double phase = 2 * pi * (0.1 - 0.6);
    auto expected = 3.0 + 2 * (0.5 * std::cos(phase) - 0.25 * std::sin(phase));
    CHECK(p(w).real() == doctest::Approx(expected).epsilon(1e-14));
    CHECK(std::abs(p(w).imag()) < 1e-15);
    CHECK_FALSE(TrigPoly::wave({1, 0}).is_real());

    auto path = std::filesystem::temp_directory_path() / "annuli_poly_test.csv";
    {
        std::ofstream out(path);
        out << "k1,k2,re,im\n1,0,0.5,0\n-1,0,0.5,0\n1,0,0.25,0\n";
    }
    auto q = TrigPoly::read_csv(path.string(), 2);
    CHECK(q.coefficients().size() == 2);
    CHECK(q.coefficients().at({1, 0}) == std::complex<double>(0.75, 0));
    CHECK_THROWS_AS(TrigPoly::read_csv(path.string(), 3), ParseError);
    {
        std::ofstream out(path);
        out << "# flow\n2,1\n0,1\n";
    }
    auto a = read_matrix_csv(path.string(), 2);
    CHECK(a == std::vector<double>{2, 1, 0, 1});
    CHECK_THROWS_AS(read_matrix_csv(path.string(), 3), ParseError);
    std::filesystem::remove(path);
}

TEST_CASE("flow average examples")
{
    auto sys = TorusSystem::identity(2);
    std::vector<double> w{0.3, 0.7};
    auto one = TrigPoly::constant(2, 1.0);
    auto fn = ThicknessFunction::proportional(0.5);
    for (auto sch : {QuadratureScheme::monte_carlo(1000, 1), QuadratureScheme::product(16, 32)})
        CHECK(std::abs(flow_average(sys, one, w, 2, fn, sch).value - 1.0) < 1e-14);

    auto wave = TrigPoly::wave({1, 0});
    auto mc = flow_average(sys, wave, w, 1.3, fn, QuadratureScheme::monte_carlo(400000, 2));
    auto expected = std::polar(1.0, 2 * pi * 0.3) * annulus_kernel(2, 1.3, 0.65, 1).value;
    CHECK(std::abs(mc.value - expected) <= 4 * mc.error);
    auto sp = spectral_average(sys, wave, w, 1.3, fn);
    CHECK(std::abs(sp.value - expected) <= 1e-12);

    // averaging the real part over a 32 x 32 torus grid gives zero
    double total = 0, err = 0;
    auto sch = QuadratureScheme::product(32, 64);
    for (int i = 0; i < 32; ++i)
    {
        for (int j = 0; j < 32; ++j)
        {
            std::vector<double> g{(i + 0.5) / 32, (j + 0.5) / 32};
            auto est = flow_average(sys, wave, g, 1.3, fn, sch);
            total += est.value.real() / 1024;
            err += est.error / 1024;
        }
    }
    CHECK(std::abs(total) <= 4 * err + 1e-12);
}

TEST_CASE("spectral and direct averages agree")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::uniform_int_distribution<int> freq(-2, 2);
    TorusSystem sys(2, {1.0, 0.5, 0.0, 1.5});
    for (int trial = 0; trial < 6; ++trial)
    {
        TrigPoly phi(2);
        for (int j = 0; j < 3; ++j)
            phi.add({freq(rng), freq(rng)}, {unif(rng) - 0.5, unif(rng) - 0.5});
        std::vector<double> w{unif(rng), unif(rng)};
        double r = 0.5 + 3 * unif(rng);
        auto fn = ThicknessFunction::proportional(0.2 + 0.8 * unif(rng));
        auto direct = flow_average(sys, phi, w, r, fn, QuadratureScheme::monte_carlo(100000, 10 + trial));
        auto spec = spectral_average(sys, phi, w, r, fn);
        CHECK(std::abs(direct.value - spec.value) <= 4 * (direct.error + spec.error));
    }
}

TEST_CASE("mean ergodic error")
{
    auto sys = TorusSystem::identity(2);
    CHECK(mean_l2_error(sys, TrigPoly::constant(2, 5.0), 10, ThicknessFunction::ball()) == 0.0);
    auto wave = TrigPoly::wave({1, 0});
    CHECK(mean_l2_error(sys, wave, 1e4, ThicknessFunction::power_law(1, 0.5)) <= 0.05);
    for (double r : {10.0, 100.0, 1000.0, 1e4})
    {
        double err = mean_l2_error(sys, wave, r, ThicknessFunction::power_law(1, 0.5));
        CHECK(err == doctest::Approx(std::abs(annulus_kernel(2, r, std::sqrt(r), 1).value)));
    }

    // with A = (1) and e = 1 the unit-length windows average a period-1 wave to zero
    auto line = TorusSystem::identity(1);
    auto w1 = TrigPoly::wave({1});
    for (int i = 0; i <= 64; ++i)
        CHECK(mean_l2_error(line, w1, 1000 + i / 8.0, ThicknessFunction::constant(1)) < 1e-15);
    // at flow speed 1/4 the same bounded windows never average the wave out
    TorusSystem slow(1, {0.25});
    double sup_err = 0, sup_avg = 0;
    for (int i = 0; i <= 64; ++i)
    {
        double r = 1000 + i / 8.0;
        std::vector<double> w{0.0};
        sup_err = std::max(sup_err, mean_l2_error(slow, w1, r, ThicknessFunction::constant(1)));
        sup_avg = std::max(sup_avg, std::abs(spectral_average(slow, w1, w, r,
                                                              ThicknessFunction::constant(1)).value));
    }
    CHECK(sup_err >= 0.1);
    CHECK(sup_avg > 0.1);
    // growing windows do
    double tail = 0;
    for (int i = 0; i <= 64; ++i)
        tail = std::max(tail, mean_l2_error(slow, w1, 1000 + i / 8.0, ThicknessFunction::power_law(1, 0.5)));
    CHECK(tail <= 0.05);
}
