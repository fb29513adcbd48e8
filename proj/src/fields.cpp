#include "annuli/fields.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "annuli/format.hpp"
#include "annuli/gauss_legendre.hpp"
#include "annuli/geometry.hpp"

namespace annuli {
namespace {

template<class... Ts>
struct Overloaded : Ts...
{
    using Ts::operator()...;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

double euclidean_norm(std::span<const double> x)
{
    double s = 0;
    for (double v : x)
        s += v * v;
    return std::sqrt(s);
}

/*
 * s_d * int_{ln 2}^inf exp(-c u) u^{-p} du with c = d - (d-1) p, which is the
 * substitution rho = exp(-u) applied to int_0^{1/2} s_d rho^{d-1} f(rho)^p.
 * Panels are geometric in u (log-spaced in |ln rho|).
 */
double counterexample_lp_quadrature(int d, double p)
{
    double c = d - (d - 1) * p;
    if (c < -1e-12)
        throw DomainError("counterexample is not in L^" + format_double(p) + " for d="
                          + std::to_string(d));
    c = std::max(c, 0.0);
    const auto& rule = gauss_legendre(16);
    double lo = std::numbers::ln2;
    double total = 0;
    for (int panel = 0; panel < 4000; ++panel)
    {
        double hi = 2 * lo;
        double half = 0.5 * (hi - lo);
        double mid = 0.5 * (hi + lo);
        double sum = 0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        {
            double u = mid + half * rule.nodes[i];
            sum += rule.weights[i] * std::exp(-c * u - p * std::log(u));
        }
        double piece = half * sum;
        total += piece;
        if (piece < 1e-13 * total)
            break;
        lo = hi;
    }
    return unit_sphere_area(d) * total;
}

}  // namespace

double counterexample_profile(int d, double rho)
{
    if (rho >= 0.5)
        return 0.0;
    if (rho <= 0)
        return kInf;
    return -1.0 / (std::pow(rho, d - 1) * std::log(rho));
}

double critical_exponent(int d)
{
    require_dim(d, 2);
    return static_cast<double>(d) / (d - 1);
}

//---------------------------------------------------------------------------//

ScalarField::ScalarField(Kind kind, double amplitude)
    : kind_(std::move(kind)), amplitude_(amplitude)
{
    if (!std::isfinite(amplitude_))
        throw DomainError("field amplitude must be finite");
    std::visit(Overloaded{
                   [](const field::Counterexample& f) { require_dim(f.d); },
                   [](const field::ScaledCounterexample& f) {
                       require_dim(f.d);
                       if (!(f.h > 0) || !std::isfinite(f.h))
                           throw DomainError("counterexample scale must be positive");
                   },
                   [](const field::BallIndicator& f) {
                       if (!(f.radius > 0))
                           throw DomainError("ball indicator radius must be positive");
                   },
                   [](const field::RadialPower& f) {
                       if (!std::isfinite(f.beta))
                           throw DomainError("radial power exponent must be finite");
                   },
                   [](const field::TrigWave& f) { require_dim(static_cast<int>(f.k.size())); },
               },
               kind_);
}

ScalarField ScalarField::parse(std::string_view spec, int d)
{
    require_dim(d);
    spec = trim(spec);
    double amplitude = 1.0;
    if (auto star = spec.find('*'); star != std::string_view::npos)
    {
        amplitude = parse_double(trim(spec.substr(0, star)));
        spec = trim(spec.substr(star + 1));
    }
    auto colon = spec.find(':');
    auto kind = spec.substr(0, colon);
    auto args = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
    auto need_args = [&] {
        if (colon == std::string_view::npos)
            throw ParseError("field '" + std::string(kind) + "' needs arguments");
    };
    if (kind == "cex")
    {
        if (colon != std::string_view::npos)
            throw ParseError("field 'cex' takes no arguments");
        return ScalarField{field::Counterexample{d}, amplitude};
    }
    if (kind == "cex-scaled")
    {
        need_args();
        return ScalarField{field::ScaledCounterexample{d, parse_double(args)}, amplitude};
    }
    if (kind == "ball-ind")
    {
        need_args();
        return ScalarField{field::BallIndicator{parse_double(args)}, amplitude};
    }
    if (kind == "radial-pow")
    {
        need_args();
        return ScalarField{field::RadialPower{parse_double(args)}, amplitude};
    }
    if (kind == "trig")
    {
        need_args();
        std::vector<int> k;
        for (auto item : split(args, ','))
            k.push_back(static_cast<int>(parse_integer(trim(item))));
        if (static_cast<int>(k.size()) != d)
            throw ParseError("trig field needs " + std::to_string(d) + " frequencies");
        return ScalarField{field::TrigWave{std::move(k)}, amplitude};
    }
    throw ParseError("unknown field '" + std::string(spec) + "'");
}

std::optional<int> ScalarField::dim() const
{
    return std::visit(Overloaded{
                          [](const field::Counterexample& f) -> std::optional<int> { return f.d; },
                          [](const field::ScaledCounterexample& f) -> std::optional<int> {
                              return f.d;
                          },
                          [](const field::TrigWave& f) -> std::optional<int> {
                              return static_cast<int>(f.k.size());
                          },
                          [](const auto&) -> std::optional<int> { return std::nullopt; },
                      },
                      kind_);
}

bool ScalarField::is_radial() const
{
    return !std::holds_alternative<field::TrigWave>(kind_);
}

bool ScalarField::singular_at_origin() const
{
    if (amplitude_ == 0)
        return false;
    return std::visit(Overloaded{
                          [](const field::Counterexample&) { return true; },
                          [](const field::ScaledCounterexample&) { return true; },
                          [](const field::RadialPower& f) { return f.beta < 0; },
                          [](const auto&) { return false; },
                      },
                      kind_);
}

std::vector<double> ScalarField::jump_radii() const
{
    return std::visit(Overloaded{
                          [](const field::Counterexample&) { return std::vector<double>{0.5}; },
                          [](const field::ScaledCounterexample& f) {
                              return std::vector<double>{0.5 * f.h};
                          },
                          [](const field::BallIndicator& f) {
                              return std::vector<double>{f.radius};
                          },
                          [](const auto&) { return std::vector<double>{}; },
                      },
                      kind_);
}

double ScalarField::profile(double rho) const
{
    if (amplitude_ == 0)
        return 0.0;
    double v = std::visit(
        Overloaded{
            [&](const field::Counterexample& f) { return counterexample_profile(f.d, rho); },
            [&](const field::ScaledCounterexample& f) {
                return counterexample_profile(f.d, rho / f.h);
            },
            [&](const field::BallIndicator& f) { return rho <= f.radius ? 1.0 : 0.0; },
            [&](const field::RadialPower& f) {
                if (f.beta == 0)
                    return 1.0;
                if (rho == 0)
                    return f.beta < 0 ? kInf : 0.0;
                return std::pow(rho, f.beta);
            },
            [&](const field::TrigWave&) -> double {
                throw DomainError("trigonometric wave is not a radial field");
            },
        },
        kind_);
    return amplitude_ * v;
}

double ScalarField::operator()(std::span<const double> x) const
{
    if (auto d = dim(); d && static_cast<std::size_t>(*d) != x.size())
        throw DomainError("field of dimension " + std::to_string(*d)
                          + " evaluated at a point of dimension " + std::to_string(x.size()));
    if (const auto* wave = std::get_if<field::TrigWave>(&kind_))
    {
        if (amplitude_ == 0)
            return 0.0;
        double phase = 0;
        for (std::size_t i = 0; i < x.size(); ++i)
            phase += wave->k[i] * x[i];
        return amplitude_ * std::cos(2 * std::numbers::pi * phase);
    }
    return profile(euclidean_norm(x));
}

std::string ScalarField::to_string() const
{
    std::string body = std::visit(
        Overloaded{
            [](const field::Counterexample&) { return std::string("cex"); },
            [](const field::ScaledCounterexample& f) { return "cex-scaled:" + format_double(f.h); },
            [](const field::BallIndicator& f) { return "ball-ind:" + format_double(f.radius); },
            [](const field::RadialPower& f) { return "radial-pow:" + format_double(f.beta); },
            [](const field::TrigWave& f) {
                std::string s = "trig:";
                for (std::size_t i = 0; i < f.k.size(); ++i)
                    s += (i ? "," : "") + std::to_string(f.k[i]);
                return s;
            },
        },
        kind_);
    if (amplitude_ == 1.0)
        return body;
    return format_double(amplitude_) + "*" + body;
}

//---------------------------------------------------------------------------//

CriticalNorm critical_norm(int d)
{
    require_dim(d, 2);
    double exact = unit_sphere_area(d) * (d - 1) * std::pow(std::numbers::ln2, -1.0 / (d - 1));
    double quad = counterexample_lp_quadrature(d, critical_exponent(d));
    return {exact, quad, std::abs(quad - exact) / exact};
}

double lp_norm_power(const ScalarField& field, int d, double p)
{
    require_dim(d);
    if (!(p > 0))
        throw DomainError("L^p exponent must be positive");
    double amp = std::pow(std::abs(field.amplitude()), p);
    if (amp == 0)
        return 0.0;
    if (auto fd = field.dim(); fd && *fd != d)
        throw DomainError("field dimension does not match the requested dimension");
    return std::visit(
        Overloaded{
            [&](const field::Counterexample& f) {
                if (f.d >= 2 && std::abs(p - critical_exponent(f.d)) < 1e-15)
                    return amp * critical_norm(f.d).exact;
                return amp * counterexample_lp_quadrature(f.d, p);
            },
            [&](const field::ScaledCounterexample& f) {
                double base = (f.d >= 2 && std::abs(p - critical_exponent(f.d)) < 1e-15)
                                  ? critical_norm(f.d).exact
                                  : counterexample_lp_quadrature(f.d, p);
                return amp * std::pow(f.h, f.d) * base;
            },
            [&](const field::BallIndicator& f) {
                return amp * unit_ball_volume(d) * std::pow(f.radius, d);
            },
            [&](const auto&) -> double {
                throw DomainError("field '" + field.to_string() + "' is not in L^p(R^d)");
            },
        },
        field.kind());
}

std::optional<double> lower_bound_rhs(int d, double r, double e, double constant)
{
    require_dim(d);
    if (!(r > 1) || !(e > 0) || !(e <= 0.25))
        return std::nullopt;
    return constant * std::log(std::abs(std::log(e))) / std::pow(r, d - 1);
}

}  // namespace annuli
