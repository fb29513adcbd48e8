#include "annuli/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "annuli/format.hpp"

namespace annuli {
namespace {

void check_shell(int d, double r, double e)
{
    require_dim(d);
    if (!(r > 0) || !std::isfinite(r))
        throw DomainError("outer radius must be positive and finite, got r="
                          + format_double(r));
    if (!(e > 0))
        throw DomainError("thickness must be positive, got e=" + format_double(e));
    if (e > r)
        throw DomainError("thickness exceeds radius: e=" + format_double(e)
                          + " > r=" + format_double(r));
}

template<class... Ts>
struct Overloaded : Ts...
{
    using Ts::operator()...;
};

}  // namespace

Norm parse_norm(std::string_view text)
{
    if (text == "euclidean" || text == "l2")
        return Norm::euclidean;
    if (text == "max" || text == "linf")
        return Norm::max;
    throw ParseError("unknown norm '" + std::string(text) + "'");
}

std::string to_string(Norm norm)
{
    return norm == Norm::euclidean ? "euclidean" : "max";
}

double unit_ball_volume(int d)
{
    require_dim(d);
    return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1);
}

double unit_sphere_area(int d)
{
    require_dim(d);
    return 2 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

double shell_power_difference(int d, double r, double e)
{
    // r^d (1 - (1 - e/r)^d)
    return -std::pow(r, d) * std::expm1(d * std::log1p(-e / r));
}

double annulus_volume(int d, double r, double e, Norm norm)
{
    check_shell(d, r, e);
    double diff = e == r ? std::pow(r, d) : shell_power_difference(d, r, e);
    double unit = norm == Norm::euclidean ? unit_ball_volume(d) : std::ldexp(1.0, d);
    return unit * diff;
}

double sphere_area(int d, double rho)
{
    require_dim(d);
    if (!(rho > 0))
        throw DomainError("sphere radius must be positive, got " + format_double(rho));
    return unit_sphere_area(d) * std::pow(rho, d - 1);
}

//---------------------------------------------------------------------------//

ThicknessFunction::ThicknessFunction(Rule rule) : rule_(std::move(rule))
{
    std::visit(
        Overloaded{
            [](const thickness::Ball&) {},
            [](const thickness::Proportional& p) {
                if (!(p.gamma > 0 && p.gamma <= 1))
                    throw DomainError("proportional thickness needs gamma in (0,1], got "
                                      + format_double(p.gamma));
            },
            [](const thickness::Constant& c) {
                if (!(c.e0 > 0) || !std::isfinite(c.e0))
                    throw DomainError("constant thickness must be positive, got "
                                      + format_double(c.e0));
            },
            [](const thickness::PowerLaw& p) {
                if (!(p.c > 0) || !std::isfinite(p.c))
                    throw DomainError("power-law coefficient must be positive");
                if (!(p.alpha >= 0 && p.alpha < 1))
                    throw DomainError("power-law exponent must lie in [0,1), got "
                                      + format_double(p.alpha));
            },
            [](const thickness::Table& t) {
                if (t.nodes.empty())
                    throw DomainError("thickness table is empty");
                for (std::size_t i = 0; i < t.nodes.size(); ++i)
                {
                    auto [r, e] = t.nodes[i];
                    if (!(r > 0) || !(e > 0))
                        throw DomainError("thickness table entries must be positive");
                    if (i > 0 && !(r > t.nodes[i - 1].first))
                        throw DomainError("thickness table radii must be strictly increasing");
                }
            },
        },
        rule_);
}

ThicknessFunction ThicknessFunction::proportional(double gamma)
{
    return ThicknessFunction{thickness::Proportional{gamma}};
}

ThicknessFunction ThicknessFunction::constant(double e0)
{
    return ThicknessFunction{thickness::Constant{e0}};
}

ThicknessFunction ThicknessFunction::power_law(double c, double alpha)
{
    return ThicknessFunction{thickness::PowerLaw{c, alpha}};
}

ThicknessFunction ThicknessFunction::table(std::vector<std::pair<double, double>> nodes)
{
    return ThicknessFunction{thickness::Table{std::move(nodes), {}}};
}

ThicknessFunction ThicknessFunction::parse(std::string_view spec)
{
    spec = trim(spec);
    if (spec == "ball")
        return ball();
    auto colon = spec.find(':');
    if (colon == std::string_view::npos)
        throw ParseError("unknown thickness spec '" + std::string(spec) + "'");
    auto kind = spec.substr(0, colon);
    auto args = spec.substr(colon + 1);
    if (kind == "prop")
        return proportional(parse_double(args));
    if (kind == "const")
        return constant(parse_double(args));
    if (kind == "pow")
    {
        auto parts = parse_double_list(args);
        if (parts.size() != 2)
            throw ParseError("pow thickness takes two numbers: pow:<c>,<alpha>");
        return power_law(parts[0], parts[1]);
    }
    if (kind == "table")
    {
        std::string path(args);
        return ThicknessFunction{thickness::Table{read_thickness_table(path), path}};
    }
    throw ParseError("unknown thickness kind '" + std::string(kind) + "'");
}

ThicknessValue ThicknessFunction::operator()(double r) const
{
    if (!(r > 0) || !std::isfinite(r))
        throw DomainError("thickness evaluated at non-positive radius " + format_double(r));
    double raw = std::visit(
        Overloaded{
            [&](const thickness::Ball&) { return r; },
            [&](const thickness::Proportional& p) { return p.gamma * r; },
            [&](const thickness::Constant& c) { return c.e0; },
            [&](const thickness::PowerLaw& p) { return p.c * std::pow(r, p.alpha); },
            [&](const thickness::Table& t) {
                const auto& nodes = t.nodes;
                if (r <= nodes.front().first)
                    return nodes.front().second;
                if (r >= nodes.back().first)
                    return nodes.back().second;
                auto hi = std::upper_bound(nodes.begin(), nodes.end(), r,
                                           [](double v, const auto& n) { return v < n.first; });
                auto lo = hi - 1;
                double w = std::log(r / lo->first) / std::log(hi->first / lo->first);
                return std::exp(std::lerp(std::log(lo->second), std::log(hi->second), w));
            },
        },
        rule_);
    if (raw > r)
        return {r, true};
    return {raw, false};
}

std::string ThicknessFunction::to_string() const
{
    return std::visit(
        Overloaded{
            [](const thickness::Ball&) { return std::string("ball"); },
            [](const thickness::Proportional& p) { return "prop:" + format_double(p.gamma); },
            [](const thickness::Constant& c) { return "const:" + format_double(c.e0); },
            [](const thickness::PowerLaw& p) {
                return "pow:" + format_double(p.c) + "," + format_double(p.alpha);
            },
            [](const thickness::Table& t) {
                if (!t.source.empty())
                    return "table:" + t.source;
                return std::string("table:<memory>");
            },
        },
        rule_);
}

std::vector<std::pair<double, double>> read_thickness_table(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open thickness table '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || trim(line) != "r,e")
        throw ParseError("thickness table '" + path + "' must start with header 'r,e'");
    std::vector<std::pair<double, double>> nodes;
    while (std::getline(in, line))
    {
        auto row = trim(line);
        if (row.empty())
            continue;
        auto cols = split(row, ',');
        if (cols.size() != 2)
            throw ParseError("thickness table row needs two columns: '" + std::string(row) + "'");
        nodes.emplace_back(parse_double(trim(cols[0])), parse_double(trim(cols[1])));
    }
    return nodes;
}

//---------------------------------------------------------------------------//

void AnnulusSpec::validate() const
{
    check_shell(dim, r, e);
    if (center.size() != static_cast<std::size_t>(dim))
        throw DomainError("annulus center has " + std::to_string(center.size())
                          + " coordinates, expected " + std::to_string(dim));
}

double norm_of(std::span<const double> t, Norm norm)
{
    if (norm == Norm::max)
    {
        double m = 0;
        for (double v : t)
            m = std::max(m, std::abs(v));
        return m;
    }
    double s = 0;
    for (double v : t)
        s += v * v;
    return std::sqrt(s);
}

bool contains(const AnnulusSpec& spec, std::span<const double> t)
{
    spec.validate();
    if (t.size() != spec.center.size())
        throw DomainError("point dimension does not match annulus dimension");
    Point diff(t.size());
    for (std::size_t i = 0; i < t.size(); ++i)
        diff[i] = t[i] - spec.center[i];
    double n = norm_of(diff, spec.norm);
    return spec.r - spec.e <= n && n <= spec.r;
}

}  // namespace annuli
