#include "annuli/cli.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "annuli/ergodic.hpp"
#include "annuli/error.hpp"
#include "annuli/fields.hpp"
#include "annuli/format.hpp"
#include "annuli/fourier.hpp"
#include "annuli/geometry.hpp"
#include "annuli/maximal.hpp"
#include "annuli/quadrature.hpp"

namespace annuli::cli {
namespace {

using json = nlohmann::ordered_json;
using Cell = std::variant<double, long long, std::string>;

struct Table
{
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

struct Result
{
    Table table;
    json resolved = json::object();
    bool tolerance_failed = false;
};

//---------------------------------------------------------------------------//
// Spec helpers
//---------------------------------------------------------------------------//

RegionSampling parse_sampling(std::string_view spec)
{
    auto colon = spec.find(':');
    if (colon == std::string_view::npos)
        throw ParseError("sampling spec needs a kind: '" + std::string(spec) + "'");
    auto kind = spec.substr(0, colon);
    auto args = split(spec.substr(colon + 1), ',');
    auto count = [](std::string_view text) {
        long long v = parse_integer(text);
        if (v < 1)
            throw DomainError("sampling counts must be positive");
        return v;
    };
    if (kind == "grid" && args.size() == 1)
        return sampling::Grid{static_cast<int>(count(args[0]))};
    if (kind == "polar" && args.size() == 2)
        return sampling::Polar{static_cast<int>(count(args[0])), static_cast<int>(count(args[1]))};
    if (kind == "mc" && args.size() == 2)
        return sampling::MonteCarlo{static_cast<std::uint64_t>(count(args[0])),
                                    static_cast<std::uint64_t>(parse_integer(args[1]))};
    throw ParseError("bad sampling spec '" + std::string(spec)
                     + "', expected grid:<n> | polar:<n_rad>,<n_ang> | mc:<n>,<seed>");
}

std::string to_string(const RegionSampling& s)
{
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, sampling::Grid>)
                return "grid:" + std::to_string(v.n);
            else if constexpr (std::is_same_v<T, sampling::Polar>)
                return "polar:" + std::to_string(v.n_rad) + "," + std::to_string(v.n_ang);
            else
                return "mc:" + std::to_string(v.n) + "," + std::to_string(v.seed);
        },
        s);
}

Point parse_point(const std::string& text, int d, const char* what)
{
    auto p = parse_double_list(text);
    if (static_cast<int>(p.size()) != d)
        throw DomainError(std::string(what) + " needs " + std::to_string(d) + " coordinates");
    return p;
}

std::vector<int> parse_int_list(const std::string& text)
{
    std::vector<int> out;
    for (auto item : split(text, ','))
        out.push_back(static_cast<int>(parse_integer(trim(item))));
    return out;
}

//! Explicit list, or a grid of n points in [lo, hi].
struct RadiusGrid
{
    std::string list;
    double lo = 0, hi = 0;
    int n = 0;
    std::string spacing = "lin";

    bool given() const { return !list.empty() || n > 0; }

    std::vector<double> resolve() const
    {
        if (!list.empty())
            return parse_double_list(list);
        if (n < 1 || !(lo > 0) || !(hi >= lo))
            throw DomainError("radius grid needs 0 < rmin <= rmax and nr >= 1");
        std::vector<double> out(n);
        for (int i = 0; i < n; ++i)
        {
            double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
            out[i] = spacing == "log" ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t;
        }
        out.back() = hi;
        return out;
    }

    void add_to(CLI::App* app, bool with_list = true)
    {
        if (with_list)
            app->add_option("--radii", list, "Comma-separated increasing radii");
        app->add_option("--rmin", lo, "Smallest radius of a generated grid");
        app->add_option("--rmax", hi, "Largest radius of a generated grid");
        app->add_option("--nr", n, "Number of generated radii");
        app->add_option("--spacing", spacing, "Generated grid spacing")
            ->check(CLI::IsMember({"lin", "log"}));
    }
};

//---------------------------------------------------------------------------//
// Subcommand options
//---------------------------------------------------------------------------//

struct Options
{
    int dim = 0;
    double r = 0, e = 0;
    std::string norm = "euclidean";
    std::string field = "cex";
    std::string x;
    std::string thickness;
    std::string scheme;
    bool sphere = false;
    RadiusGrid grid;

    // lemma-check
    std::string check;
    int trials = 50;
    std::uint64_t samples = 200000;
    std::uint64_t seed = 1;
    double sigmas = 4;
    double xnorm = 0, eps = 0, rho = 0;
    std::string xnorms = "1.5";
    std::string deltas = "1e-2,1e-4,1e-8,1e-16";
    int directions = 8;

    // dichotomy
    double a = 2;
    double p = 0;
    std::optional<double> constant;
    std::string sampling;

    // fourier
    std::optional<double> s;

    // ergodic
    std::string mode = "spectral";
    std::string matrix;
    std::string poly;
    std::string wave;
    std::string omega;
};

QuadratureScheme resolve_scheme(const Options& o, int d)
{
    auto scheme = o.scheme.empty() ? default_scheme(d) : QuadratureScheme::parse(o.scheme);
    scheme.check_dimension(d);
    return scheme;
}

ThicknessFunction require_thickness(const Options& o)
{
    if (o.thickness.empty())
        throw DomainError("--thickness is required");
    return ThicknessFunction::parse(o.thickness);
}

//---------------------------------------------------------------------------//
// Subcommands
//---------------------------------------------------------------------------//

Result run_volume(const Options& o)
{
    require_dim(o.dim);
    AnnulusSpec spec{o.dim, Point(o.dim, 0.0), o.r, o.e, parse_norm(o.norm)};
    spec.validate();
    Result res;
    res.resolved = {{"dim", o.dim}, {"r", o.r}, {"e", o.e}, {"norm", to_string(spec.norm)}};
    res.table.columns = {"volume"};
    res.table.rows.push_back({spec.volume()});
    return res;
}

Result run_average(const Options& o)
{
    require_dim(o.dim);
    auto field = ScalarField::parse(o.field, o.dim);
    auto x = parse_point(o.x, o.dim, "--x");
    auto scheme = resolve_scheme(o, o.dim);
    Result res;
    res.resolved = {{"dim", o.dim}, {"field", field.to_string()}, {"x", x}, {"r", o.r},
                    {"scheme", scheme.to_string()}};
    Estimate est;
    if (o.sphere)
    {
        res.resolved["domain"] = "sphere";
        est = sphere_average(field, x, o.r, scheme);
    }
    else
    {
        double e = o.e;
        if (!o.thickness.empty())
        {
            if (o.e > 0)
                throw DomainError("give either --e or --thickness");
            e = ThicknessFunction::parse(o.thickness)(o.r).e;
            res.resolved["thickness"] = ThicknessFunction::parse(o.thickness).to_string();
        }
        auto norm = parse_norm(o.norm);
        res.resolved["domain"] = "annulus";
        res.resolved["e"] = e;
        res.resolved["norm"] = to_string(norm);
        est = annulus_average(field, x, o.r, e, norm, scheme);
    }
    res.table.columns = {"value", "error"};
    res.table.rows.push_back({est.value, est.error});
    return res;
}

Result run_maximal(const Options& o)
{
    require_dim(o.dim);
    auto field = ScalarField::parse(o.field, o.dim);
    auto x = parse_point(o.x, o.dim, "--x");
    auto fn = require_thickness(o);
    auto scheme = resolve_scheme(o, o.dim);
    if (!o.grid.given())
        throw DomainError("give --radii or --rmin/--rmax/--nr");
    auto radii = o.grid.resolve();
    auto m = maximal_over_radii(field, x, radii, fn, scheme);
    Result res;
    res.resolved = {{"dim", o.dim},          {"field", field.to_string()},
                    {"x", x},                {"thickness", fn.to_string()},
                    {"radii", radii},        {"scheme", scheme.to_string()}};
    res.table.columns = {"value", "radius", "error"};
    res.table.rows.push_back({m.value, m.radius, m.error});
    return res;
}

Result check_cap(const Options& o)
{
    int d = o.dim ? o.dim : 3;
    require_dim(d, 2);
    Result res;
    std::vector<std::array<double, 3>> triples;
    if (o.xnorm > 0 || o.eps > 0 || o.rho > 0)
    {
        triples.push_back({o.xnorm, o.eps, o.rho});
    }
    else
    {
        if (o.trials < 1)
            throw DomainError("--trials must be positive");
        auto rng = make_stream(o.seed, 0);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        for (int i = 0; i < o.trials; ++i)
        {
            double xn = 1 + 3 * unif(rng) + 1e-3;
            double rho = 0.05 + 0.95 * unif(rng);
            double eps = rho * (0.02 + 0.98 * unif(rng));
            triples.push_back({xn, eps, rho});
        }
    }
    res.resolved = {{"check", "cap"}, {"dim", d}, {"samples", o.samples}, {"seed", o.seed},
                    {"sigmas", o.sigmas}};
    res.table.columns = {"xnorm", "eps", "rho", "exact", "mc", "mc_error", "lower_bound", "pass"};
    for (std::size_t i = 0; i < triples.size(); ++i)
    {
        auto [xn, eps, rho] = triples[i];
        auto mc = cap_measure(d, xn, eps, rho, CapMethod::mc, o.samples, o.seed + 1 + i);
        double bound = d == 3 ? eps / (4 * rho) : eps / (2 * std::numbers::pi * rho);
        double exact = NAN;
        bool pass;
        if (d == 3)
        {
            exact = cap_measure(d, xn, eps, rho, CapMethod::exact3).value;
            pass = std::abs(mc.value - exact) <= o.sigmas * mc.error && exact >= bound;
        }
        else
        {
            pass = mc.value + o.sigmas * mc.error >= bound;
        }
        res.tolerance_failed |= !pass;
        res.table.rows.push_back(
            {xn, eps, rho, exact, mc.value, mc.error, bound, std::string(pass ? "true" : "false")});
    }
    return res;
}

Result check_growth(const Options& o)
{
    int d = o.dim ? o.dim : 2;
    auto scheme = resolve_scheme(o, d);
    auto xs = parse_double_list(o.xnorms);
    auto ds = parse_double_list(o.deltas);
    auto cal = calibrate_constant(d, xs, ds, o.directions, scheme);
    bool pass = cal.slope > 0 && cal.r_squared > 0.9;
    Result res;
    res.tolerance_failed = !pass;
    res.resolved = {{"check", "growth"}, {"dim", d},           {"xnorms", xs},
                    {"deltas", ds},      {"directions", o.directions}, {"scheme", scheme.to_string()}};
    res.table.columns = {"xnorm", "delta", "log_log_delta", "scaled_min", "slope",
                         "intercept", "r_squared", "constant", "pass"};
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
        for (std::size_t k = 0; k < ds.size(); ++k)
        {
            std::size_t idx = i * ds.size() + k;
            res.table.rows.push_back({xs[i], ds[k], cal.log_log[idx], cal.scaled[idx], cal.slope,
                                      cal.intercept, cal.r_squared, cal.constant,
                                      std::string(pass ? "true" : "false")});
        }
    }
    return res;
}

Result check_norm(const Options& o)
{
    std::vector<int> dims = o.dim ? std::vector<int>{o.dim} : std::vector<int>{2, 3, 4};
    Result res;
    res.resolved = {{"check", "norm"}, {"dims", dims}, {"tolerance", 0.005}};
    res.table.columns = {"dim", "exact", "quadrature", "relative_difference", "pass"};
    for (int d : dims)
    {
        auto n = critical_norm(d);
        bool pass = n.relative_difference <= 0.005;
        res.tolerance_failed |= !pass;
        res.table.rows.push_back({static_cast<long long>(d), n.exact, n.quadrature,
                                  n.relative_difference, std::string(pass ? "true" : "false")});
    }
    return res;
}

Result run_lemma_check(const Options& o)
{
    if (o.check == "cap")
        return check_cap(o);
    if (o.check == "growth")
        return check_growth(o);
    return check_norm(o);
}

Result run_dichotomy(const Options& o)
{
    int d = o.dim ? o.dim : 2;
    require_dim(d, 2);
    auto ds = parse_double_list(o.deltas);
    DichotomyOptions opt;
    opt.p = o.p > 0 ? o.p : critical_exponent(d);
    if (!o.thickness.empty())
        opt.fn = ThicknessFunction::parse(o.thickness);
    opt.constant = o.constant ? o.constant : calibrated_constant(d);
    if (!opt.constant)
        throw DomainError("no calibrated constant in dimension " + std::to_string(d)
                          + ", pass --constant");
    opt.sampling = o.sampling.empty() ? default_sampling(region::Shell{d, 1, o.a})
                                      : parse_sampling(o.sampling);
    opt.scheme = resolve_scheme(o, d);
    auto rows = dichotomy_report(d, o.a, ds, opt);

    Result res;
    res.resolved = {{"dim", d},
                    {"a", o.a},
                    {"deltas", ds},
                    {"p", opt.p},
                    {"thickness", opt.fn ? opt.fn->to_string() : "const:<delta>"},
                    {"constant", *opt.constant},
                    {"sampling", to_string(*opt.sampling)},
                    {"scheme", opt.scheme->to_string()}};
    res.table.columns = {"delta", "h", "lambda", "measure", "norm_p", "ratio", "paper_bound"};
    for (const auto& row : rows)
        res.table.rows.push_back(
            {row.delta, row.h, row.lambda, row.measure, row.norm_p, row.ratio, row.paper_bound});
    return res;
}

Result run_fourier(const Options& o)
{
    require_dim(o.dim);
    if (!o.s)
        throw DomainError("--s is required");
    double s = *o.s;
    Result res;
    res.resolved = {{"dim", o.dim}, {"s", s}};
    res.table.columns = {"r", "e", "s", "value"};
    if (o.dim == 1)
    {
        res.table.columns.push_back("modulus");
        res.table.columns.push_back("phase");
    }
    auto emit = [&](double r, double e, double value) {
        std::vector<Cell> row{r, e, s, value};
        if (o.dim == 1)
        {
            row.emplace_back(std::abs(value));
            row.emplace_back(value < 0 ? std::numbers::pi : 0.0);
        }
        res.table.rows.push_back(std::move(row));
    };
    if (o.grid.given())
    {
        auto fn = require_thickness(o);
        auto radii = o.grid.resolve();
        res.resolved["thickness"] = fn.to_string();
        res.resolved["radii"] = radii;
        for (const auto& row : decay_scan(o.dim, fn, s, radii))
            emit(row.r, row.e, row.value);
        return res;
    }
    double e = o.e;
    if (!o.thickness.empty())
    {
        if (o.e > 0)
            throw DomainError("give either --e or --thickness");
        auto fn = ThicknessFunction::parse(o.thickness);
        e = fn(o.r).e;
        res.resolved["thickness"] = fn.to_string();
    }
    auto k = annulus_kernel(o.dim, o.r, e, s);
    res.resolved["r"] = o.r;
    res.resolved["e"] = e;
    emit(o.r, e, k.value);
    return res;
}

Result run_ergodic(const Options& o)
{
    int d = o.dim ? o.dim : 2;
    require_dim(d);
    auto sys = o.matrix.empty() ? TorusSystem::identity(d)
                                : TorusSystem(d, read_matrix_csv(o.matrix, d));
    if (!o.poly.empty() && !o.wave.empty())
        throw DomainError("give either --poly or --wave");
    TrigPoly phi(d);
    if (!o.poly.empty())
    {
        phi = TrigPoly::read_csv(o.poly, d);
    }
    else
    {
        std::vector<int> k(d, 0);
        k[0] = 1;
        if (!o.wave.empty())
            k = parse_int_list(o.wave);
        if (static_cast<int>(k.size()) != d)
            throw DomainError("--wave needs " + std::to_string(d) + " integers");
        phi = TrigPoly::wave(k);
    }
    auto fn = require_thickness(o);
    Point omega = o.omega.empty() ? Point(d, 0.0) : parse_point(o.omega, d, "--omega");
    if (!o.grid.given())
        throw DomainError("give --radii or --rmin/--rmax/--nr");
    auto radii = o.grid.resolve();

    json coeffs = json::array();
    for (const auto& [k, c] : phi.coefficients())
        coeffs.push_back({{"k", k}, {"re", c.real()}, {"im", c.imag()}});
    Result res;
    res.resolved = {{"mode", o.mode},          {"dim", d},
                    {"matrix", sys.matrix()},  {"poly", coeffs},
                    {"thickness", fn.to_string()}, {"omega", omega},
                    {"radii", radii}};

    if (o.mode == "l2")
    {
        res.table.columns = {"r", "e", "l2_error"};
        for (double r : radii)
            res.table.rows.push_back({r, fn(r).e, mean_l2_error(sys, phi, r, fn)});
        return res;
    }
    std::optional<QuadratureScheme> scheme;
    if (o.mode == "flow")
    {
        scheme = resolve_scheme(o, d);
        res.resolved["scheme"] = scheme->to_string();
    }
    res.table.columns = {"r", "e", "re", "im", "error"};
    for (double r : radii)
    {
        auto est = scheme ? flow_average(sys, phi, omega, r, fn, *scheme)
                          : spectral_average(sys, phi, omega, r, fn);
        res.table.rows.push_back({r, fn(r).e, est.value.real(), est.value.imag(), est.error});
    }
    return res;
}

//---------------------------------------------------------------------------//
// Output
//---------------------------------------------------------------------------//

std::string format_cell(const Cell& cell, int digits)
{
    return std::visit(
        [digits](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>)
                return format_double(v, digits);
            else if constexpr (std::is_same_v<T, long long>)
                return std::to_string(v);
            else
                return v;
        },
        cell);
}

json json_cell(const Cell& cell, int digits)
{
    return std::visit(
        [digits](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>)
            {
                if (digits > 0 && std::isfinite(v))
                    return parse_double(format_double(v, digits));
                return v;
            }
            else if constexpr (std::is_same_v<T, std::string>)
            {
                if (v == "true" || v == "false")
                    return v == "true";
                return v;
            }
            else
            {
                return v;
            }
        },
        cell);
}

void write_result(std::ostream& os, const Table& table, const json& config,
                  const std::string& format, int digits)
{
    if (format == "json")
    {
        json doc;
        doc["meta"] = {{"format", kFormatVersion}, {"config", config}, {"columns", table.columns}};
        json rows = json::array();
        for (const auto& row : table.rows)
        {
            json obj = json::object();
            for (std::size_t i = 0; i < row.size(); ++i)
                obj[table.columns[i]] = json_cell(row[i], digits);
            rows.push_back(std::move(obj));
        }
        doc["rows"] = std::move(rows);
        os << doc.dump(2) << '\n';
        return;
    }
    os << "# " << kFormatVersion << '\n';
    os << "# config: " << config.dump() << '\n';
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        os << (i ? "," : "") << table.columns[i];
    os << '\n';
    for (const auto& row : table.rows)
    {
        for (std::size_t i = 0; i < row.size(); ++i)
            os << (i ? "," : "") << format_cell(row[i], digits);
        os << '\n';
    }
}

//! The embedded argument list of a previous output file.
std::vector<std::string> read_replay_args(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open replay file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    json config;
    const std::string marker = "# config: ";
    if (text.rfind("# ", 0) == 0)
    {
        auto pos = text.find(marker);
        if (pos == std::string::npos)
            throw ParseError("no config line in '" + path + "'");
        auto end = text.find('\n', pos);
        config = json::parse(text.substr(pos + marker.size(), end - pos - marker.size()));
    }
    else
    {
        config = json::parse(text).at("meta").at("config");
    }
    return config.at("args").get<std::vector<std::string>>();
}

//! argv without --out and --replay, as embedded in the output header.
std::vector<std::string> embedded_args(const std::vector<std::string>& args)
{
    std::vector<std::string> out;
    for (std::size_t i = 0; i < args.size(); ++i)
    {
        const auto& a = args[i];
        if (a == "--out" || a == "--replay")
        {
            ++i;
            continue;
        }
        if (a.rfind("--out=", 0) == 0 || a.rfind("--replay=", 0) == 0)
            continue;
        out.push_back(a);
    }
    return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Averages over annuli, maximal functions, annulus Fourier kernels and torus flows",
                 "annuli"};
    app.require_subcommand(0, 1);
    app.fallthrough();

    std::string format = "csv";
    std::string out_path;
    std::string replay;
    int digits = 0;
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", out_path, "Output file (default stdout)");
    app.add_option("--digits", digits, "Significant digits (default: shortest round trip)")
        ->check(CLI::Range(0, 17));
    app.add_option("--replay", replay, "Re-run the configuration embedded in an output file");

    Options o;
    std::function<Result()> action;

    auto* volume = app.add_subcommand("volume", "Lebesgue measure of an annulus");
    volume->add_option("--dim", o.dim, "Dimension")->required();
    volume->add_option("--r", o.r, "Outer radius")->required();
    volume->add_option("--e", o.e, "Thickness")->required();
    volume->add_option("--norm", o.norm, "euclidean | max");
    volume->callback([&] { action = [&] { return run_volume(o); }; });

    auto* average = app.add_subcommand("average", "Average of a field over an annulus or sphere");
    average->add_option("--dim", o.dim, "Dimension")->required();
    average->add_option("--field", o.field, "cex | cex-scaled:h | ball-ind:R | radial-pow:b | trig:k..");
    average->add_option("--x", o.x, "Center, comma-separated")->required();
    average->add_option("--r", o.r, "Outer radius (sphere radius with --sphere)")->required();
    average->add_option("--e", o.e, "Thickness");
    average->add_option("--thickness", o.thickness, "Thickness function, instead of --e");
    average->add_option("--norm", o.norm, "euclidean | max");
    average->add_option("--scheme", o.scheme, "mc:n,seed | prod:n_rad,n_ang");
    average->add_flag("--sphere", o.sphere, "Average over the sphere of radius r");
    average->callback([&] { action = [&] { return run_average(o); }; });

    auto* maximal = app.add_subcommand("maximal", "Maximal annulus average over a radius grid");
    maximal->add_option("--dim", o.dim, "Dimension")->required();
    maximal->add_option("--field", o.field, "Field spec");
    maximal->add_option("--x", o.x, "Center, comma-separated")->required();
    maximal->add_option("--thickness", o.thickness, "Thickness function")->required();
    maximal->add_option("--scheme", o.scheme, "Quadrature scheme");
    o.grid.add_to(maximal);
    maximal->callback([&] { action = [&] { return run_maximal(o); }; });

    auto* lemma = app.add_subcommand("lemma-check", "Numerical checks with pass/fail tolerances");
    lemma->add_option("--check", o.check, "cap | growth | norm")
        ->required()
        ->check(CLI::IsMember({"cap", "growth", "norm"}));
    lemma->add_option("--dim", o.dim, "Dimension");
    lemma->add_option("--trials", o.trials, "cap: random triples");
    lemma->add_option("--samples", o.samples, "cap: Monte Carlo samples per triple");
    lemma->add_option("--seed", o.seed, "cap: seed");
    lemma->add_option("--sigmas", o.sigmas, "cap: allowed standard errors");
    lemma->add_option("--xnorm", o.xnorm, "cap: single triple |x|");
    lemma->add_option("--eps", o.eps, "cap: single triple eps");
    lemma->add_option("--rho", o.rho, "cap: single triple rho");
    lemma->add_option("--xnorms", o.xnorms, "growth: norms of x");
    lemma->add_option("--deltas", o.deltas, "growth: thicknesses");
    lemma->add_option("--directions", o.directions, "growth: directions per norm");
    lemma->add_option("--scheme", o.scheme, "growth: quadrature scheme");
    lemma->callback([&] { action = [&] { return run_lemma_check(o); }; });

    auto* dichotomy = app.add_subcommand("dichotomy", "Weak-type ratios of the counterexample");
    dichotomy->add_option("--dim", o.dim, "Dimension (2 or 3 without --constant)");
    dichotomy->add_option("--a", o.a, "Outer radius of the probe shell");
    dichotomy->add_option("--deltas", o.deltas, "Thicknesses in (0, 1/4)");
    dichotomy->add_option("--p", o.p, "Exponent (default d/(d-1))");
    dichotomy->add_option("--thickness", o.thickness, "Fixed thickness family for a control run");
    dichotomy->add_option("--constant", o.constant, "Threshold constant");
    dichotomy->add_option("--sampling", o.sampling, "polar:n_rad,n_ang | mc:n,seed");
    dichotomy->add_option("--scheme", o.scheme, "Quadrature scheme");
    dichotomy->callback([&] { action = [&] { return run_dichotomy(o); }; });

    auto* fourier = app.add_subcommand("fourier", "Fourier kernel of the uniform annulus measure");
    fourier->add_option("--dim", o.dim, "Dimension")->required();
    fourier->add_option("--r", o.r, "Outer radius");
    fourier->add_option("--e", o.e, "Thickness");
    fourier->add_option("--thickness", o.thickness, "Thickness function");
    fourier->add_option("--s", o.s, "Frequency (signed in d = 1)");
    o.grid.add_to(fourier);
    fourier->callback([&] { action = [&] { return run_fourier(o); }; });

    auto* ergodic = app.add_subcommand("ergodic", "Annulus averages along a torus flow");
    ergodic->add_option("--mode", o.mode, "flow | spectral | l2")
        ->check(CLI::IsMember({"flow", "spectral", "l2"}));
    ergodic->add_option("--dim", o.dim, "Dimension");
    ergodic->add_option("--matrix", o.matrix, "CSV matrix file (default identity)");
    ergodic->add_option("--poly", o.poly, "CSV file k1..kd,re,im");
    ergodic->add_option("--wave", o.wave, "Single frequency, comma-separated");
    ergodic->add_option("--omega", o.omega, "Torus point");
    ergodic->add_option("--thickness", o.thickness, "Thickness function")->required();
    ergodic->add_option("--scheme", o.scheme, "flow: quadrature scheme");
    o.grid.add_to(ergodic);
    ergodic->callback([&] { action = [&] { return run_ergodic(o); }; });

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try
    {
        app.parse(reversed);
    }
    catch (const CLI::ParseError& e)
    {
        if (e.get_exit_code() == 0)
        {
            out << app.help();
            return kSuccess;
        }
        err << "error: " << e.what() << "\n\n" << app.help();
        return kValidationError;
    }

    if (!replay.empty())
    {
        if (action)
        {
            err << "error: --replay takes no subcommand\n";
            return kValidationError;
        }
        std::vector<std::string> again;
        try
        {
            again = read_replay_args(replay);
        }
        catch (const std::exception& e)
        {
            err << "error: " << e.what() << '\n';
            return kValidationError;
        }
        if (!out_path.empty())
        {
            again.push_back("--out");
            again.push_back(out_path);
        }
        return run(again, out, err);
    }
    if (!action)
    {
        err << "error: a subcommand is required\n\n" << app.help();
        return kValidationError;
    }

    Result result;
    try
    {
        result = action();
    }
    catch (const std::exception& e)
    {
        err << "error: " << e.what() << '\n';
        return kValidationError;
    }

    json config = {{"subcommand", app.get_subcommands().front()->get_name()},
                   {"resolved", result.resolved},
                   {"args", embedded_args(args)}};
    if (out_path.empty())
    {
        write_result(out, result.table, config, format, digits);
    }
    else
    {
        std::ofstream file(out_path, std::ios::binary);
        if (!file)
        {
            err << "error: cannot write '" << out_path << "'\n";
            return kValidationError;
        }
        write_result(file, result.table, config, format, digits);
    }
    return result.tolerance_failed ? kToleranceFailure : kSuccess;
}

}  // namespace annuli::cli
