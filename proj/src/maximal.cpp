#include "annuli/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "annuli/format.hpp"
#include "annuli/parallel.hpp"

namespace annuli {
namespace {

constexpr double kMinDelta = 1e-16;

double loglog(double delta)
{
    return std::log(std::abs(std::log(delta)));
}

void check_delta(double delta)
{
    if (!(delta > 0) || !(delta < 0.25))
        throw DomainError("delta must lie in (0, 1/4), got " + format_double(delta));
    if (delta < kMinDelta)
        throw DomainError("delta below 1e-16 is not supported, got " + format_double(delta));
}

// Equal-measure angular cells on the unit sphere: centers only.
std::vector<Point> angular_cells(int d, int n_ang)
{
    std::vector<Point> dirs;
    if (d == 1)
        return {{1.0}, {-1.0}};
    if (d == 2)
    {
        for (int j = 0; j < n_ang; ++j)
        {
            double phi = 2 * std::numbers::pi * (j + 0.5) / n_ang;
            dirs.push_back({std::cos(phi), std::sin(phi)});
        }
        return dirs;
    }
    int n_pol = std::max(1, n_ang / 2);
    for (int i = 0; i < n_pol; ++i)
    {
        double z = -1 + 2 * (i + 0.5) / n_pol;
        double s = std::sqrt(1 - z * z);
        for (int j = 0; j < n_ang; ++j)
        {
            double phi = 2 * std::numbers::pi * (j + 0.5) / n_ang;
            dirs.push_back({s * std::cos(phi), s * std::sin(phi), z});
        }
    }
    return dirs;
}

void check_region(const Region& region)
{
    if (const auto* box = std::get_if<region::Box>(&region))
    {
        require_dim(static_cast<int>(box->lo.size()));
        if (box->lo.size() != box->hi.size())
            throw DomainError("box corners have different dimensions");
        for (std::size_t k = 0; k < box->lo.size(); ++k)
            if (!(box->hi[k] > box->lo[k]) || !std::isfinite(box->hi[k] - box->lo[k]))
                throw DomainError("box is empty or unbounded along axis " + std::to_string(k));
        return;
    }
    const auto& shell = std::get<region::Shell>(region);
    require_dim(shell.d);
    if (!(shell.inner >= 0) || !(shell.outer > shell.inner) || !std::isfinite(shell.outer))
        throw DomainError("shell needs 0 <= inner < outer < infinity");
}

}  // namespace

QuadratureScheme default_scheme(int d)
{
    require_dim(d);
    if (d <= 3)
        return QuadratureScheme::product(64, 128);
    return QuadratureScheme::monte_carlo(100000, 1);
}

RadiusMaximum maximal_over_radii(const ScalarField& field, std::span<const double> x,
                                 std::span<const double> radii, const ThicknessFunction& fn,
                                 const QuadratureScheme& scheme)
{
    if (radii.empty())
        throw DomainError("radius grid is empty");
    for (std::size_t i = 0; i < radii.size(); ++i)
    {
        if (!(radii[i] > 0))
            throw DomainError("radii must be positive");
        if (i > 0 && !(radii[i] > radii[i - 1]))
            throw DomainError("radii must be strictly increasing");
    }
    std::vector<Estimate> avg(radii.size());
    parallel_for(radii.size(), [&](std::size_t i) {
        avg[i] = annulus_average(field, x, radii[i], fn(radii[i]).e, Norm::euclidean, scheme);
    });
    RadiusMaximum best{std::abs(avg[0].value), radii[0], avg[0].error};
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (std::abs(avg[i].value) > best.value)
            best = {std::abs(avg[i].value), radii[i], avg[i].error};
    return best;
}

Estimate proof_radius_average(const ScalarField& field, std::span<const double> x,
                              const ThicknessFunction& fn, const QuadratureScheme& scheme)
{
    double a = norm_of(x, Norm::euclidean);
    if (!(a > 0))
        throw DomainError("the proof radius |x| must be positive");
    return annulus_average(field, x, a, fn(a).e, Norm::euclidean, scheme);
}

//---------------------------------------------------------------------------//

Estimate cap_measure(int d, double xnorm, double eps, double rho, CapMethod method,
                     std::uint64_t n, std::uint64_t seed)
{
    require_dim(d, 2);
    if (!(xnorm > 1) || !(eps > 0) || !(eps <= 1) || !(rho >= eps) || !(rho <= 1))
        throw DomainError("cap measure needs |x| > 1 >= rho >= eps > 0");
    if (method == CapMethod::exact3)
    {
        if (d != 3)
            throw DomainError("the closed cap formula is for d = 3 only");
        return {(2 * eps * xnorm - eps * eps) / (4 * rho * xnorm), 0.0};
    }
    double lo = xnorm - eps;
    auto inside = [xnorm, lo, hi = xnorm](std::span<const double> t) -> std::complex<double> {
        double s = (xnorm - t[0]) * (xnorm - t[0]);
        for (std::size_t k = 1; k < t.size(); ++k)
            s += t[k] * t[k];
        double dist = std::sqrt(s);
        return dist >= lo && dist <= hi ? 1.0 : 0.0;
    };
    auto est = sphere_mean(d, rho, inside, QuadratureScheme::monte_carlo(n, seed));
    return {est.value.real(), est.error};
}

//---------------------------------------------------------------------------//

int region_dim(const Region& region)
{
    if (const auto* box = std::get_if<region::Box>(&region))
        return static_cast<int>(box->lo.size());
    return std::get<region::Shell>(region).d;
}

double region_volume(const Region& region)
{
    check_region(region);
    if (const auto* box = std::get_if<region::Box>(&region))
    {
        double v = 1;
        for (std::size_t k = 0; k < box->lo.size(); ++k)
            v *= box->hi[k] - box->lo[k];
        return v;
    }
    const auto& shell = std::get<region::Shell>(region);
    return annulus_volume(shell.d, shell.outer, shell.outer - shell.inner);
}

RegionSampling default_sampling(const Region& region)
{
    int d = region_dim(region);
    if (std::holds_alternative<region::Shell>(region))
    {
        if (d == 2)
            return sampling::Polar{256, 512};
        if (d == 3)
            return sampling::Polar{128, 64};
    }
    else if (d <= 3)
    {
        return sampling::Grid{d == 1 ? 4096 : d == 2 ? 256 : 48};
    }
    return sampling::MonteCarlo{1u << 16, 1};
}

SuperlevelMap::SuperlevelMap(const ScalarField& field, const ThicknessFunction& fn,
                             const Region& region, const RegionSampling& how,
                             const QuadratureScheme& scheme)
{
    region_volume_ = annuli::region_volume(region);
    int d = region_dim(region);
    scheme.check_dimension(d);
    std::vector<Point> points;
    std::vector<double> weights;

    if (const auto* box = std::get_if<region::Box>(&region))
    {
        if (const auto* grid = std::get_if<sampling::Grid>(&how))
        {
            if (grid->n < 1)
                throw DomainError("grid needs at least one point per axis");
            double count = std::pow(static_cast<double>(grid->n), d);
            if (count > 1e8)
                throw DomainError("grid too large");
            std::size_t total = static_cast<std::size_t>(count);
            for (std::size_t idx = 0; idx < total; ++idx)
            {
                Point p(d);
                std::size_t rest = idx;
                for (int k = 0; k < d; ++k)
                {
                    std::size_t i = rest % grid->n;
                    rest /= grid->n;
                    p[k] = box->lo[k] + (box->hi[k] - box->lo[k]) * (i + 0.5) / grid->n;
                }
                points.push_back(std::move(p));
            }
            weights.assign(points.size(), region_volume_ / count);
        }
        else if (const auto* mc = std::get_if<sampling::MonteCarlo>(&how))
        {
            if (mc->n < 1)
                throw DomainError("Monte Carlo needs at least one point");
            points.assign(mc->n, Point(d));
            constexpr std::size_t block = 4096;
            std::size_t blocks = (mc->n + block - 1) / block;
            parallel_for(blocks, [&](std::size_t b) {
                Rng rng = make_stream(mc->seed, b);
                std::uniform_real_distribution<double> unif(0.0, 1.0);
                std::size_t end = std::min<std::size_t>(mc->n, (b + 1) * block);
                for (std::size_t i = b * block; i < end; ++i)
                    for (int k = 0; k < d; ++k)
                        points[i][k] = box->lo[k] + (box->hi[k] - box->lo[k]) * unif(rng);
            });
            weights.assign(points.size(), region_volume_ / mc->n);
            monte_carlo_ = true;
        }
        else
        {
            throw DomainError("polar sampling applies to shells only");
        }
    }
    else
    {
        const auto& shell = std::get<region::Shell>(region);
        if (const auto* polar = std::get_if<sampling::Polar>(&how))
        {
            if (d > 3)
                throw DomainError("polar sampling is available for d <= 3 only");
            if (polar->n_rad < 1 || polar->n_ang < 2)
                throw DomainError("polar sampling needs n_rad >= 1 and n_ang >= 2");
            auto dirs = field.is_radial() ? std::vector<Point>{} : angular_cells(d, polar->n_ang);
            double width = (shell.outer - shell.inner) / polar->n_rad;
            for (int i = 0; i < polar->n_rad; ++i)
            {
                double lo = shell.inner + i * width;
                double hi = i + 1 == polar->n_rad ? shell.outer : lo + width;
                double ring = annulus_volume(d, hi, hi - lo);
                double rho = 0.5 * (lo + hi);
                if (field.is_radial())
                {
                    // the map is radial as well: one evaluation per ring
                    Point p(d, 0.0);
                    p[0] = rho;
                    points.push_back(std::move(p));
                    weights.push_back(ring);
                    continue;
                }
                for (const auto& u : dirs)
                {
                    Point p(d);
                    for (int k = 0; k < d; ++k)
                        p[k] = rho * u[k];
                    points.push_back(std::move(p));
                    weights.push_back(ring / dirs.size());
                }
            }
        }
        else if (const auto* mc = std::get_if<sampling::MonteCarlo>(&how))
        {
            if (mc->n < 1)
                throw DomainError("Monte Carlo needs at least one point");
            double e = shell.outer - shell.inner;
            points = sample_annulus(d, shell.outer, e, Norm::euclidean, mc->n, mc->seed);
            weights.assign(points.size(), region_volume_ / mc->n);
            monte_carlo_ = true;
        }
        else
        {
            throw DomainError("grid sampling applies to boxes only");
        }
    }

    values_.resize(points.size());
    parallel_for(points.size(), [&](std::size_t i) {
        values_[i] = proof_radius_average(field, points[i], fn, scheme).value;
    });
    weights_ = std::move(weights);
}

Estimate SuperlevelMap::volume(double lambda) const
{
    double v = 0, count = 0;
    for (std::size_t i = 0; i < values_.size(); ++i)
    {
        if (values_[i] >= lambda)
        {
            v += weights_[i];
            count += 1;
        }
    }
    if (!monte_carlo_)
        return {v, 0.0};
    double n = static_cast<double>(values_.size());
    double p = count / n;
    return {v, region_volume_ * std::sqrt(p * (1 - p) / n)};
}

std::vector<std::pair<double, double>> SuperlevelMap::distribution() const
{
    std::vector<std::size_t> order(values_.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return values_[i] > values_[j]; });
    std::vector<std::pair<double, double>> out;
    double cumulative = 0;
    for (std::size_t i : order)
    {
        cumulative += weights_[i];
        if (!out.empty() && out.back().first == values_[i])
            out.back().second = cumulative;
        else
            out.emplace_back(values_[i], cumulative);
    }
    return out;
}

double SuperlevelMap::max_value() const
{
    return *std::max_element(values_.begin(), values_.end());
}

Estimate superlevel_volume(const ScalarField& field, double lambda, const ThicknessFunction& fn,
                           const Region& region, const RegionSampling& how,
                           const QuadratureScheme& scheme)
{
    if (!(lambda > 0))
        throw DomainError("threshold must be positive");
    return SuperlevelMap(field, fn, region, how, scheme).volume(lambda);
}

double weak_type_ratio(const ScalarField& field, double p, double lambda,
                       const ThicknessFunction& fn, const Region& region,
                       const RegionSampling& how, const QuadratureScheme& scheme)
{
    if (!(p >= 1))
        throw DomainError("weak-type exponent must be at least 1");
    if (!(lambda > 0))
        throw DomainError("threshold must be positive");
    int d = region_dim(region);
    double norm = lp_norm_power(field, d, p);
    if (!(norm > 0))
        throw DomainError("field has zero L^p norm");
    double measure = superlevel_volume(field, lambda, fn, region, how, scheme).value;
    return std::pow(lambda, p) * measure / norm;
}

//---------------------------------------------------------------------------//

std::optional<double> calibrated_constant(int d)
{
    // min of M |x|^{d-1} / ln|ln delta| over |x| in (1, 2] and delta in [1e-16, 1e-2],
    // rounded down to two significant digits
    switch (d)
    {
        case 2:
            return 0.35;  // attained 0.35495 at |x| = 2, delta = 1e-16
        case 3:
            return 0.55;  // attained 0.55448 at delta = 1e-16
        default:
            return std::nullopt;
    }
}

Calibration calibrate_constant(int d, std::span<const double> xnorms,
                               std::span<const double> deltas, int directions,
                               const QuadratureScheme& scheme)
{
    require_dim(d, 2);
    if (xnorms.empty() || deltas.size() < 2 || directions < 1)
        throw DomainError("calibration needs norms, at least two deltas and one direction");
    for (double delta : deltas)
        check_delta(delta);
    auto f = ScalarField::counterexample(d);
    std::size_t nx = xnorms.size(), nd = deltas.size();
    std::vector<double> all(nx * nd * directions);
    parallel_for(all.size(), [&](std::size_t idx) {
        std::size_t j = idx % directions;
        std::size_t k = (idx / directions) % nd;
        std::size_t i = idx / (directions * nd);
        double theta = 2 * std::numbers::pi * j / directions;
        Point x(d, 0.0);
        x[0] = xnorms[i] * std::cos(theta);
        x[1] = xnorms[i] * std::sin(theta);
        all[idx] = proof_radius_average(f, x, ThicknessFunction::constant(deltas[k]), scheme).value;
    });
    Calibration cal{INFINITY, 0, 0, 0, {}, {}};
    auto& xs = cal.log_log;
    auto& ys = cal.scaled;
    for (std::size_t i = 0; i < nx; ++i)
    {
        for (std::size_t k = 0; k < nd; ++k)
        {
            auto first = all.begin() + (i * nd + k) * directions;
            double m = *std::min_element(first, first + directions);
            double scaled = m * std::pow(xnorms[i], d - 1);
            cal.constant = std::min(cal.constant, scaled / loglog(deltas[k]));
            xs.push_back(loglog(deltas[k]));
            ys.push_back(scaled);
        }
    }
    double n = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
        mx += xs[i] / n;
        my += ys[i] / n;
    }
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    cal.slope = sxy / sxx;
    cal.intercept = my - cal.slope * mx;
    cal.r_squared = syy > 0 ? sxy * sxy / (sxx * syy) : 1.0;
    return cal;
}

double threshold(int d, double a, double delta, double constant)
{
    require_dim(d, 2);
    if (!(a > 1))
        throw DomainError("probe radius a must exceed 1");
    if (!(delta > 0) || !(delta < 0.25))
        throw DomainError("delta must lie in (0, 1/4), got " + format_double(delta));
    return constant * loglog(delta) / std::pow(a, d - 1);
}

std::vector<WeakTypeRow> dichotomy_report(int d, double a, std::span<const double> deltas,
                                          const DichotomyOptions& options)
{
    require_dim(d, 2);
    if (!(a > 1) || !std::isfinite(a))
        throw DomainError("probe radius a must exceed 1");
    if (deltas.empty())
        throw DomainError("delta list is empty");
    for (double delta : deltas)
        check_delta(delta);
    double p = options.p > 0 ? options.p : critical_exponent(d);
    double constant = 0;
    if (options.constant)
        constant = *options.constant;
    else if (auto c = calibrated_constant(d))
        constant = *c;
    else
        throw DomainError("no calibrated constant for d=" + std::to_string(d)
                          + "; pass one explicitly");
    if (!(constant > 0))
        throw DomainError("calibration constant must be positive");

    auto field = ScalarField::counterexample(d);
    double norm = lp_norm_power(field, d, p);
    Region shell = region::Shell{d, 1.0, a};
    RegionSampling how = options.sampling ? *options.sampling : default_sampling(shell);
    QuadratureScheme scheme = options.scheme ? *options.scheme : default_scheme(d);
    double shell_volume = region_volume(shell);

    std::vector<double> sorted(deltas.begin(), deltas.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());

    std::vector<WeakTypeRow> rows;
    if (options.fn)
    {
        SuperlevelMap map(field, *options.fn, shell, how, scheme);
        auto levels = map.distribution();
        for (double delta : sorted)
        {
            double lam_max = threshold(d, a, delta, constant);
            WeakTypeRow row{delta, 1.0, lam_max, map.volume(lam_max).value, norm, 0, 0};
            row.ratio = std::pow(lam_max, p) * row.measure / norm;
            for (auto [lam, vol] : levels)
            {
                if (lam > lam_max || !(lam > 0))
                    continue;
                double ratio = std::pow(lam, p) * vol / norm;
                if (ratio > row.ratio)
                {
                    row.ratio = ratio;
                    row.lambda = lam;
                    row.measure = vol;
                }
            }
            row.paper_bound = std::pow(lam_max, p) * shell_volume / norm;
            rows.push_back(row);
        }
        return rows;
    }
    for (double delta : sorted)
    {
        double lam = threshold(d, a, delta, constant);
        SuperlevelMap map(field, ThicknessFunction::constant(delta), shell, how, scheme);
        WeakTypeRow row{delta, 1.0, lam, map.volume(lam).value, norm, 0, 0};
        row.ratio = std::pow(lam, p) * row.measure / norm;
        row.paper_bound = std::pow(lam, p) * shell_volume / norm;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace annuli
