#include "annuli/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "annuli/format.hpp"
#include "annuli/gauss_legendre.hpp"
#include "annuli/parallel.hpp"

namespace annuli {
namespace {

constexpr std::uint64_t kBlockSize = 4096;
constexpr int kMaxRedraws = 1000;
constexpr double kPi = std::numbers::pi;

void check_geometry(int d, double r, double e)
{
    require_dim(d);
    if (!(r > 0) || !std::isfinite(r))
        throw DomainError("radius must be positive, got " + format_double(r));
    if (!(e > 0) || e > r)
        throw DomainError("thickness must lie in (0, r], got e=" + format_double(e)
                          + ", r=" + format_double(r));
}

int field_dim(const ScalarField& field, std::span<const double> x)
{
    int d = static_cast<int>(x.size());
    if (auto fd = field.dim(); fd && *fd != d)
        throw DomainError("field dimension " + std::to_string(*fd)
                          + " does not match point dimension " + std::to_string(d));
    require_dim(d);
    return d;
}

//---------------------------------------------------------------------------//
// Monte Carlo
//---------------------------------------------------------------------------//

struct Moments
{
    double count = 0;
    std::complex<double> mean;
    double m2 = 0;  // sum of |v - mean|^2

    void push(std::complex<double> v)
    {
        count += 1;
        auto delta = v - mean;
        mean += delta / count;
        m2 += std::real(delta * std::conj(v - mean));
    }

    void merge(const Moments& other)
    {
        if (other.count == 0)
            return;
        double total = count + other.count;
        auto delta = other.mean - mean;
        mean += delta * (other.count / total);
        m2 += other.m2 + std::norm(delta) * count * other.count / total;
        count = total;
    }
};

template<class Sampler>
ComplexEstimate monte_carlo_mean(int d, const scheme::MonteCarlo& mc, const Sampler& sample,
                                 const ComplexIntegrand& g)
{
    std::uint64_t blocks = (mc.n + kBlockSize - 1) / kBlockSize;
    std::vector<Moments> partial(blocks);
    parallel_for(blocks, [&](std::size_t b) {
        Rng rng = make_stream(mc.seed, b);
        std::uint64_t count = std::min(kBlockSize, mc.n - b * kBlockSize);
        std::vector<double> t(d);
        Moments m;
        for (std::uint64_t i = 0; i < count; ++i)
        {
            for (int attempt = 0;; ++attempt)
            {
                if (attempt == kMaxRedraws)
                    throw DomainError("integrand is non-finite on a set of positive measure");
                sample(rng, std::span<double>(t));
                auto v = g(t);
                if (std::isfinite(v.real()) && std::isfinite(v.imag()))
                {
                    m.push(v);
                    break;
                }
            }
        }
        partial[b] = m;
    });
    Moments total;
    for (const auto& m : partial)
        total.merge(m);
    double var = total.count > 1 ? total.m2 / (total.count - 1) : 0.0;
    return {total.mean, std::sqrt(var / total.count)};
}

//---------------------------------------------------------------------------//
// Product rules for general integrands
//---------------------------------------------------------------------------//

struct WeightedSum
{
    std::complex<double> sum;
    double weight = 0;

    void add(double w, std::complex<double> v)
    {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            return;
        sum += w * v;
        weight += w;
    }
    std::complex<double> mean() const
    {
        if (weight == 0)
            throw DomainError("every quadrature node hit a singular point");
        return sum / weight;
    }
};

// Angular rule on the unit sphere: unit directions with weights summing to 1.
struct AngularRule
{
    std::vector<double> dirs;  // flattened, d per node
    std::vector<double> weights;
};

AngularRule euclidean_angular_rule(int d, int n_ang)
{
    AngularRule rule;
    if (d == 1)
    {
        rule.dirs = {1.0, -1.0};
        rule.weights = {0.5, 0.5};
    }
    else if (d == 2)
    {
        for (int j = 0; j < n_ang; ++j)
        {
            double phi = 2 * kPi * (j + 0.5) / n_ang;
            rule.dirs.push_back(std::cos(phi));
            rule.dirs.push_back(std::sin(phi));
            rule.weights.push_back(1.0 / n_ang);
        }
    }
    else
    {
        int n_pol = std::max(2, n_ang / 2);
        const auto& gl = gauss_legendre(n_pol);
        for (int i = 0; i < n_pol; ++i)
        {
            double z = gl.nodes[i];
            double s = std::sqrt(std::max(0.0, 1 - z * z));
            for (int j = 0; j < n_ang; ++j)
            {
                double phi = 2 * kPi * (j + 0.5) / n_ang;
                rule.dirs.push_back(s * std::cos(phi));
                rule.dirs.push_back(s * std::sin(phi));
                rule.dirs.push_back(z);
                rule.weights.push_back(0.5 * gl.weights[i] / n_ang);
            }
        }
    }
    return rule;
}

// Points on the unit cube surface (max-norm sphere) with area weights.
AngularRule cube_surface_rule(int d, int n_ang)
{
    AngularRule rule;
    if (d == 1)
        return euclidean_angular_rule(1, n_ang);
    int m = std::max(2, n_ang / 4);
    const auto& gl = gauss_legendre(m);
    int faces = 2 * d;
    int per_face = d == 2 ? m : m * m;
    double norm = 1.0 / faces;
    for (int axis = 0; axis < d; ++axis)
    {
        for (double sign : {1.0, -1.0})
        {
            for (int idx = 0; idx < per_face; ++idx)
            {
                std::vector<double> p(d);
                p[axis] = sign;
                double w = norm;
                int rest = idx;
                for (int other = 0; other < d; ++other)
                {
                    if (other == axis)
                        continue;
                    int k = rest % m;
                    rest /= m;
                    p[other] = gl.nodes[k];
                    w *= 0.5 * gl.weights[k];
                }
                rule.dirs.insert(rule.dirs.end(), p.begin(), p.end());
                rule.weights.push_back(w);
            }
        }
    }
    return rule;
}

std::complex<double> tensor_mean(int d, double r, double e, Norm norm, const ComplexIntegrand& g,
                                 int n_rad, int n_ang)
{
    AngularRule ang = norm == Norm::euclidean ? euclidean_angular_rule(d, n_ang)
                                              : cube_surface_rule(d, n_ang);
    const auto& gl = gauss_legendre(n_rad);
    WeightedSum acc;
    std::vector<double> t(d);
    for (int i = 0; i < n_rad; ++i)
    {
        double u = 0.5 * (gl.nodes[i] + 1);
        double rho = r - e * u;
        double wr = 0.5 * gl.weights[i] * std::pow(rho, d - 1);
        for (std::size_t j = 0; j < ang.weights.size(); ++j)
        {
            for (int k = 0; k < d; ++k)
                t[k] = rho * ang.dirs[j * d + k];
            acc.add(wr * ang.weights[j], g(t));
        }
    }
    return acc.mean();
}

std::complex<double> tensor_sphere_mean(int d, double rho, const ComplexIntegrand& g, int n_ang)
{
    AngularRule ang = euclidean_angular_rule(d, n_ang);
    WeightedSum acc;
    std::vector<double> t(d);
    for (std::size_t j = 0; j < ang.weights.size(); ++j)
    {
        for (int k = 0; k < d; ++k)
            t[k] = rho * ang.dirs[j * d + k];
        acc.add(ang.weights[j], g(t));
    }
    return acc.mean();
}

//---------------------------------------------------------------------------//
// Reduced rule for radial fields
//---------------------------------------------------------------------------//

/*
 * For a field depending on |y| only, the mean over the sphere of radius rho
 * centered at x depends on the polar angle phi between t and -x only. With
 * a = |x| and o = a - rho the distance to the origin is
 *
 *   q(phi)^2 = o^2 + 4 a rho sin^2(phi/2),
 *
 * which stays accurate when rho is within rounding of a.
 */
class RadialFieldRule
{
  public:
    RadialFieldRule(const ScalarField& field, int d, double a, int ord_rad, int ord_ang)
        : field_(field),
          d_(d),
          a_(a),
          ord_rad_(ord_rad),
          ord_ang_(ord_ang),
          singular_(field.singular_at_origin()),
          jumps_(field.jump_radii())
    {
    }

    // Sphere mean at radius rho; o = a - rho computed by the caller.
    double sphere(double rho, double o) const
    {
        if (a_ == 0 || rho == 0)
            return field_.profile(std::abs(o));
        double c = 4 * a_ * rho;
        std::vector<double> breaks{0.0, kPi};
        for (double R : jumps_)
        {
            double s2 = (R - o) * (R + o) / c;
            if (s2 > 0 && s2 < 1)
                breaks.push_back(2 * std::asin(std::sqrt(s2)));
        }
        if (singular_)
        {
            double scale = std::max(std::abs(o) / std::sqrt(a_ * rho), 1e-150);
            for (double p = 0.25 * scale; p < kPi; p *= 2)
                breaks.push_back(p);
        }
        std::sort(breaks.begin(), breaks.end());
        breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

        const auto& gl = gauss_legendre(ord_ang_);
        double sum = 0, weight = 0;
        for (std::size_t p = 0; p + 1 < breaks.size(); ++p)
        {
            double half = 0.5 * (breaks[p + 1] - breaks[p]);
            double mid = 0.5 * (breaks[p + 1] + breaks[p]);
            for (int i = 0; i < ord_ang_; ++i)
            {
                double phi = mid + half * gl.nodes[i];
                double s = std::sin(0.5 * phi);
                double q = std::sqrt(o * o + c * s * s);
                double w = half * gl.weights[i] * std::pow(std::sin(phi), d_ - 2);
                double v = field_.profile(q);
                if (!std::isfinite(v))
                    continue;
                sum += w * v;
                weight += w;
            }
        }
        if (weight == 0)
            throw DomainError("every quadrature node hit a singular point");
        return sum / weight;
    }

    double annulus(double r, double e) const
    {
        double shift = a_ - r;  // o(u) = shift + e u, rho(u) = r - e u
        std::vector<double> breaks{0.0, 1.0};
        auto add = [&](double u) {
            if (u > 0 && u < 1)
                breaks.push_back(u);
        };
        if (singular_)
        {
            double star = -shift / e;
            for (int k = 0; k <= 52; ++k)
            {
                double step = std::ldexp(1.0, -k);
                add(star - step);
                add(star + step);
            }
            add(star);
        }
        for (double R : jumps_)
        {
            add((R - shift) / e);
            add((-R - shift) / e);
            add((r - R + a_) / e);
        }
        std::sort(breaks.begin(), breaks.end());
        breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

        const auto& gl = gauss_legendre(ord_rad_);
        double sum = 0, weight = 0;
        for (std::size_t p = 0; p + 1 < breaks.size(); ++p)
        {
            double half = 0.5 * (breaks[p + 1] - breaks[p]);
            double mid = 0.5 * (breaks[p + 1] + breaks[p]);
            for (int i = 0; i < ord_rad_; ++i)
            {
                double u = mid + half * gl.nodes[i];
                double rho = r - e * u;
                double w = half * gl.weights[i] * std::pow(rho, d_ - 1);
                sum += w * sphere(rho, shift + e * u);
                weight += w;
            }
        }
        return sum / weight;
    }

  private:
    const ScalarField& field_;
    int d_;
    double a_;
    int ord_rad_, ord_ang_;
    bool singular_;
    std::vector<double> jumps_;
};

int panel_order(int n, int divisor)
{
    return std::clamp(n / divisor, 2, 64);
}

bool use_radial_rule(const ScalarField& field, int d, Norm norm)
{
    return field.is_radial() && (d == 2 || d == 3) && norm == Norm::euclidean;
}

double radial_rule_annulus(const ScalarField& field, std::span<const double> x, double r, double e,
                           const scheme::Product& p)
{
    int d = static_cast<int>(x.size());
    RadialFieldRule rule(field, d, norm_of(x, Norm::euclidean), panel_order(p.n_rad, 2),
                         panel_order(p.n_ang, 4));
    return rule.annulus(r, e);
}

double radial_rule_sphere(const ScalarField& field, std::span<const double> x, double rho,
                          const scheme::Product& p)
{
    int d = static_cast<int>(x.size());
    double a = norm_of(x, Norm::euclidean);
    RadialFieldRule rule(field, d, a, 2, panel_order(p.n_ang, 4));
    return rule.sphere(rho, a - rho);
}

}  // namespace

//---------------------------------------------------------------------------//

QuadratureScheme::QuadratureScheme(Variant v) : v_(std::move(v))
{
    if (const auto* mc = std::get_if<scheme::MonteCarlo>(&v_))
    {
        if (mc->n < 100)
            throw DomainError("Monte Carlo needs at least 100 samples");
    }
    else
    {
        const auto& p = std::get<scheme::Product>(v_);
        if (p.n_rad < 8)
            throw DomainError("product rule needs at least 8 radial nodes");
        if (p.n_ang < 16)
            throw DomainError("product rule needs at least 16 angular nodes");
        if (p.n_rad > 512 || p.n_ang > 4096)
            throw DomainError("product rule resolution too large");
    }
}

QuadratureScheme QuadratureScheme::parse(std::string_view spec)
{
    spec = trim(spec);
    auto colon = spec.find(':');
    if (colon == std::string_view::npos)
        throw ParseError("scheme must be mc:<n>,<seed> or prod:<n_rad>,<n_ang>");
    auto kind = spec.substr(0, colon);
    auto args = split(spec.substr(colon + 1), ',');
    if (args.size() != 2)
        throw ParseError("scheme '" + std::string(spec) + "' needs two arguments");
    long long a = parse_integer(trim(args[0]));
    long long b = parse_integer(trim(args[1]));
    if (kind == "mc")
    {
        if (a < 0 || b < 0)
            throw ParseError("Monte Carlo arguments must be non-negative");
        return monte_carlo(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b));
    }
    if (kind == "prod")
        return product(static_cast<int>(a), static_cast<int>(b));
    throw ParseError("unknown scheme '" + std::string(kind) + "'");
}

void QuadratureScheme::check_dimension(int d) const
{
    require_dim(d);
    if (!is_monte_carlo() && d > 3)
        throw DomainError("product rule is available for d <= 3 only, got d="
                          + std::to_string(d));
}

std::string QuadratureScheme::to_string() const
{
    if (const auto* mc = std::get_if<scheme::MonteCarlo>(&v_))
        return "mc:" + std::to_string(mc->n) + "," + std::to_string(mc->seed);
    const auto& p = std::get<scheme::Product>(v_);
    return "prod:" + std::to_string(p.n_rad) + "," + std::to_string(p.n_ang);
}

//---------------------------------------------------------------------------//

Rng make_stream(std::uint64_t seed, std::uint64_t stream)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32), 0x616e6e75u};
    return Rng(seq);
}

AnnulusSampler::AnnulusSampler(int d, double r, double e, Norm norm)
    : d_(d), r_(r), e_(e), norm_(norm)
{
    check_geometry(d, r, e);
    shell_fraction_ = e == r ? 1.0 : -std::expm1(d * std::log1p(-e / r));
}

void AnnulusSampler::operator()(Rng& rng, std::span<double> out) const
{
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    // Offset w in [0,1] below the outer radius; inverse of the radial CDF
    // (r^d - (r - e w)^d) / (r^d - (r - e)^d).
    double u = unif(rng);
    double w = -(r_ / e_) * std::expm1(std::log1p(-u * shell_fraction_) / d_);
    double rho = r_ - e_ * std::clamp(w, 0.0, 1.0);
    if (norm_ == Norm::euclidean)
    {
        std::normal_distribution<double> normal;
        double s = 0;
        do
        {
            s = 0;
            for (auto& v : out)
            {
                v = normal(rng);
                s += v * v;
            }
        } while (s == 0);
        double scale = rho / std::sqrt(s);
        for (auto& v : out)
            v *= scale;
        return;
    }
    // Max norm: level sets are cube surfaces, all 2d faces have equal area.
    std::uniform_int_distribution<int> face(0, 2 * d_ - 1);
    int f = face(rng);
    for (int k = 0; k < d_; ++k)
        out[k] = rho * (2 * unif(rng) - 1);
    out[f / 2] = (f % 2 == 0) ? rho : -rho;
}

SphereSampler::SphereSampler(int d, double rho) : d_(d), rho_(rho)
{
    require_dim(d);
    if (!(rho > 0))
        throw DomainError("sphere radius must be positive, got " + format_double(rho));
}

void SphereSampler::operator()(Rng& rng, std::span<double> out) const
{
    std::normal_distribution<double> normal;
    double s = 0;
    do
    {
        s = 0;
        for (auto& v : out)
        {
            v = normal(rng);
            s += v * v;
        }
    } while (s == 0);
    double scale = rho_ / std::sqrt(s);
    for (auto& v : out)
        v *= scale;
}

namespace {

template<class Sampler>
std::vector<Point> draw(int d, std::size_t n, std::uint64_t seed, const Sampler& sample)
{
    std::vector<Point> points(n, Point(d));
    std::size_t blocks = (n + kBlockSize - 1) / kBlockSize;
    parallel_for(blocks, [&](std::size_t b) {
        Rng rng = make_stream(seed, b);
        std::size_t end = std::min<std::size_t>(n, (b + 1) * kBlockSize);
        for (std::size_t i = b * kBlockSize; i < end; ++i)
            sample(rng, std::span<double>(points[i]));
    });
    return points;
}

}  // namespace

std::vector<Point> sample_annulus(int d, double r, double e, Norm norm, std::size_t n,
                                  std::uint64_t seed)
{
    if (n < 1)
        throw DomainError("sample count must be at least 1");
    return draw(d, n, seed, AnnulusSampler(d, r, e, norm));
}

std::vector<Point> sample_sphere(int d, double rho, std::size_t n, std::uint64_t seed)
{
    if (n < 1)
        throw DomainError("sample count must be at least 1");
    return draw(d, n, seed, SphereSampler(d, rho));
}

//---------------------------------------------------------------------------//

ComplexEstimate annulus_mean(int d, double r, double e, Norm norm, const ComplexIntegrand& g,
                             const QuadratureScheme& scheme)
{
    check_geometry(d, r, e);
    scheme.check_dimension(d);
    if (const auto* mc = std::get_if<scheme::MonteCarlo>(&scheme.variant()))
        return monte_carlo_mean(d, *mc, AnnulusSampler(d, r, e, norm), g);
    const auto& fine = std::get<scheme::Product>(scheme.variant());
    auto v = tensor_mean(d, r, e, norm, g, fine.n_rad, fine.n_ang);
    auto w = tensor_mean(d, r, e, norm, g, fine.n_rad / 2, fine.n_ang / 2);
    return {v, std::abs(v - w)};
}

ComplexEstimate sphere_mean(int d, double rho, const ComplexIntegrand& g,
                            const QuadratureScheme& scheme)
{
    require_dim(d);
    if (!(rho > 0))
        throw DomainError("sphere radius must be positive, got " + format_double(rho));
    scheme.check_dimension(d);
    if (const auto* mc = std::get_if<scheme::MonteCarlo>(&scheme.variant()))
        return monte_carlo_mean(d, *mc, SphereSampler(d, rho), g);
    const auto& fine = std::get<scheme::Product>(scheme.variant());
    auto v = tensor_sphere_mean(d, rho, g, fine.n_ang);
    auto w = tensor_sphere_mean(d, rho, g, std::max(2, fine.n_ang / 2));
    return {v, std::abs(v - w)};
}

Estimate annulus_average(const ScalarField& field, std::span<const double> x, double r, double e,
                         Norm norm, const QuadratureScheme& scheme)
{
    int d = field_dim(field, x);
    check_geometry(d, r, e);
    scheme.check_dimension(d);
    if (const auto* p = std::get_if<scheme::Product>(&scheme.variant());
        p && use_radial_rule(field, d, norm))
    {
        double v = radial_rule_annulus(field, x, r, e, *p);
        double w = radial_rule_annulus(field, x, r, e, {p->n_rad / 2, p->n_ang / 2});
        return {v, std::abs(v - w)};
    }
    Point center(x.begin(), x.end());
    auto g = [&field, center](std::span<const double> t) -> std::complex<double> {
        Point y(center.size());
        for (std::size_t k = 0; k < y.size(); ++k)
            y[k] = center[k] + t[k];
        return field(y);
    };
    auto est = annulus_mean(d, r, e, norm, g, scheme);
    return {est.value.real(), est.error};
}

Estimate sphere_average(const ScalarField& field, std::span<const double> x, double rho,
                        const QuadratureScheme& scheme)
{
    int d = field_dim(field, x);
    if (!(rho > 0))
        throw DomainError("sphere radius must be positive, got " + format_double(rho));
    scheme.check_dimension(d);
    if (const auto* p = std::get_if<scheme::Product>(&scheme.variant());
        p && use_radial_rule(field, d, Norm::euclidean))
    {
        double v = radial_rule_sphere(field, x, rho, *p);
        double w = radial_rule_sphere(field, x, rho, {p->n_rad, p->n_ang / 2});
        return {v, std::abs(v - w)};
    }
    Point center(x.begin(), x.end());
    auto g = [&field, center](std::span<const double> t) -> std::complex<double> {
        Point y(center.size());
        for (std::size_t k = 0; k < y.size(); ++k)
            y[k] = center[k] + t[k];
        return field(y);
    };
    auto est = sphere_mean(d, rho, g, scheme);
    return {est.value.real(), est.error};
}

}  // namespace annuli
