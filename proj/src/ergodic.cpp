#include "annuli/ergodic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include <Eigen/Dense>

#include "annuli/format.hpp"
#include "annuli/fourier.hpp"
#include "annuli/parallel.hpp"

namespace annuli {
namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;
constexpr double kMinDet = 1e-9;

double wrap(double x)
{
    double y = x - std::floor(x);
    return y >= 1.0 ? 0.0 : y;
}

double euclidean(std::span<const double> v)
{
    double s = 0;
    for (double x : v)
        s += x * x;
    return std::sqrt(s);
}

std::vector<std::vector<std::string>> read_csv_lines(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open '" + path + "'");
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line))
    {
        auto body = trim(line);
        if (body.empty() || body.front() == '#')
            continue;
        std::vector<std::string> cells;
        for (auto cell : split(body, ','))
            cells.emplace_back(trim(cell));
        rows.push_back(std::move(cells));
    }
    return rows;
}

}  // namespace

TorusSystem::TorusSystem(int d, std::vector<double> matrix) : d_(d), a_(std::move(matrix))
{
    require_dim(d);
    if (a_.size() != static_cast<std::size_t>(d) * d)
        throw DomainError("flow matrix must have " + std::to_string(d * d) + " entries");
    for (double v : a_)
        if (!std::isfinite(v))
            throw DomainError("flow matrix entries must be finite");
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
        a_.data(), d, d);
    det_ = m.determinant();
    if (!(std::abs(det_) >= kMinDet))
        throw DomainError("flow matrix is singular (|det| = " + format_double(std::abs(det_)) + ")");
}

TorusSystem TorusSystem::identity(int d)
{
    require_dim(d);
    std::vector<double> a(static_cast<std::size_t>(d) * d, 0.0);
    for (int i = 0; i < d; ++i)
        a[i * d + i] = 1;
    return TorusSystem(d, std::move(a));
}

Point TorusSystem::flow(std::span<const double> omega, std::span<const double> t) const
{
    if (omega.size() != static_cast<std::size_t>(d_) || t.size() != static_cast<std::size_t>(d_))
        throw DomainError("torus point and time must have dimension " + std::to_string(d_));
    Point out(d_);
    for (int i = 0; i < d_; ++i)
    {
        double s = omega[i];
        for (int j = 0; j < d_; ++j)
            s += a_[i * d_ + j] * t[j];
        out[i] = wrap(s);
    }
    return out;
}

std::vector<double> TorusSystem::dual_frequency(std::span<const int> k) const
{
    if (k.size() != static_cast<std::size_t>(d_))
        throw DomainError("frequency must have dimension " + std::to_string(d_));
    std::vector<double> out(d_, 0.0);
    for (int j = 0; j < d_; ++j)
        for (int i = 0; i < d_; ++i)
            out[j] += a_[i * d_ + j] * k[i];
    return out;
}

std::vector<double> read_matrix_csv(const std::string& path, int d)
{
    require_dim(d);
    auto rows = read_csv_lines(path);
    if (rows.size() != static_cast<std::size_t>(d))
        throw ParseError("matrix file '" + path + "' must have " + std::to_string(d) + " rows");
    std::vector<double> a;
    for (const auto& row : rows)
    {
        if (row.size() != static_cast<std::size_t>(d))
            throw ParseError("matrix file '" + path + "' must have " + std::to_string(d)
                             + " columns");
        for (const auto& cell : row)
            a.push_back(parse_double(cell));
    }
    return a;
}

//---------------------------------------------------------------------------//

TrigPoly::TrigPoly(int d) : d_(d)
{
    require_dim(d);
}

TrigPoly TrigPoly::constant(int d, std::complex<double> c)
{
    TrigPoly p(d);
    p.add(std::vector<int>(d, 0), c);
    return p;
}

TrigPoly TrigPoly::wave(std::vector<int> k, std::complex<double> c)
{
    TrigPoly p(static_cast<int>(k.size()));
    p.add(std::move(k), c);
    return p;
}

TrigPoly TrigPoly::read_csv(const std::string& path, int d)
{
    auto rows = read_csv_lines(path);
    if (rows.empty())
        throw ParseError("observable file '" + path + "' is empty");
    const auto& header = rows.front();
    if (header.size() != static_cast<std::size_t>(d) + 2 || header[d] != "re" || header[d + 1] != "im")
        throw ParseError("observable file '" + path + "' needs header k1,...,k"
                         + std::to_string(d) + ",re,im");
    TrigPoly p(d);
    for (std::size_t r = 1; r < rows.size(); ++r)
    {
        const auto& row = rows[r];
        if (row.size() != header.size())
            throw ParseError("observable file '" + path + "': row " + std::to_string(r)
                             + " has the wrong number of columns");
        std::vector<int> k(d);
        for (int i = 0; i < d; ++i)
            k[i] = static_cast<int>(parse_integer(row[i]));
        p.add(std::move(k), {parse_double(row[d]), parse_double(row[d + 1])});
    }
    return p;
}

TrigPoly& TrigPoly::add(std::vector<int> k, std::complex<double> c)
{
    if (k.size() != static_cast<std::size_t>(d_))
        throw DomainError("frequency must have dimension " + std::to_string(d_));
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
        throw DomainError("coefficients must be finite");
    c_[std::move(k)] += c;
    return *this;
}

std::complex<double> TrigPoly::operator()(std::span<const double> omega) const
{
    if (omega.size() != static_cast<std::size_t>(d_))
        throw DomainError("torus point must have dimension " + std::to_string(d_));
    std::complex<double> sum;
    for (const auto& [k, c] : c_)
    {
        double phase = 0;
        for (int i = 0; i < d_; ++i)
            phase += k[i] * omega[i];
        // reduce before scaling by 2 pi to keep the argument small
        phase -= std::floor(phase);
        sum += c * std::polar(1.0, kTwoPi * phase);
    }
    return sum;
}

std::complex<double> TrigPoly::mean() const
{
    auto it = c_.find(std::vector<int>(d_, 0));
    return it == c_.end() ? std::complex<double>{} : it->second;
}

bool TrigPoly::is_real() const
{
    for (const auto& [k, c] : c_)
    {
        std::vector<int> neg(k);
        for (auto& v : neg)
            v = -v;
        auto it = c_.find(neg);
        std::complex<double> partner = it == c_.end() ? std::complex<double>{} : it->second;
        if (std::abs(partner - std::conj(c)) > 1e-15 * std::max(1.0, std::abs(c)))
            return false;
    }
    return true;
}

//---------------------------------------------------------------------------//

ComplexEstimate flow_average(const TorusSystem& sys, const TrigPoly& phi,
                             std::span<const double> omega, double r,
                             const ThicknessFunction& fn, const QuadratureScheme& scheme)
{
    int d = sys.dim();
    if (phi.dim() != d || omega.size() != static_cast<std::size_t>(d))
        throw DomainError("system, observable and torus point dimensions differ");
    double e = fn(r).e;
    Point w(omega.begin(), omega.end());
    auto g = [&sys, &phi, w](std::span<const double> t) { return phi(sys.flow(w, t)); };
    return annulus_mean(d, r, e, Norm::euclidean, g, scheme);
}

ComplexEstimate spectral_average(const TorusSystem& sys, const TrigPoly& phi,
                                 std::span<const double> omega, double r,
                                 const ThicknessFunction& fn)
{
    int d = sys.dim();
    if (phi.dim() != d || omega.size() != static_cast<std::size_t>(d))
        throw DomainError("system, observable and torus point dimensions differ");
    double e = fn(r).e;
    ComplexEstimate out;
    for (const auto& [k, c] : phi.coefficients())
    {
        auto freq = sys.dual_frequency(k);
        double s = d == 1 ? freq[0] : euclidean(freq);
        auto kernel = annulus_kernel(d, r, e, s);
        double phase = 0;
        for (int i = 0; i < d; ++i)
            phase += k[i] * omega[i];
        phase -= std::floor(phase);
        out.value += c * std::polar(1.0, kTwoPi * phase) * kernel.value;
        out.error += std::abs(c) * kernel.error;
    }
    return out;
}

double mean_l2_error(const TorusSystem& sys, const TrigPoly& phi, double r,
                     const ThicknessFunction& fn)
{
    int d = sys.dim();
    if (phi.dim() != d)
        throw DomainError("system and observable dimensions differ");
    double e = fn(r).e;
    double sum = 0;
    for (const auto& [k, c] : phi.coefficients())
    {
        bool zero = std::all_of(k.begin(), k.end(), [](int v) { return v == 0; });
        if (zero)
            continue;
        auto freq = sys.dual_frequency(k);
        double s = d == 1 ? freq[0] : euclidean(freq);
        sum += std::norm(c) * std::pow(annulus_kernel(d, r, e, s).value, 2);
    }
    return std::sqrt(sum);
}

Estimate preimage_measure(const TorusSystem& sys, std::span<const double> lo,
                          std::span<const double> hi, std::span<const double> t, std::uint64_t n,
                          std::uint64_t seed)
{
    int d = sys.dim();
    if (lo.size() != static_cast<std::size_t>(d) || hi.size() != static_cast<std::size_t>(d))
        throw DomainError("box corners must have dimension " + std::to_string(d));
    for (int i = 0; i < d; ++i)
        if (!(lo[i] >= 0) || !(hi[i] <= 1) || !(hi[i] > lo[i]))
            throw DomainError("box must satisfy 0 <= lo < hi <= 1");
    if (n < 1)
        throw DomainError("sample count must be at least 1");
    constexpr std::uint64_t block = 4096;
    std::uint64_t blocks = (n + block - 1) / block;
    std::vector<std::uint64_t> hits(blocks, 0);
    Point time(t.begin(), t.end());
    parallel_for(blocks, [&](std::size_t b) {
        Rng rng = make_stream(seed, b);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        std::uint64_t end = std::min(n, (b + 1) * block);
        Point w(d);
        for (std::uint64_t i = b * block; i < end; ++i)
        {
            for (auto& v : w)
                v = unif(rng);
            auto y = sys.flow(w, time);
            bool in = true;
            for (int k = 0; k < d && in; ++k)
                in = y[k] >= lo[k] && y[k] < hi[k];
            hits[b] += in;
        }
    });
    std::uint64_t total = 0;
    for (auto h : hits)
        total += h;
    double p = static_cast<double>(total) / n;
    return {p, std::sqrt(p * (1 - p) / n)};
}

}  // namespace annuli
