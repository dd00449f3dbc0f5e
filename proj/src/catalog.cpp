#include "freeconv/catalog.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <numbers>
#include <sstream>

#include "freeconv/errors.hpp"
#include "freeconv/ncpart.hpp"

namespace freeconv::catalog {

namespace {

using series::TruncatedSeries;

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// sqrt(z - a) sqrt(z - b) with principal roots: analytic off [a, b] and ~ z at infinity.
Complex cut_root(Complex z, double a, double b)
{
    return std::sqrt(z - a) * std::sqrt(z - b);
}

double param(const std::map<std::string, double>& params, const std::string& key, double fallback)
{
    const auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

void require_known_params(const std::string& name, const std::map<std::string, double>& params,
                          std::initializer_list<const char*> allowed)
{
    for (const auto& [k, v] : params)
    {
        if (k == "scale" || k == "shift")
        {
            continue;
        }
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; }))
        {
            throw ArgumentError("unknown parameter '" + k + "' for law '" + name + "'");
        }
    }
}

// (sqrt(1 + 4 z^2) - 1) / z as R-coefficients c_0..c_order.
TruncatedSeries root_one_plus_four_z2(int order)
{
    std::vector<double> c(static_cast<std::size_t>(order + 2), 0.0);
    c[0] = 1.0;
    if (order + 1 >= 2)
    {
        c[2] = 4.0;
    }
    const auto s = series::sqrt(TruncatedSeries(c)) - TruncatedSeries::constant(1.0, order + 1);
    return series::divide_by_power(s, 1);
}

double binomial(int n, int k)
{
    double r = 1.0;
    for (int i = 1; i <= k; ++i)
    {
        r = r * (n - k + i) / i;
    }
    return r;
}

DistributionSpec semicircle()
{
    DistributionSpec s;
    s.name = "semicircle";
    s.density = [](double x) { return std::abs(x) < 2.0 ? std::sqrt(4.0 - x * x) / (2.0 * kPi) : 0.0; };
    s.support = {-2.0, 2.0};
    s.cauchy_upper = [](Complex z) { return (z - cut_root(z, -2.0, 2.0)) / 2.0; };
    s.moment = [](int k) { return k % 2 ? 0.0 : static_cast<double>(nc::catalan(k / 2)); };
    s.r_coefficients = [](int order) {
        std::vector<double> c(static_cast<std::size_t>(order + 1), 0.0);
        if (order >= 1)
        {
            c[1] = 1.0;
        }
        return TruncatedSeries(c);
    };
    s.r_transform = [](Complex z) { return z; };
    s.s_square = [](Complex) { return Complex(1.0); };
    return s;
}

DistributionSpec marchenko_pastur(double lambda)
{
    if (!(lambda > 0.0))
    {
        throw ArgumentError("marchenko-pastur needs lambda > 0");
    }
    DistributionSpec s;
    s.name = "marchenko-pastur";
    s.params["lambda"] = lambda;
    const double a = std::pow(1.0 - std::sqrt(lambda), 2);
    const double b = std::pow(1.0 + std::sqrt(lambda), 2);
    if (lambda < 1.0)
    {
        s.atoms.push_back({0.0, 1.0 - lambda});
    }
    s.density = [=](double x) {
        if (x <= a || x >= b || x <= 0.0)
        {
            return 0.0;
        }
        return std::sqrt(std::max(0.0, (x - a) * (b - x))) / (2.0 * kPi * x);
    };
    s.support = {a, b};
    s.cauchy_upper = [=](Complex z) { return (1.0 - lambda + z - cut_root(z, a, b)) / (2.0 * z); };
    s.moment = [=](int n) {
        // Narayana polynomial: sum_k (1/n) C(n,k) C(n,k-1) lambda^k.
        double m = 0.0;
        for (int k = 1; k <= n; ++k)
        {
            m += binomial(n, k) * binomial(n, k - 1) / n * std::pow(lambda, k);
        }
        return m;
    };
    s.r_coefficients = [=](int order) { return TruncatedSeries(std::vector<double>(static_cast<std::size_t>(order + 1), lambda)); };
    s.r_transform = [=](Complex z) { return lambda / (1.0 - z); };
    s.s_transform = [=](Complex z) { return 1.0 / (lambda + z); };
    return s;
}

DistributionSpec bernoulli(double p)
{
    if (!(p > 0.0 && p < 1.0))
    {
        throw ArgumentError("bernoulli needs p in (0, 1)");
    }
    const double q = 1.0 - p;
    DistributionSpec s;
    s.name = "bernoulli";
    s.params["p"] = p;
    s.atoms = {{0.0, q}, {1.0, p}};
    s.cauchy_upper = [=](Complex z) { return (z - q) / ((z - 1.0) * z); };
    s.moment = [=](int) { return p; };
    s.r_coefficients = [=](int order) {
        // R(z) = (z - 1 + sqrt((1+z)^2 - 4qz)) / (2z).
        const auto root = series::sqrt(TruncatedSeries({1.0, 2.0 - 4.0 * q, 1.0}).truncated(order + 1));
        const auto num = root + TruncatedSeries({-1.0, 1.0}).truncated(order + 1);
        return 0.5 * series::divide_by_power(num, 1);
    };
    s.r_transform = [=](Complex z) {
        if (z == 0.0)
        {
            return Complex(p);
        }
        return (z - 1.0 + std::sqrt((1.0 + z) * (1.0 + z) - 4.0 * q * z)) / (2.0 * z);
    };
    s.s_transform = [=](Complex z) { return (1.0 + z) / (p + z); };
    return s;
}

DistributionSpec bernoulli2()
{
    DistributionSpec s;
    s.name = "bernoulli2";
    s.atoms = {{-1.0, 0.5}, {1.0, 0.5}};
    s.cauchy_upper = [](Complex z) { return z / (z * z - 1.0); };
    s.moment = [](int k) { return k % 2 ? 0.0 : 1.0; };
    s.r_coefficients = [](int order) { return 0.5 * root_one_plus_four_z2(order); };
    s.r_transform = [](Complex z) {
        return z == 0.0 ? Complex(0.0) : (std::sqrt(1.0 + 4.0 * z * z) - 1.0) / (2.0 * z);
    };
    s.s_square = [](Complex z) { return 1.0 + z; };
    return s;
}

DistributionSpec arcsine()
{
    DistributionSpec s;
    s.name = "arcsine";
    s.density = [](double x) { return std::abs(x) < 2.0 ? 1.0 / (kPi * std::sqrt(4.0 - x * x)) : 0.0; };
    s.support = {-2.0, 2.0};
    s.cauchy_upper = [](Complex z) { return 1.0 / cut_root(z, -2.0, 2.0); };
    s.moment = [](int k) { return k % 2 ? 0.0 : binomial(k, k / 2); };
    s.r_coefficients = [](int order) { return root_one_plus_four_z2(order); };
    s.r_transform = [](Complex z) { return z == 0.0 ? Complex(0.0) : (std::sqrt(1.0 + 4.0 * z * z) - 1.0) / z; };
    s.s_square = [](Complex z) { return (2.0 + z) / 4.0; };
    return s;
}

DistributionSpec cauchy()
{
    DistributionSpec s;
    s.name = "cauchy";
    s.density = [](double x) { return 1.0 / (kPi * (1.0 + x * x)); };
    s.support = {-kInf, kInf};
    s.cauchy_upper = [](Complex z) { return 1.0 / (z + Complex(0.0, 1.0)); };
    s.r_transform = [](Complex) { return Complex(0.0, -1.0); };
    s.s_transform = [](Complex) { return Complex(0.0, 1.0); };
    s.heavy_tailed = true;
    return s;
}

DistributionSpec delta(double x)
{
    DistributionSpec s;
    s.name = "delta";
    s.params["x"] = x;
    s.atoms = {{x, 1.0}};
    s.cauchy_upper = [=](Complex z) { return 1.0 / (z - x); };
    s.moment = [=](int k) { return std::pow(x, k); };
    s.r_coefficients = [=](int order) {
        std::vector<double> c(static_cast<std::size_t>(order + 1), 0.0);
        c[0] = x;
        return TruncatedSeries(c);
    };
    s.r_transform = [=](Complex) { return Complex(x); };
    if (x != 0.0)
    {
        s.s_transform = [=](Complex) { return Complex(1.0 / x); };
    }
    return s;
}

double gk(const std::function<double(double)>& f, double a, double b, double tol)
{
    if (b <= a)
    {
        return 0.0;
    }
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 20, tol);
}

}  // namespace

double DistributionSpec::atom_mass() const
{
    double m = 0.0;
    for (const auto& a : atoms)
    {
        m += a.mass;
    }
    return m;
}

Support DistributionSpec::hull() const
{
    double lo = kInf;
    double hi = -kInf;
    if (has_density())
    {
        lo = support.lo;
        hi = support.hi;
    }
    for (const auto& a : atoms)
    {
        lo = std::min(lo, a.location);
        hi = std::max(hi, a.location);
    }
    return {lo, hi};
}

std::vector<std::string> catalog_names()
{
    return {"semicircle", "marchenko-pastur", "bernoulli", "bernoulli2", "arcsine", "cauchy", "delta"};
}

DistributionSpec catalog_get(const std::string& name, const std::map<std::string, double>& params)
{
    DistributionSpec s;
    if (name == "semicircle")
    {
        require_known_params(name, params, {});
        s = semicircle();
    }
    else if (name == "marchenko-pastur" || name == "mp" || name == "free-poisson")
    {
        require_known_params(name, params, {"lambda"});
        s = marchenko_pastur(param(params, "lambda", 1.0));
    }
    else if (name == "bernoulli" || name == "bernoulli1")
    {
        require_known_params(name, params, {"p"});
        s = bernoulli(param(params, "p", 0.5));
    }
    else if (name == "bernoulli2")
    {
        require_known_params(name, params, {});
        s = bernoulli2();
    }
    else if (name == "arcsine")
    {
        require_known_params(name, params, {});
        s = arcsine();
    }
    else if (name == "cauchy")
    {
        require_known_params(name, params, {});
        s = cauchy();
    }
    else if (name == "delta")
    {
        require_known_params(name, params, {"x"});
        s = delta(param(params, "x", 0.0));
    }
    else
    {
        throw ArgumentError("unknown law '" + name + "'");
    }
    if (const auto it = params.find("scale"); it != params.end())
    {
        s = scale(s, it->second);
    }
    if (const auto it = params.find("shift"); it != params.end())
    {
        s = translate(s, it->second);
    }
    return s;
}

DistributionSpec parse_spec(const std::string& text)
{
    std::string rest = text;
    if (rest.rfind("spec:", 0) == 0)
    {
        rest = rest.substr(5);
    }
    const auto colon = rest.find(':');
    const std::string name = rest.substr(0, colon);
    std::map<std::string, double> params;
    if (colon != std::string::npos)
    {
        std::stringstream ss(rest.substr(colon + 1));
        std::string item;
        while (std::getline(ss, item, ','))
        {
            const auto eq = item.find('=');
            if (eq == std::string::npos || eq == 0)
            {
                throw ArgumentError("law parameter '" + item + "' is not key=value");
            }
            const std::string key = item.substr(0, eq);
            const std::string value = item.substr(eq + 1);
            std::size_t used = 0;
            double v = 0.0;
            try
            {
                v = std::stod(value, &used);
            }
            catch (const std::exception&)
            {
                used = 0;
            }
            if (used == 0 || used != value.size())
            {
                throw ArgumentError("law parameter '" + key + "' has non-numeric value '" + value + "'");
            }
            params[key] = v;
        }
    }
    return catalog_get(name, params);
}

Complex cauchy_transform(const DistributionSpec& spec, Complex z)
{
    if (z.imag() > 0.0)
    {
        return spec.cauchy_upper(z);
    }
    if (z.imag() < 0.0)
    {
        return std::conj(spec.cauchy_upper(std::conj(z)));
    }
    return spec.cauchy_upper(Complex(z.real(), 1e-14 * std::max(1.0, std::abs(z.real()))));
}

std::vector<double> stieltjes_invert(const CauchyTransformFn& g, const std::vector<double>& grid, double eps)
{
    if (!(eps >= 1e-6 && eps <= 1e-1))
    {
        throw ArgumentError("stieltjes_invert needs eps in [1e-6, 1e-1]");
    }
    std::vector<double> out;
    out.reserve(grid.size());
    for (double x : grid)
    {
        out.push_back(-g(Complex(x, eps)).imag() / kPi);
    }
    return out;
}

DistributionSpec scale(const DistributionSpec& spec, double a)
{
    if (a == 0.0 || !std::isfinite(a))
    {
        throw ArgumentError("scale factor must be finite and nonzero");
    }
    DistributionSpec s = spec;
    s.params["scale"] = param(spec.params, "scale", 1.0) * a;
    for (auto& at : s.atoms)
    {
        at.location *= a;
    }
    if (spec.has_density())
    {
        const auto f = spec.density;
        s.density = [=](double x) { return f(x / a) / std::abs(a); };
        s.support = {std::min(a * spec.support.lo, a * spec.support.hi), std::max(a * spec.support.lo, a * spec.support.hi)};
    }
    s.cauchy_upper = [=](Complex z) { return cauchy_transform(spec, z / a) / a; };
    if (spec.moment)
    {
        const auto m = spec.moment;
        s.moment = [=](int k) { return std::pow(a, k) * m(k); };
    }
    if (spec.r_coefficients)
    {
        const auto r = spec.r_coefficients;
        s.r_coefficients = [=](int order) {
            auto c = r(order).coeffs();
            for (std::size_t k = 0; k < c.size(); ++k)
            {
                c[k] *= std::pow(a, static_cast<double>(k + 1));
            }
            return TruncatedSeries(c);
        };
    }
    if (spec.r_transform)
    {
        const auto r = spec.r_transform;
        s.r_transform = [=](Complex z) { return a * r(a * z); };
    }
    if (spec.s_transform)
    {
        const auto st = spec.s_transform;
        s.s_transform = [=](Complex z) { return st(z) / a; };
    }
    if (spec.s_square)
    {
        const auto t = spec.s_square;
        s.s_square = [=](Complex z) { return t(z) / (a * a); };
    }
    return s;
}

DistributionSpec translate(const DistributionSpec& spec, double b)
{
    if (!std::isfinite(b))
    {
        throw ArgumentError("shift must be finite");
    }
    DistributionSpec s = spec;
    s.params["shift"] = param(spec.params, "shift", 0.0) + b;
    for (auto& at : s.atoms)
    {
        at.location += b;
    }
    if (spec.has_density())
    {
        const auto f = spec.density;
        s.density = [=](double x) { return f(x - b); };
        s.support = {spec.support.lo + b, spec.support.hi + b};
    }
    s.cauchy_upper = [=](Complex z) { return spec.cauchy_upper(z - b); };
    if (spec.moment)
    {
        const auto m = spec.moment;
        s.moment = [=](int k) {
            double v = 0.0;
            for (int j = 0; j <= k; ++j)
            {
                v += binomial(k, j) * std::pow(b, k - j) * (j == 0 ? 1.0 : m(j));
            }
            return v;
        };
    }
    if (spec.r_coefficients)
    {
        const auto r = spec.r_coefficients;
        s.r_coefficients = [=](int order) {
            auto c = r(order).coeffs();
            c[0] += b;
            return TruncatedSeries(c);
        };
    }
    if (spec.r_transform)
    {
        const auto r = spec.r_transform;
        s.r_transform = [=](Complex z) { return r(z) + b; };
    }
    // No closed form survives translation for S.
    s.s_transform = nullptr;
    s.s_square = nullptr;
    return s;
}

MomentSequence moment_table(const DistributionSpec& spec, int upto)
{
    if (!spec.moment)
    {
        throw ArgumentError("moments undefined for law '" + spec.name + "' (heavy-tailed)");
    }
    std::vector<double> m;
    for (int k = 1; k <= upto; ++k)
    {
        m.push_back(spec.moment(k));
    }
    return MomentSequence(m);
}

double integrate(const std::function<double(double)>& f, double lo, double hi, double tol)
{
    if (hi < lo)
    {
        return -integrate(f, hi, lo, tol);
    }
    if (hi == lo)
    {
        return 0.0;
    }
    if (!std::isfinite(lo) || !std::isfinite(hi))
    {
        const auto g = [&](double t) {
            const double c = std::cos(t);
            return f(std::tan(t)) / (c * c);
        };
        return gk(g, std::atan(lo), std::atan(hi), tol);
    }
    const double mid = 0.5 * (lo + hi);
    const auto left = [&](double u) { return 2.0 * u * f(lo + u * u); };
    const auto right = [&](double u) { return 2.0 * u * f(hi - u * u); };
    return gk(left, 0.0, std::sqrt(mid - lo), tol) + gk(right, 0.0, std::sqrt(hi - mid), tol);
}

double total_mass(const DistributionSpec& spec)
{
    double m = spec.atom_mass();
    if (spec.has_density())
    {
        m += integrate(spec.density, spec.support.lo, spec.support.hi, 1e-12);
    }
    return m;
}

double quadrature_moment(const DistributionSpec& spec, int k)
{
    if (spec.heavy_tailed)
    {
        throw ArgumentError("moments undefined for law '" + spec.name + "' (heavy-tailed)");
    }
    double m = 0.0;
    for (const auto& a : spec.atoms)
    {
        m += a.mass * std::pow(a.location, k);
    }
    if (spec.has_density())
    {
        const auto f = spec.density;
        m += integrate([&](double x) { return std::pow(x, k) * f(x); }, spec.support.lo, spec.support.hi, 1e-12);
    }
    return m;
}

double cdf(const DistributionSpec& spec, double x)
{
    double c = 0.0;
    for (const auto& a : spec.atoms)
    {
        if (a.location <= x)
        {
            c += a.mass;
        }
    }
    if (spec.has_density() && x > spec.support.lo)
    {
        if (x >= spec.support.hi)
        {
            c += 1.0 - spec.atom_mass();
        }
        else
        {
            c += integrate(spec.density, spec.support.lo, x);
        }
    }
    return std::clamp(c, 0.0, 1.0);
}

double quantile(const DistributionSpec& spec, double p)
{
    if (!(p > 0.0 && p < 1.0))
    {
        throw ArgumentError("quantile needs p in (0, 1)");
    }
    auto [lo, hi] = spec.hull();
    if (!std::isfinite(lo) || !std::isfinite(hi))
    {
        lo = -1.0;
        hi = 1.0;
        while (cdf(spec, lo) > p)
        {
            lo *= 2.0;
        }
        while (cdf(spec, hi) < p)
        {
            hi *= 2.0;
        }
    }
    if (cdf(spec, lo) >= p)
    {
        return lo;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi)); ++it)
    {
        const double mid = 0.5 * (lo + hi);
        if (cdf(spec, mid) >= p)
        {
            hi = mid;
        }
        else
        {
            lo = mid;
        }
    }
    return hi;
}

std::vector<double> quantile_spectrum(const DistributionSpec& spec, int n)
{
    if (n < 1)
    {
        throw ArgumentError("quantile_spectrum needs n >= 1");
    }
    std::vector<double> out;
    for (int i = 1; i <= n; ++i)
    {
        out.push_back(quantile(spec, (i - 0.5) / n));
    }
    return out;
}

double ks_distance(const DistributionSpec& spec, std::vector<double> samples)
{
    if (samples.empty())
    {
        throw ArgumentError("ks_distance needs samples");
    }
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    // Walk the sorted sample, integrating the density between consecutive points.
    double prev_x = -kInf;
    double continuous = 0.0;
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size();)
    {
        const double x = samples[i];
        std::size_t j = i;
        while (j < samples.size() && samples[j] == x)
        {
            ++j;
        }
        if (spec.has_density())
        {
            const double a = std::max(prev_x, spec.support.lo);
            const double b = std::min(x, spec.support.hi);
            if (b > a)
            {
                continuous += integrate(spec.density, a, b);
            }
        }
        prev_x = x;
        double below = 0.0;
        double at = 0.0;
        for (const auto& atom : spec.atoms)
        {
            if (atom.location < x)
            {
                below += atom.mass;
            }
            else if (atom.location == x)
            {
                at += atom.mass;
            }
        }
        // Ties form one jump of the empirical CDF, from i/n to j/n.
        const double f_left = continuous + below;
        const double f_right = f_left + at;
        d = std::max({d, std::abs(f_right - static_cast<double>(j) / n), std::abs(f_left - static_cast<double>(i) / n)});
        i = j;
    }
    return d;
}

}  // namespace freeconv::catalog
