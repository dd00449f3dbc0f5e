#pragma once

// Closed-form laws: densities, atoms, Cauchy transforms, moments, R- and
// S-transforms, plus Stieltjes inversion, dilation/translation, and CDFs by
// quadrature.

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "freeconv/series.hpp"

namespace freeconv::catalog {

using Complex = std::complex<double>;
using CauchyTransformFn = std::function<Complex(Complex)>;

struct Atom
{
    double location;
    double mass;
};

/// Interval carrying the absolutely continuous part; may be unbounded.
struct Support
{
    double lo;
    double hi;
    bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
};

/// One law: atoms plus an optional density, with closed-form transforms.
/// Evaluators that do not exist for the law are empty.
struct DistributionSpec
{
    std::string name;
    std::map<std::string, double> params;
    std::vector<Atom> atoms;
    std::function<double(double)> density;  // empty when purely atomic
    Support support{0.0, 0.0};
    /// G on the upper half-plane; use cauchy_transform() for any z.
    CauchyTransformFn cauchy_upper;
    /// Closed-form m_k; empty for heavy-tailed laws.
    std::function<double(int)> moment;
    /// R-coefficients c_0..c_order (c_(n-1) = k_n); empty for heavy-tailed laws.
    std::function<series::TruncatedSeries(int)> r_coefficients;
    /// R(z) = K(z) - 1/z near 0.
    std::function<Complex(Complex)> r_transform;
    /// S(z) when the mean is nonzero.
    std::function<Complex(Complex)> s_transform;
    /// z S(z)^2 for symmetric laws, where S itself is two-valued.
    std::function<Complex(Complex)> s_square;
    bool heavy_tailed = false;

    bool has_density() const { return static_cast<bool>(density); }
    double atom_mass() const;
    /// Support of the whole law (atoms included).
    Support hull() const;
};

/// Names: semicircle, marchenko-pastur (lambda), bernoulli (p), bernoulli2,
/// arcsine, cauchy, delta (x). Optional generic params "scale" and "shift"
/// are applied last, in that order.
DistributionSpec catalog_get(const std::string& name, const std::map<std::string, double>& params = {});

/// Parse "[spec:]name[:key=value,key=value]" and build the law.
DistributionSpec parse_spec(const std::string& text);

std::vector<std::string> catalog_names();

/// G(z) for any z off the support: the upper-half-plane closed form, reflected
/// for Im z < 0, and approached from above for real z.
Complex cauchy_transform(const DistributionSpec& spec, Complex z);

/// -(1/pi) Im G(x + i eps) at each grid point; eps in [1e-6, 1e-1].
std::vector<double> stieltjes_invert(const CauchyTransformFn& g, const std::vector<double>& grid, double eps);

/// Law of aX; a != 0.
DistributionSpec scale(const DistributionSpec& spec, double a);
/// Law of X + b.
DistributionSpec translate(const DistributionSpec& spec, double b);

/// Closed-form m_1..m_upto; throws ArgumentError for heavy-tailed laws.
MomentSequence moment_table(const DistributionSpec& spec, int upto);

/// Integral of f over [lo, hi] by adaptive Gauss-Kronrod after the substitution
/// x = lo + u^2 near lo and x = hi - u^2 near hi, which removes inverse
/// square-root endpoint singularities. Infinite limits map through x = tan(t).
double integrate(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-10);

/// Sum of atom masses plus the integral of the density.
double total_mass(const DistributionSpec& spec);
/// Integral of x^k against the law.
double quadrature_moment(const DistributionSpec& spec, int k);
/// mu((-inf, x]).
double cdf(const DistributionSpec& spec, double x);
/// Smallest x with cdf(x) >= p, by bisection; p in (0, 1).
double quantile(const DistributionSpec& spec, double p);
/// Quantiles at (i - 1/2)/n, i = 1..n: a deterministic n-point spectrum.
std::vector<double> quantile_spectrum(const DistributionSpec& spec, int n);

/// Kolmogorov distance between the empirical law of the samples and spec.
double ks_distance(const DistributionSpec& spec, std::vector<double> samples);

}  // namespace freeconv::catalog
