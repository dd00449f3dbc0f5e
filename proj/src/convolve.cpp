#include "freeconv/convolve.hpp"

#include <algorithm>
#include <cmath>

#include "freeconv/errors.hpp"
#include "freeconv/moments.hpp"

namespace freeconv::convolve {

namespace {

constexpr int kEdgeProbes = 200;
constexpr double kEdgeProbeLo = 1e-12;
constexpr double kEdgeProbeHi = 10.0;

void require_order(const MomentSequence& m, int order, const char* what)
{
    if (order < 1 || order > kMaxOrder)
    {
        throw ArgumentError(std::string(what) + ": order must lie in 1.." + std::to_string(kMaxOrder));
    }
    if (m.order() < order)
    {
        throw ArgumentError(std::string(what) + ": needs " + std::to_string(order) + " moments, got " +
                            std::to_string(m.order()));
    }
}

CumulantSequence cumulants(const MomentSequence& m, int order)
{
    return moments::cumulants_from_moments_series(m, order);
}

MomentSequence moments_of(const std::vector<double>& k)
{
    return moments::moments_from_cumulants_series(CumulantSequence(k), static_cast<int>(k.size()));
}

// Moments after scaling every cumulant k_n by f(n).
MomentSequence transform_cumulants(const MomentSequence& a, int order, const std::function<double(int)>& f)
{
    const auto k = cumulants(a, order);
    std::vector<double> out(static_cast<std::size_t>(order));
    for (int n = 1; n <= order; ++n)
    {
        out[static_cast<std::size_t>(n - 1)] = f(n) * k[n];
    }
    return moments_of(out);
}

std::vector<double> constant_moments(double p, int order)
{
    return std::vector<double>(static_cast<std::size_t>(order), p);
}

}  // namespace

ConvolutionResult make_result(MomentSequence m, std::vector<std::string> provenance)
{
    ConvolutionResult r;
    r.cumulants = cumulants(m, m.order());
    const auto back = moments_of(r.cumulants.values());
    for (int k = 1; k <= m.order(); ++k)
    {
        r.roundtrip_residual = std::max(r.roundtrip_residual, std::abs(back[k] - m[k]) / std::max(1.0, std::abs(m[k])));
    }
    r.moments = std::move(m);
    r.provenance = std::move(provenance);
    return r;
}

ConvolutionResult free_add(const MomentSequence& a, const MomentSequence& b, int order)
{
    require_order(a, order, "free_add");
    require_order(b, order, "free_add");
    const auto ka = cumulants(a, order);
    const auto kb = cumulants(b, order);
    std::vector<double> k(static_cast<std::size_t>(order));
    for (int n = 1; n <= order; ++n)
    {
        k[static_cast<std::size_t>(n - 1)] = ka[n] + kb[n];
    }
    return make_result(moments_of(k), {"free_add"});
}

ConvolutionResult free_mul(const MomentSequence& a, const MomentSequence& b, int order)
{
    require_order(a, order, "free_mul");
    require_order(b, order, "free_mul");
    const auto s = series::moments_to_S(a.truncated(order)) * series::moments_to_S(b.truncated(order));
    return make_result(series::S_to_moments(s), {"free_mul"});
}

ConvolutionResult compress(const MomentSequence& a, double t, int order)
{
    if (!(t > 0.0 && t <= 1.0))
    {
        throw ArgumentError("compress needs t in (0, 1]");
    }
    require_order(a, order, "compress");
    if (a[1] != 0.0)
    {
        auto r = free_mul(a, MomentSequence(constant_moments(t, order)), order);
        r.provenance = {"compress", "S-route"};
        return r;
    }
    const auto rescaled = compress_rescaled(a, t, order).moments;
    std::vector<double> m(static_cast<std::size_t>(order));
    for (int k = 1; k <= order; ++k)
    {
        m[static_cast<std::size_t>(k - 1)] = t * rescaled[k];
    }
    return make_result(MomentSequence(std::move(m)), {"compress", "R-route"});
}

ConvolutionResult compress_rescaled(const MomentSequence& a, double t, int order)
{
    if (!(t > 0.0 && t <= 1.0))
    {
        throw ArgumentError("compress_rescaled needs t in (0, 1]");
    }
    require_order(a, order, "compress_rescaled");
    return make_result(transform_cumulants(a, order, [t](int n) { return std::pow(t, n - 1); }),
                       {"compress_rescaled"});
}

ConvolutionResult semigroup_mu_t(const MomentSequence& a, double t, int order)
{
    if (!(t >= 0.0))
    {
        throw ArgumentError("semigroup_mu_t needs t >= 0");
    }
    require_order(a, order, "semigroup_mu_t");
    return make_result(transform_cumulants(a, order, [t](int) { return t; }), {"semigroup_mu_t"});
}

Complex phi_eval(const PhiRepresentation& rep, Complex z)
{
    Complex v = rep.alpha;
    for (const auto& [s, w] : rep.sigma)
    {
        if (w < 0.0)
        {
            throw ArgumentError("phi_eval: negative weight in sigma");
        }
        if (z == Complex(s))
        {
            throw ArgumentError("phi_eval: z lies on an atom of sigma");
        }
        v += w * (1.0 + s * z) / (z - s);
    }
    return v;
}

CumulantSequence clt_scaled_cumulants(const MomentSequence& a, int n, int order)
{
    require_order(a, std::max(order, 2), "clt_scaled_cumulants");
    if (std::abs(a[1]) > 1e-12 || std::abs(a[2] - 1.0) > 1e-12)
    {
        throw ArgumentError("clt_scaled_cumulants needs mean 0 and variance 1");
    }
    if (n < 1)
    {
        throw ArgumentError("clt_scaled_cumulants needs n >= 1");
    }
    const auto k = cumulants(a, order);
    std::vector<double> out(static_cast<std::size_t>(order));
    for (int j = 1; j <= order; ++j)
    {
        out[static_cast<std::size_t>(j - 1)] = j == 2 ? k[2] : std::pow(static_cast<double>(n), 1.0 - j / 2.0) * k[j];
    }
    return CumulantSequence(std::move(out));
}

ConvolutionResult free_poisson_limit(double lambda, long long n, int order)
{
    if (!(lambda > 0.0) || n < 1)
    {
        throw ArgumentError("free_poisson_limit needs lambda > 0 and n >= 1");
    }
    const double p = lambda / static_cast<double>(n);
    if (p >= 1.0)
    {
        throw ArgumentError("free_poisson_limit needs lambda / n < 1");
    }
    auto r = semigroup_mu_t(MomentSequence(constant_moments(p, order)), static_cast<double>(n), order);
    r.provenance = {"free_poisson_limit", "bernoulli:p=" + std::to_string(p), "n=" + std::to_string(n)};
    return r;
}

PsiLaw psi_law_marchenko_pastur()
{
    PsiLaw law;
    law.name = "marchenko-pastur:lambda=1";
    law.variance = 1.0;
    law.psi_inverse = [](double u) { return u / ((1.0 + u) * (1.0 + u)); };
    law.dlog_psi_inverse = [](double u) { return 1.0 / u - 2.0 / (1.0 + u); };
    // psi(z) = (1 - 2z - sqrt(1 - 4z)) / (2z), the Catalan generating function minus 1.
    law.psi = [](double z) { return z == 0.0 ? 0.0 : (1.0 - 2.0 * z - std::sqrt(1.0 - 4.0 * z)) / (2.0 * z); };
    return law;
}

PsiLaw psi_law_bernoulli(double p)
{
    if (!(p > 0.0 && p < 1.0))
    {
        throw ArgumentError("psi_law_bernoulli needs p in (0, 1)");
    }
    PsiLaw law;
    law.name = "bernoulli:p=" + std::to_string(p) + ",scale=" + std::to_string(1.0 / p);
    law.variance = 1.0 / p - 1.0;
    law.psi_inverse = [p](double u) { return u * p / (p + u); };
    law.dlog_psi_inverse = [p](double u) { return p / (u * (p + u)); };
    law.psi = [p](double z) { return p * z / (p - z); };
    return law;
}

SupportEdge product_support(const PsiLaw& law, double n)
{
    if (!(n >= 1.0))
    {
        throw ArgumentError("product_support needs n >= 1");
    }
    const double target = 1.0 - 1.0 / n;
    const auto h = [&](double u) { return u * (1.0 + u) * law.dlog_psi_inverse(u) - target; };
    const double step = std::log(kEdgeProbeHi / kEdgeProbeLo) / (kEdgeProbes - 1);
    double lo = kEdgeProbeLo;
    double h_lo = h(lo);
    double hi = 0.0;
    for (int i = 1; i < kEdgeProbes; ++i)
    {
        const double u = kEdgeProbeLo * std::exp(step * i);
        const double hu = h(u);
        if ((h_lo > 0.0) != (hu > 0.0))
        {
            hi = u;
            break;
        }
        lo = u;
        h_lo = hu;
    }
    if (hi == 0.0)
    {
        throw NumericalError("product_support: no sign change of the critical-point equation on (1e-12, 10]");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it)
    {
        const double mid = 0.5 * (lo + hi);
        if ((h(mid) > 0.0) == (h_lo > 0.0))
        {
            lo = mid;
        }
        else
        {
            hi = mid;
        }
    }
    const double u = 0.5 * (lo + hi);
    const double log_z = (n - 1.0) * std::log1p(1.0 / u) + n * std::log(law.psi_inverse(u));
    const double edge = std::exp(-log_z);
    return {u, edge, edge / n};
}

}  // namespace freeconv::convolve
