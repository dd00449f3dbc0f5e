#include "freeconv/brown.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "freeconv/errors.hpp"

namespace freeconv::brown {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSeriesTailCutoff = 1e-9;

ComplexMatrix gram(const ComplexMatrix& x)
{
    auto g = x.adjoint() * x;
    const int n = g.size();
    for (int i = 0; i < n; ++i)
    {
        g(i, i) = g(i, i).real();
        for (int j = i + 1; j < n; ++j)
        {
            const Complex avg = 0.5 * (g(i, j) + std::conj(g(j, i)));
            g(i, j) = avg;
            g(j, i) = std::conj(avg);
        }
    }
    return g;
}

// Three-point derivative on a nonuniform grid; exact for quadratics.
std::vector<double> differentiate(const std::vector<double>& x, const std::vector<double>& f)
{
    const std::size_t n = x.size();
    std::vector<double> d(n, 0.0);
    if (n < 2)
    {
        return d;
    }
    if (n == 2)
    {
        d[0] = d[1] = (f[1] - f[0]) / (x[1] - x[0]);
        return d;
    }
    for (std::size_t i = 1; i + 1 < n; ++i)
    {
        const double h1 = x[i] - x[i - 1];
        const double h2 = x[i + 1] - x[i];
        d[i] = -h2 / (h1 * (h1 + h2)) * f[i - 1] + (h2 - h1) / (h1 * h2) * f[i] + h1 / (h2 * (h1 + h2)) * f[i + 1];
    }
    {
        const double h1 = x[1] - x[0];
        const double h2 = x[2] - x[1];
        d[0] = -(2 * h1 + h2) / (h1 * (h1 + h2)) * f[0] + (h1 + h2) / (h1 * h2) * f[1] - h1 / (h2 * (h1 + h2)) * f[2];
    }
    {
        const double h1 = x[n - 2] - x[n - 3];
        const double h2 = x[n - 1] - x[n - 2];
        d[n - 1] = h2 / (h1 * (h1 + h2)) * f[n - 3] - (h1 + h2) / (h1 * h2) * f[n - 2] +
                   (2 * h2 + h1) / (h2 * (h1 + h2)) * f[n - 1];
    }
    return d;
}

std::vector<double> t_grid(double w, int grid_size)
{
    if (!(w >= 0.0 && w < 1.0))
    {
        throw ArgumentError("radial Brown measure needs an atom mass w in [0, 1)");
    }
    if (grid_size < 3)
    {
        throw ArgumentError("radial Brown measure needs at least 3 grid points");
    }
    std::vector<double> t(static_cast<std::size_t>(grid_size));
    for (int i = 0; i < grid_size; ++i)
    {
        t[static_cast<std::size_t>(i)] = w + (1.0 - w) * i / (grid_size - 1);
    }
    t.back() = 1.0;
    return t;
}

// Radii 1/sqrt(S(t - 1)) at the given t, merged into a strictly increasing table.
RadialMeasure assemble(const std::vector<double>& t, const std::vector<double>& s_values, double w, bool truncated)
{
    std::vector<double> radius(t.size());
    for (std::size_t i = 0; i < t.size(); ++i)
    {
        const double s = s_values[i];
        if (i == 0 && !truncated && !(s > 0.0 && std::isfinite(s)))
        {
            // Pole of S at the left end (roundoff may land on either side): the law reaches 0.
            radius[i] = 0.0;
            continue;
        }
        if (!(s > 0.0) || !std::isfinite(s))
        {
            throw ArgumentError("S not admissible: S(" + std::to_string(t[i] - 1.0) + ") = " + std::to_string(s));
        }
        radius[i] = 1.0 / std::sqrt(s);
        if (i > 0 && radius[i] < radius[i - 1])
        {
            if (radius[i] < radius[i - 1] * (1.0 - 1e-12))
            {
                throw ArgumentError("S not admissible: 1/sqrt(S(x - 1)) decreases at x = " + std::to_string(t[i]));
            }
            radius[i] = radius[i - 1];
        }
    }

    RadialMeasure m;
    m.atom_at_zero = w;
    m.truncated = truncated;
    if (!truncated && radius[0] > 0.0)
    {
        m.r.push_back(0.0);
        m.F.push_back(w);
    }
    std::size_t i = 0;
    while (i < t.size())
    {
        std::size_t j = i;
        while (j + 1 < t.size() && radius[j + 1] == radius[i])
        {
            ++j;
        }
        if (j > i)
        {
            m.jumps.push_back({radius[i], t[j] - t[i]});
        }
        if (!m.r.empty() && m.r.back() == radius[i])
        {
            m.F.back() = t[j];
        }
        else
        {
            m.r.push_back(radius[i]);
            m.F.push_back(t[j]);
        }
        i = j + 1;
    }
    m.rho = differentiate(m.r, m.F);
    return m;
}

}  // namespace

double log_fk_det(const ComplexMatrix& x)
{
    const int n = x.size();
    if (n < 1)
    {
        throw ArgumentError("fk_det needs a nonempty square matrix");
    }
    const auto ev = linalg::hermitian_eigenvalues(gram(x), 1e-14);
    const double top = std::max(ev.back(), std::numeric_limits<double>::min());
    double sum = 0.0;
    for (double e : ev)
    {
        // Below roundoff of the Gram matrix the eigenvalue is indistinguishable from 0.
        if (e <= 4.0 * n * std::numeric_limits<double>::epsilon() * top)
        {
            return -kInf;
        }
        sum += std::log(e);
    }
    return 0.5 * sum / n;
}

double fk_det(const ComplexMatrix& x)
{
    return std::exp(log_fk_det(x));
}

double fk_det_lu(const ComplexMatrix& x)
{
    return std::pow(std::abs(linalg::lu_determinant(x)), 1.0 / x.size());
}

double L_function(const ComplexMatrix& x, Complex lambda)
{
    auto shifted = x;
    for (int i = 0; i < x.size(); ++i)
    {
        shifted(i, i) -= lambda;
    }
    return log_fk_det(shifted);
}

double laplacian_mass(const ComplexMatrix& x, Complex center, double half, int cells)
{
    if (!(half > 0.0) || cells < 2)
    {
        throw ArgumentError("laplacian_mass needs half > 0 and cells >= 2");
    }
    const double h = 2.0 * half / cells;
    const int m = cells + 1;
    std::vector<double> l(static_cast<std::size_t>(m * m));
    for (int i = 0; i < m; ++i)
    {
        for (int j = 0; j < m; ++j)
        {
            const Complex z = center + Complex(-half + i * h, -half + j * h);
            const double v = L_function(x, z);
            if (!std::isfinite(v))
            {
                throw NumericalError("laplacian_mass: a lattice point sits on an eigenvalue");
            }
            l[static_cast<std::size_t>(i * m + j)] = v;
        }
    }
    const auto at = [&](int i, int j) { return l[static_cast<std::size_t>(i * m + j)]; };
    double sum = 0.0;
    for (int i = 1; i < m - 1; ++i)
    {
        for (int j = 1; j < m - 1; ++j)
        {
            sum += at(i + 1, j) + at(i - 1, j) + at(i, j + 1) + at(i, j - 1) - 4.0 * at(i, j);
        }
    }
    return sum / (2.0 * std::numbers::pi);
}

RadialMeasure hl_radial(const SEvaluator& s, double w, int grid_size)
{
    const auto t = t_grid(w, grid_size);
    std::vector<double> sv(t.size());
    for (std::size_t i = 0; i < t.size(); ++i)
    {
        sv[i] = s(t[i] - 1.0);
    }
    return assemble(t, sv, w, false);
}

RadialMeasure hl_from_moments(const MomentSequence& sigma_moments, double w, int order, int grid_size)
{
    if (order < 2 || order > kMaxOrder || sigma_moments.order() < order)
    {
        throw ArgumentError("hl_from_moments needs 2 <= order <= " + std::to_string(kMaxOrder) +
                            " and that many moments");
    }
    if (!(sigma_moments[1] > 0.0))
    {
        throw ArgumentError("hl_from_moments needs m_1 > 0");
    }
    const auto s = series::moments_to_S(sigma_moments.truncated(order));
    const int k = s.order();
    const auto all = t_grid(w, grid_size);
    std::vector<double> t, sv;
    for (double ti : all)
    {
        const double z = ti - 1.0;
        if (std::abs(s[k] * std::pow(z, k)) < kSeriesTailCutoff)
        {
            t.push_back(ti);
            sv.push_back(s.evaluate(z));
        }
    }
    return assemble(t, sv, w, t.size() < all.size());
}

SEvaluator s_evaluator(const catalog::DistributionSpec& sigma)
{
    if (!sigma.s_transform)
    {
        throw ArgumentError("law '" + sigma.name + "' has no closed-form S-transform");
    }
    const auto st = sigma.s_transform;
    const std::string name = sigma.name;
    return [st, name](double x) {
        const Complex v = st(Complex(x));
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        {
            return kInf;
        }
        if (std::abs(v.imag()) > 1e-12 * std::max(1.0, std::abs(v.real())))
        {
            throw ArgumentError("S-transform of '" + name + "' is not real on (-1, 0)");
        }
        return v.real();
    };
}

SingularValueReport singular_value_check(const HermitianSampler& sampler, const catalog::DistributionSpec& reference,
                                         const rmtlab::EnsembleConfig& cfg)
{
    if (cfg.n < 2 || cfg.reps < 1)
    {
        throw ArgumentError("singular_value_check needs N >= 2 and reps >= 1");
    }
    std::vector<std::vector<double>> per_rep(static_cast<std::size_t>(cfg.reps));
    rmtlab::for_each_rep(cfg.reps, cfg.threads, [&](long long r) {
        rng::PhiloxStream stream(cfg.seed, static_cast<std::uint64_t>(r));
        const auto u = rmtlab::sample_haar_unitary(cfg.n, stream);
        const auto h = sampler(cfg.n, stream);
        per_rep[static_cast<std::size_t>(r)] = linalg::hermitian_eigenvalues(gram(u * h));
    });
    SingularValueReport rep;
    for (const auto& v : per_rep)
    {
        rep.squared_singular_values.insert(rep.squared_singular_values.end(), v.begin(), v.end());
    }
    rep.sup_distance = catalog::ks_distance(reference, rep.squared_singular_values);
    return rep;
}

}  // namespace freeconv::brown
