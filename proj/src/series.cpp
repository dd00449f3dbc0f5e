#include "freeconv/series.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "freeconv/errors.hpp"

namespace freeconv {

MomentSequence MomentSequence::truncated(int order) const
{
    if (order > this->order())
    {
        throw ArgumentError("moment sequence of order " + std::to_string(this->order()) +
                            " cannot supply order " + std::to_string(order));
    }
    return MomentSequence(std::vector<double>(m_.begin(), m_.begin() + order));
}

namespace series {

namespace {

// Constant terms smaller than this are treated as exact zeros when a
// composition or reversion needs c_0 == 0.
constexpr double kZeroTolerance = 1e-12;

bool negligible(double c, double scale)
{
    return std::abs(c) <= kZeroTolerance * std::max(1.0, std::abs(scale));
}

}  // namespace

TruncatedSeries::TruncatedSeries(std::vector<double> coeffs) : c_(std::move(coeffs))
{
    if (c_.empty())
    {
        throw ArgumentError("a truncated series needs at least the constant coefficient");
    }
}

TruncatedSeries TruncatedSeries::zero(int order)
{
    return TruncatedSeries(std::vector<double>(static_cast<std::size_t>(order + 1), 0.0));
}

TruncatedSeries TruncatedSeries::constant(double c, int order)
{
    auto s = std::vector<double>(static_cast<std::size_t>(order + 1), 0.0);
    s[0] = c;
    return TruncatedSeries(std::move(s));
}

TruncatedSeries TruncatedSeries::identity(int order)
{
    auto s = std::vector<double>(static_cast<std::size_t>(order + 1), 0.0);
    if (order >= 1)
    {
        s[1] = 1.0;
    }
    return TruncatedSeries(std::move(s));
}

TruncatedSeries TruncatedSeries::truncated(int order) const
{
    std::vector<double> c(static_cast<std::size_t>(order + 1), 0.0);
    for (int k = 0; k <= std::min(order, this->order()); ++k)
    {
        c[static_cast<std::size_t>(k)] = c_[static_cast<std::size_t>(k)];
    }
    return TruncatedSeries(std::move(c));
}

double TruncatedSeries::evaluate(double z) const
{
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it)
    {
        acc = acc * z + *it;
    }
    return acc;
}

std::complex<double> TruncatedSeries::evaluate(std::complex<double> z) const
{
    std::complex<double> acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it)
    {
        acc = acc * z + *it;
    }
    return acc;
}

TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b)
{
    const int m = std::min(a.order(), b.order());
    std::vector<double> c(static_cast<std::size_t>(m + 1));
    for (int k = 0; k <= m; ++k)
    {
        c[static_cast<std::size_t>(k)] = a[k] + b[k];
    }
    return TruncatedSeries(std::move(c));
}

TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b)
{
    return a + (-1.0) * b;
}

TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b)
{
    const int m = std::min(a.order(), b.order());
    std::vector<double> c(static_cast<std::size_t>(m + 1), 0.0);
    for (int i = 0; i <= m; ++i)
    {
        if (a[i] == 0.0)
        {
            continue;
        }
        for (int j = 0; i + j <= m; ++j)
        {
            c[static_cast<std::size_t>(i + j)] += a[i] * b[j];
        }
    }
    return TruncatedSeries(std::move(c));
}

TruncatedSeries operator*(double s, const TruncatedSeries& a)
{
    auto c = a.coeffs();
    for (auto& x : c)
    {
        x *= s;
    }
    return TruncatedSeries(std::move(c));
}

TruncatedSeries reciprocal(const TruncatedSeries& f)
{
    if (f[0] == 0.0)
    {
        throw ArgumentError("reciprocal of a series with zero constant term");
    }
    const int m = f.order();
    std::vector<double> r(static_cast<std::size_t>(m + 1), 0.0);
    r[0] = 1.0 / f[0];
    for (int k = 1; k <= m; ++k)
    {
        double acc = 0.0;
        for (int j = 1; j <= k; ++j)
        {
            acc += f[j] * r[static_cast<std::size_t>(k - j)];
        }
        r[static_cast<std::size_t>(k)] = -acc / f[0];
    }
    return TruncatedSeries(std::move(r));
}

TruncatedSeries compose(const TruncatedSeries& f, const TruncatedSeries& g)
{
    if (!negligible(g[0], g.order() >= 1 ? g[1] : 1.0))
    {
        throw ArgumentError("compose(f, g) needs g(0) == 0");
    }
    const int m = std::min(f.order(), g.order());
    auto inner = g.truncated(m).coeffs();
    inner[0] = 0.0;
    const TruncatedSeries gz(std::move(inner));
    auto acc = TruncatedSeries::constant(f[m], m);
    for (int k = m - 1; k >= 0; --k)
    {
        acc = acc * gz + TruncatedSeries::constant(f[k], m);
    }
    return acc;
}

TruncatedSeries derivative(const TruncatedSeries& f)
{
    const int m = f.order();
    if (m == 0)
    {
        return TruncatedSeries::zero(0);
    }
    std::vector<double> d(static_cast<std::size_t>(m));
    for (int k = 1; k <= m; ++k)
    {
        d[static_cast<std::size_t>(k - 1)] = k * f[k];
    }
    return TruncatedSeries(std::move(d));
}

TruncatedSeries revert(const TruncatedSeries& f)
{
    const int m = f.order();
    if (m < 1 || f[1] == 0.0)
    {
        throw ArgumentError("revert needs a nonzero linear coefficient");
    }
    if (!negligible(f[0], f[1]))
    {
        throw ArgumentError("revert needs f(0) == 0");
    }
    // Coefficient-by-coefficient solve of f(g(z)) = z in extended precision:
    // [z^k] f(g) = f_1 g_k + (terms in g_1..g_(k-1)). pw[j][k] holds [z^k] g^j.
    using Real = long double;
    const auto n = static_cast<std::size_t>(m);
    std::vector<std::vector<Real>> pw(n + 1, std::vector<Real>(n + 1, 0.0L));
    pw[0][0] = 1.0L;
    const Real f1 = f[1];
    for (std::size_t k = 1; k <= n; ++k)
    {
        Real acc = (k == 1) ? 1.0L : 0.0L;
        for (std::size_t j = k; j >= 2; --j)
        {
            Real c = 0.0L;
            for (std::size_t i = 1; i + (j - 1) <= k; ++i)
            {
                c += pw[1][i] * pw[j - 1][k - i];
            }
            pw[j][k] = c;
            acc -= static_cast<Real>(f[static_cast<int>(j)]) * c;
        }
        pw[1][k] = acc / f1;
    }
    std::vector<double> c(n + 1, 0.0);
    for (std::size_t k = 1; k <= n; ++k)
    {
        c[k] = static_cast<double>(pw[1][k]);
    }
    return TruncatedSeries(std::move(c));
}

TruncatedSeries sqrt(const TruncatedSeries& f)
{
    if (!(f[0] > 0.0))
    {
        throw ArgumentError("series square root needs a positive constant term");
    }
    const int m = f.order();
    std::vector<double> s(static_cast<std::size_t>(m + 1), 0.0);
    s[0] = std::sqrt(f[0]);
    for (int k = 1; k <= m; ++k)
    {
        double acc = f[k];
        for (int j = 1; j < k; ++j)
        {
            acc -= s[static_cast<std::size_t>(j)] * s[static_cast<std::size_t>(k - j)];
        }
        s[static_cast<std::size_t>(k)] = acc / (2.0 * s[0]);
    }
    return TruncatedSeries(std::move(s));
}

TruncatedSeries divide_by_power(const TruncatedSeries& f, int k)
{
    if (k > f.order())
    {
        throw ArgumentError("divide_by_power would leave no coefficients");
    }
    return TruncatedSeries(std::vector<double>(f.coeffs().begin() + k, f.coeffs().end()));
}

TruncatedSeries multiply_by_power(const TruncatedSeries& f, int k)
{
    std::vector<double> c(static_cast<std::size_t>(k), 0.0);
    c.insert(c.end(), f.coeffs().begin(), f.coeffs().end());
    return TruncatedSeries(std::move(c));
}

// --- transforms -------------------------------------------------------------

TruncatedSeries moments_to_R(const MomentSequence& m)
{
    const int order = m.order();
    if (order < 1)
    {
        throw ArgumentError("moments_to_R needs at least one moment");
    }
    // In t = 1/z: G = t + sum_k m_k t^(k+1). If u = G then t = G^(-1)(u) and
    // K(u) = 1/t = (1/u) / q(u) with q(u) = G^(-1)(u)/u.
    std::vector<double> g(static_cast<std::size_t>(order + 2), 0.0);
    g[1] = 1.0;
    for (int k = 1; k <= order; ++k)
    {
        g[static_cast<std::size_t>(k + 1)] = m[k];
    }
    const auto q = divide_by_power(revert(TruncatedSeries(std::move(g))), 1);
    const auto inv_q = reciprocal(q);
    return divide_by_power(inv_q - TruncatedSeries::constant(1.0, inv_q.order()), 1);
}

MomentSequence R_to_moments(const TruncatedSeries& r)
{
    const int order = r.order() + 1;
    // G^(-1)(u) = u / (1 + u R(u)).
    const auto denom = TruncatedSeries::constant(1.0, order) + multiply_by_power(r, 1);
    const auto ginv = multiply_by_power(reciprocal(denom), 1);
    const auto g = revert(ginv);
    std::vector<double> m(static_cast<std::size_t>(order));
    for (int k = 1; k <= order; ++k)
    {
        m[static_cast<std::size_t>(k - 1)] = g[k + 1];
    }
    return MomentSequence(std::move(m));
}

TruncatedSeries moments_to_S(const MomentSequence& m)
{
    const int order = m.order();
    if (order < 1)
    {
        throw ArgumentError("moments_to_S needs at least one moment");
    }
    if (m[1] == 0.0)
    {
        throw ArgumentError("S-transform undefined: the first moment is zero, so psi cannot be inverted");
    }
    std::vector<double> psi(static_cast<std::size_t>(order + 1), 0.0);
    for (int k = 1; k <= order; ++k)
    {
        psi[static_cast<std::size_t>(k)] = m[k];
    }
    const auto chi_over_z = divide_by_power(revert(TruncatedSeries(std::move(psi))), 1);
    const auto one_plus_z = TruncatedSeries::constant(1.0, order - 1) + TruncatedSeries::identity(order - 1);
    return one_plus_z * chi_over_z;
}

MomentSequence S_to_moments(const TruncatedSeries& s)
{
    if (s[0] == 0.0)
    {
        throw ArgumentError("S_to_moments needs a nonzero constant term");
    }
    const int order = s.order() + 1;
    const auto one_plus_z = TruncatedSeries::constant(1.0, order) + TruncatedSeries::identity(order);
    const auto chi = multiply_by_power(s, 1) * reciprocal(one_plus_z);
    const auto psi = revert(chi);
    std::vector<double> m(static_cast<std::size_t>(order));
    for (int k = 1; k <= order; ++k)
    {
        m[static_cast<std::size_t>(k - 1)] = psi[k];
    }
    return MomentSequence(std::move(m));
}

TruncatedSeries S_from_R(const TruncatedSeries& r)
{
    if (r[0] == 0.0)
    {
        throw ArgumentError("S-transform undefined: the first cumulant is zero");
    }
    return divide_by_power(revert(multiply_by_power(r, 1)), 1);
}

TruncatedSeries R_from_S(const TruncatedSeries& s)
{
    if (s[0] == 0.0)
    {
        throw ArgumentError("R_from_S needs a nonzero constant term");
    }
    return divide_by_power(revert(multiply_by_power(s, 1)), 1);
}

TruncatedSeries symmetric_s_square(const TruncatedSeries& r)
{
    const int top = r.order() + 1;  // highest cumulant index available
    if (top < 2 || r[1] == 0.0)
    {
        throw ArgumentError("symmetric_s_square needs a nonzero second cumulant");
    }
    for (int k = 0; k <= r.order(); k += 2)
    {
        if (!negligible(r[k], r[1]))
        {
            throw ArgumentError("symmetric_s_square needs vanishing odd cumulants");
        }
    }
    // z R(z) = P(z^2) with P(u) = sum_j k_(2j) u^j; then z S(z)^2 = P^(-1)(z)/z.
    const int half = top / 2;
    std::vector<double> p(static_cast<std::size_t>(half + 1), 0.0);
    for (int j = 1; j <= half; ++j)
    {
        p[static_cast<std::size_t>(j)] = r[2 * j - 1];
    }
    return divide_by_power(revert(TruncatedSeries(std::move(p))), 1);
}

CumulantSequence cumulants_from_R(const TruncatedSeries& r)
{
    return CumulantSequence(r.coeffs());
}

TruncatedSeries R_from_cumulants(const CumulantSequence& k)
{
    if (k.order() < 1)
    {
        throw ArgumentError("R_from_cumulants needs at least one cumulant");
    }
    return TruncatedSeries(k.values());
}

}  // namespace series
}  // namespace freeconv
