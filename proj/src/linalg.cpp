#include "freeconv/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "freeconv/errors.hpp"

namespace freeconv::linalg {

namespace {

void require_same_size(const ComplexMatrix& a, const ComplexMatrix& b)
{
    if (a.size() != b.size())
    {
        throw ArgumentError("matrix dimension mismatch: " + std::to_string(a.size()) + " vs " +
                            std::to_string(b.size()));
    }
}

double off_diagonal_norm(const ComplexMatrix& h)
{
    double s = 0.0;
    for (int i = 0; i < h.size(); ++i)
    {
        for (int j = 0; j < h.size(); ++j)
        {
            if (i != j)
            {
                s += std::norm(h(i, j));
            }
        }
    }
    return std::sqrt(s);
}

}  // namespace

ComplexMatrix::ComplexMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
{
    if (n < 1)
    {
        throw ArgumentError("matrix dimension must be positive");
    }
}

ComplexMatrix::ComplexMatrix(int n, std::vector<Complex> entries) : n_(n), a_(std::move(entries))
{
    if (n < 1 || a_.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
    {
        throw ArgumentError("matrix entries do not form an n x n array");
    }
}

ComplexMatrix ComplexMatrix::identity(int n)
{
    ComplexMatrix m(n);
    for (int i = 0; i < n; ++i)
    {
        m(i, i) = 1.0;
    }
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(const std::vector<double>& d)
{
    ComplexMatrix m(static_cast<int>(d.size()));
    for (std::size_t i = 0; i < d.size(); ++i)
    {
        m(static_cast<int>(i), static_cast<int>(i)) = d[i];
    }
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const
{
    ComplexMatrix m(n_);
    for (int i = 0; i < n_; ++i)
    {
        for (int j = 0; j < n_; ++j)
        {
            m(j, i) = std::conj((*this)(i, j));
        }
    }
    return m;
}

Complex ComplexMatrix::trace() const
{
    Complex t = 0.0;
    for (int i = 0; i < n_; ++i)
    {
        t += (*this)(i, i);
    }
    return t;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b)
{
    require_same_size(a, b);
    const int n = a.size();
    // Real and imaginary parts handled by hand: std::complex multiplication
    // carries NaN-recovery branches that dominate the inner loop.
    std::vector<double> re(static_cast<std::size_t>(n) * n, 0.0);
    std::vector<double> im(re.size(), 0.0);
    const auto* pb = b.entries().data();
    for (int i = 0; i < n; ++i)
    {
        double* ri = re.data() + static_cast<std::size_t>(i) * n;
        double* ii = im.data() + static_cast<std::size_t>(i) * n;
        for (int k = 0; k < n; ++k)
        {
            const double ar = a(i, k).real();
            const double ai = a(i, k).imag();
            const Complex* bk = pb + static_cast<std::size_t>(k) * n;
            for (int j = 0; j < n; ++j)
            {
                const double br = bk[j].real();
                const double bi = bk[j].imag();
                ri[j] += ar * br - ai * bi;
                ii[j] += ar * bi + ai * br;
            }
        }
    }
    std::vector<Complex> out(re.size());
    for (std::size_t i = 0; i < out.size(); ++i)
    {
        out[i] = Complex(re[i], im[i]);
    }
    return ComplexMatrix(n, std::move(out));
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b)
{
    require_same_size(a, b);
    auto out = a.entries();
    for (std::size_t i = 0; i < out.size(); ++i)
    {
        out[i] += b.entries()[i];
    }
    return ComplexMatrix(a.size(), std::move(out));
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b)
{
    require_same_size(a, b);
    auto out = a.entries();
    for (std::size_t i = 0; i < out.size(); ++i)
    {
        out[i] -= b.entries()[i];
    }
    return ComplexMatrix(a.size(), std::move(out));
}

ComplexMatrix operator*(Complex s, const ComplexMatrix& a)
{
    auto out = a.entries();
    for (auto& x : out)
    {
        x *= s;
    }
    return ComplexMatrix(a.size(), std::move(out));
}

Complex normalized_trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b)
{
    require_same_size(a, b);
    const int n = a.size();
    double re = 0.0;
    double im = 0.0;
    for (int i = 0; i < n; ++i)
    {
        for (int k = 0; k < n; ++k)
        {
            const Complex x = a(i, k);
            const Complex y = b(k, i);
            re += x.real() * y.real() - x.imag() * y.imag();
            im += x.real() * y.imag() + x.imag() * y.real();
        }
    }
    return Complex(re, im) / static_cast<double>(n);
}

double max_abs(const ComplexMatrix& a)
{
    double m = 0.0;
    for (const auto& x : a.entries())
    {
        m = std::max(m, std::abs(x));
    }
    return m;
}

double frobenius_norm(const ComplexMatrix& a)
{
    double s = 0.0;
    for (const auto& x : a.entries())
    {
        s += std::norm(x);
    }
    return std::sqrt(s);
}

double hermitian_residual(const ComplexMatrix& a)
{
    double m = 0.0;
    for (int i = 0; i < a.size(); ++i)
    {
        for (int j = i; j < a.size(); ++j)
        {
            m = std::max(m, std::abs(a(i, j) - std::conj(a(j, i))));
        }
    }
    return m;
}

double unitarity_residual(const ComplexMatrix& u)
{
    return max_abs(u.adjoint() * u - ComplexMatrix::identity(u.size()));
}

std::vector<double> hermitian_eigenvalues(ComplexMatrix h, double tol, int max_sweeps)
{
    const int n = h.size();
    if (hermitian_residual(h) > 1e-12 * std::max(1.0, max_abs(h)))
    {
        throw ArgumentError("hermitian_eigenvalues needs a Hermitian matrix");
    }
    const double scale = frobenius_norm(h);
    int sweep = 0;
    while (off_diagonal_norm(h) > tol * scale)
    {
        if (sweep++ >= max_sweeps)
        {
            throw NumericalError("Jacobi eigensolver did not converge within " + std::to_string(max_sweeps) +
                                 " sweeps");
        }
        for (int p = 0; p < n - 1; ++p)
        {
            for (int q = p + 1; q < n; ++q)
            {
                const Complex hpq = h(p, q);
                const double r = std::abs(hpq);
                if (r == 0.0)
                {
                    continue;
                }
                // Remove the phase of h_pq, then apply a real Jacobi rotation.
                const Complex phase = hpq / r;  // e^{i phi}
                const double a = h(p, p).real();
                const double b = h(q, q).real();
                const double theta = (b - a) / (2.0 * r);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                // V restricted to (p,q): [[c, s], [-s e^{-i phi}, c e^{-i phi}]].
                const Complex vqp = -s * std::conj(phase);
                const Complex vqq = c * std::conj(phase);
                // Rows p and q change as conj(V)^T applied from the left; the
                // matching columns follow by Hermitian symmetry.
                const Complex wqp = std::conj(vqp);
                const Complex wqq = std::conj(vqq);
                Complex* row_p = &h(p, 0);
                Complex* row_q = &h(q, 0);
                for (int k = 0; k < n; ++k)
                {
                    const Complex hpk = row_p[k];
                    const Complex hqk = row_q[k];
                    row_p[k] = c * hpk + wqp * hqk;
                    row_q[k] = s * hpk + wqq * hqk;
                }
                for (int k = 0; k < n; ++k)
                {
                    h(k, p) = std::conj(row_p[k]);
                    h(k, q) = std::conj(row_q[k]);
                }
                h(p, q) = 0.0;
                h(q, p) = 0.0;
                h(p, p) = a - t * r;
                h(q, q) = b + t * r;
            }
        }
    }
    std::vector<double> ev(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
    {
        ev[static_cast<std::size_t>(i)] = h(i, i).real();
    }
    std::sort(ev.begin(), ev.end());
    return ev;
}

std::vector<double> symmetric_eigenvalues(std::vector<double> a, int r, double tol, int max_sweeps)
{
    if (r < 1 || a.size() != static_cast<std::size_t>(r) * static_cast<std::size_t>(r))
    {
        throw ArgumentError("symmetric_eigenvalues needs an r x r array");
    }
    const auto at = [&](int i, int j) -> double& {
        return a[static_cast<std::size_t>(i) * static_cast<std::size_t>(r) + static_cast<std::size_t>(j)];
    };
    double scale = 0.0;
    for (double x : a)
    {
        scale += x * x;
    }
    scale = std::sqrt(scale);
    const auto off = [&] {
        double s = 0.0;
        for (int i = 0; i < r; ++i)
        {
            for (int j = 0; j < r; ++j)
            {
                s += i == j ? 0.0 : at(i, j) * at(i, j);
            }
        }
        return std::sqrt(s);
    };
    int sweep = 0;
    while (off() > tol * scale)
    {
        if (sweep++ >= max_sweeps)
        {
            throw NumericalError("Jacobi eigensolver did not converge");
        }
        for (int p = 0; p < r - 1; ++p)
        {
            for (int q = p + 1; q < r; ++q)
            {
                const double apq = at(p, q);
                if (apq == 0.0)
                {
                    continue;
                }
                const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < r; ++k)
                {
                    const double akp = at(k, p);
                    const double akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < r; ++k)
                {
                    const double apk = at(p, k);
                    const double aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i)
    {
        ev[static_cast<std::size_t>(i)] = at(i, i);
    }
    std::sort(ev.begin(), ev.end());
    return ev;
}

Complex lu_determinant(ComplexMatrix a)
{
    const int n = a.size();
    Complex det = 1.0;
    for (int k = 0; k < n; ++k)
    {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
        {
            if (std::abs(a(i, k)) > std::abs(a(piv, k)))
            {
                piv = i;
            }
        }
        if (a(piv, k) == 0.0)
        {
            return 0.0;
        }
        if (piv != k)
        {
            for (int j = 0; j < n; ++j)
            {
                std::swap(a(k, j), a(piv, j));
            }
            det = -det;
        }
        det *= a(k, k);
        for (int i = k + 1; i < n; ++i)
        {
            const Complex f = a(i, k) / a(k, k);
            for (int j = k + 1; j < n; ++j)
            {
                a(i, j) -= f * a(k, j);
            }
        }
    }
    return det;
}

QrFactors householder_qr(const ComplexMatrix& a)
{
    const int n = a.size();
    ComplexMatrix r = a;
    ComplexMatrix q = ComplexMatrix::identity(n);
    std::vector<Complex> v(static_cast<std::size_t>(n));
    std::vector<Complex> dots(static_cast<std::size_t>(n));
    for (int k = 0; k < n - 1; ++k)
    {
        double norm_x = 0.0;
        for (int i = k; i < n; ++i)
        {
            norm_x += std::norm(r(i, k));
        }
        norm_x = std::sqrt(norm_x);
        if (norm_x == 0.0)
        {
            continue;
        }
        const Complex x0 = r(k, k);
        const Complex phase = std::abs(x0) == 0.0 ? Complex(1.0) : x0 / std::abs(x0);
        const Complex alpha = -phase * norm_x;
        // v = x - alpha e_1, normalized.
        double vnorm = 0.0;
        for (int i = k; i < n; ++i)
        {
            v[static_cast<std::size_t>(i)] = r(i, k) - (i == k ? alpha : Complex(0.0));
            vnorm += std::norm(v[static_cast<std::size_t>(i)]);
        }
        vnorm = std::sqrt(vnorm);
        for (int i = k; i < n; ++i)
        {
            v[static_cast<std::size_t>(i)] /= vnorm;
        }
        // r <- (I - 2 v v*) r, row by row for contiguous access.
        std::fill(dots.begin() + k, dots.end(), Complex(0.0));
        for (int i = k; i < n; ++i)
        {
            const Complex vi = std::conj(v[static_cast<std::size_t>(i)]);
            for (int j = k; j < n; ++j)
            {
                dots[static_cast<std::size_t>(j)] += vi * r(i, j);
            }
        }
        for (int i = k; i < n; ++i)
        {
            const Complex vi = 2.0 * v[static_cast<std::size_t>(i)];
            for (int j = k; j < n; ++j)
            {
                r(i, j) -= vi * dots[static_cast<std::size_t>(j)];
            }
        }
        // q <- q (I - 2 v v*)
        for (int i = 0; i < n; ++i)
        {
            Complex dot = 0.0;
            for (int j = k; j < n; ++j)
            {
                dot += q(i, j) * v[static_cast<std::size_t>(j)];
            }
            for (int j = k; j < n; ++j)
            {
                q(i, j) -= 2.0 * dot * std::conj(v[static_cast<std::size_t>(j)]);
            }
        }
        for (int i = k + 1; i < n; ++i)
        {
            r(i, k) = 0.0;
        }
    }
    return {std::move(q), std::move(r)};
}

}  // namespace freeconv::linalg
