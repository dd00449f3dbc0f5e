#include <doctest.h>

#include <cmath>

#include "freeconv/errors.hpp"
#include "freeconv/linalg.hpp"
#include "freeconv/rng.hpp"

using namespace freeconv;
using namespace freeconv::linalg;

namespace {

ComplexMatrix random_matrix(int n, rng::PhiloxStream& s)
{
    ComplexMatrix m(n);
    for (int i = 0; i < n; ++i)
    {
        for (int j = 0; j < n; ++j)
        {
            m(i, j) = s.complex_normal();
        }
    }
    return m;
}

ComplexMatrix random_hermitian(int n, rng::PhiloxStream& s)
{
    const auto x = random_matrix(n, s);
    return Complex(0.5) * (x + x.adjoint());
}

}  // namespace

TEST_CASE("products and traces")
{
    ComplexMatrix a(2, {1.0, Complex(0, 1), 2.0, 3.0});
    ComplexMatrix b(2, {0.0, 1.0, Complex(1, 1), -1.0});
    const auto p = a * b;
    CHECK(std::abs(p(0, 0) - Complex(-1, 1)) < 1e-15);
    CHECK(std::abs(p(0, 1) - Complex(1, -1)) < 1e-15);
    CHECK(std::abs(p(1, 0) - Complex(3, 3)) < 1e-15);
    CHECK(std::abs(p(1, 1) - Complex(-1, 0)) < 1e-15);
    CHECK(std::abs(normalized_trace_of_product(a, b) - p.normalized_trace()) < 1e-15);
    CHECK_THROWS_AS(a * ComplexMatrix::identity(3), ArgumentError);
}

TEST_CASE("hermitian eigenvalues")
{
    const auto d = hermitian_eigenvalues(ComplexMatrix::diagonal({3, 1, 2, 5}));
    CHECK(d == std::vector<double>{1, 2, 3, 5});

    const auto swap = hermitian_eigenvalues(ComplexMatrix(2, {0.0, 1.0, 1.0, 0.0}));
    CHECK(swap[0] == doctest::Approx(-1.0));
    CHECK(swap[1] == doctest::Approx(1.0));

    // [[a, z], [conj z, b]] has eigenvalues (a+b)/2 +- sqrt(((a-b)/2)^2 + |z|^2).
    const Complex z(0.3, -1.2);
    const auto two = hermitian_eigenvalues(ComplexMatrix(2, {1.5, z, std::conj(z), -0.5}));
    const double rad = std::sqrt(1.0 + std::norm(z));
    CHECK(two[0] == doctest::Approx(0.5 - rad));
    CHECK(two[1] == doctest::Approx(0.5 + rad));

    rng::PhiloxStream s(1, 0);
    for (int n : {3, 8, 20})
    {
        const auto h = random_hermitian(n, s);
        const auto ev = hermitian_eigenvalues(h);
        double s1 = 0.0, s2 = 0.0;
        for (double x : ev)
        {
            s1 += x;
            s2 += x * x;
        }
        CHECK(s1 == doctest::Approx(h.trace().real()).epsilon(1e-10));
        CHECK(s2 == doctest::Approx((h * h).trace().real()).epsilon(1e-10));
        for (double x : ev)
        {
            const auto shifted = h - Complex(x) * ComplexMatrix::identity(n);
            // |det| relative to the product of the other eigenvalue gaps.
            double gaps = 1.0;
            for (double y : ev)
            {
                if (y != x)
                {
                    gaps *= std::abs(y - x);
                }
            }
            CHECK(std::abs(lu_determinant(shifted)) / gaps < 1e-8);
        }
    }
    CHECK_THROWS_AS(hermitian_eigenvalues(ComplexMatrix(2, {0.0, 1.0, 2.0, 0.0})), ArgumentError);
    CHECK_THROWS_AS(hermitian_eigenvalues(random_hermitian(6, s), 1e-10, 0), NumericalError);
}

TEST_CASE("real symmetric eigenvalues")
{
    const auto ev = symmetric_eigenvalues({2, 1, 0, 1, 2, 0, 0, 0, 5}, 3);
    CHECK(ev[0] == doctest::Approx(1.0));
    CHECK(ev[1] == doctest::Approx(3.0));
    CHECK(ev[2] == doctest::Approx(5.0));
    CHECK_THROWS_AS(symmetric_eigenvalues({1, 2, 3}, 2), ArgumentError);
}

TEST_CASE("LU determinant")
{
    CHECK(std::abs(lu_determinant(ComplexMatrix::diagonal({2, 3, 4})) - 24.0) < 1e-12);
    CHECK(std::abs(lu_determinant(ComplexMatrix(2, {0.0, 1.0, 1.0, 0.0})) + 1.0) < 1e-15);
    CHECK(std::abs(lu_determinant(ComplexMatrix(2, {1.0, 2.0, 2.0, 4.0}))) < 1e-15);
    rng::PhiloxStream s(2, 0);
    const auto a = random_matrix(6, s);
    const auto b = random_matrix(6, s);
    const auto dab = lu_determinant(a * b);
    CHECK(std::abs(dab - lu_determinant(a) * lu_determinant(b)) < 1e-9 * std::abs(dab));
}

TEST_CASE("Householder QR")
{
    rng::PhiloxStream s(3, 0);
    for (int n : {2, 5, 16})
    {
        const auto a = random_matrix(n, s);
        const auto [q, r] = householder_qr(a);
        CHECK(unitarity_residual(q) < 1e-12);
        CHECK(max_abs(q * r - a) < 1e-12);
        for (int i = 1; i < n; ++i)
        {
            for (int j = 0; j < i; ++j)
            {
                CHECK(std::abs(r(i, j)) == 0.0);
            }
        }
    }
}
