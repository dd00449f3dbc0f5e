#include <doctest.h>

#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>

#include "freeconv/catalog.hpp"
#include "freeconv/convolve.hpp"
#include "freeconv/errors.hpp"
#include "freeconv/freeness_oracle.hpp"
#include "freeconv/moments.hpp"
#include "freeconv/ncpart.hpp"

using namespace freeconv;
using namespace freeconv::convolve;

namespace {

MomentSequence law_moments(const std::string& spec, int order)
{
    return catalog::moment_table(catalog::parse_spec(spec), order);
}

MomentSequence law_moments(const std::string& name, const std::map<std::string, double>& params, int order)
{
    return catalog::moment_table(catalog::catalog_get(name, params), order);
}

MomentSequence atomic(const std::vector<double>& x, const std::vector<double>& w, int order)
{
    std::vector<double> m;
    for (int k = 1; k <= order; ++k)
    {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
        {
            s += w[i] * std::pow(x[i], k);
        }
        m.push_back(s);
    }
    return MomentSequence(m);
}

// Positive atoms rescaled to mean one.
MomentSequence random_mean_one(std::mt19937_64& rng, int order)
{
    std::uniform_real_distribution<double> loc(0.2, 2.0);
    std::uniform_real_distribution<double> wt(0.2, 1.0);
    std::vector<double> x{loc(rng), loc(rng), loc(rng)};
    std::vector<double> w{wt(rng), wt(rng), wt(rng)};
    const double tw = w[0] + w[1] + w[2];
    double mean = 0.0;
    for (int i = 0; i < 3; ++i)
    {
        w[i] /= tw;
        mean += w[i] * x[i];
    }
    for (auto& v : x)
    {
        v /= mean;
    }
    return atomic(x, w, order);
}

double binom(int n, int k)
{
    double r = 1.0;
    for (int i = 1; i <= k; ++i)
    {
        r = r * (n - k + i) / i;
    }
    return r;
}

// E((a b)^k) for free a, b straight from the definition of freeness.
double oracle_product_moment(const MomentSequence& a, const MomentSequence& b, int k)
{
    oracle::FreeWordMoments f({a.values(), b.values()});
    std::vector<int> w;
    for (int i = 0; i < k; ++i)
    {
        w.push_back(0);
        w.push_back(1);
    }
    return f.expectation(w);
}

}  // namespace

TEST_CASE("free additive convolution")
{
    const auto b2 = law_moments("bernoulli2", 12);
    const auto sum = free_add(b2, b2, 6);
    CHECK(sum.moments.values() == std::vector<double>{0, 2, 0, 6, 0, 20});

    // Shifting by a point mass adds x to the variable.
    const double x = 0.7;
    const auto nu = law_moments("marchenko-pastur:lambda=0.5", 10);
    const auto shifted = free_add(law_moments("delta:x=0.7", 10), nu, 10).moments;
    for (int k = 1; k <= 10; ++k)
    {
        double expect = 0.0;
        for (int j = 0; j <= k; ++j)
        {
            expect += binom(k, j) * std::pow(x, k - j) * nu[j];
        }
        CHECK(shifted[k] == doctest::Approx(expect).epsilon(1e-11));
    }

    const auto sc = free_add(law_moments("semicircle:scale=1.5", 12), law_moments("semicircle:scale=0.8", 12), 12);
    const auto expect = law_moments("semicircle", {{"scale", std::sqrt(1.5 * 1.5 + 0.8 * 0.8)}}, 12);
    for (int k = 1; k <= 12; ++k)
    {
        CHECK(std::abs(sc.moments[k] - expect[k]) < 1e-9 * std::max(1.0, expect[k]));
    }
    CHECK(sc.roundtrip_residual < 1e-9);
}

TEST_CASE("free addition: algebraic laws")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> loc(-1.0, 1.0);
    const auto draw = [&] { return atomic({loc(rng), loc(rng), loc(rng)}, {0.2, 0.3, 0.5}, 12); };
    for (int trial = 0; trial < 10; ++trial)
    {
        const auto a = draw();
        const auto b = draw();
        const auto c = draw();
        const auto ab = free_add(a, b, 12).moments;
        const auto ba = free_add(b, a, 12).moments;
        const auto ab_c = free_add(ab, c, 12).moments;
        const auto a_bc = free_add(a, free_add(b, c, 12).moments, 12).moments;
        const auto a0 = free_add(a, law_moments("delta:x=0", 12), 12).moments;
        for (int k = 1; k <= 12; ++k)
        {
            CHECK(std::abs(ab[k] - ba[k]) < 1e-10);
            CHECK(std::abs(ab_c[k] - a_bc[k]) < 1e-10 * std::max(1.0, std::abs(ab_c[k])));
            CHECK(std::abs(a0[k] - a[k]) < 1e-10);
        }
        // Cumulants add.
        const auto ka = moments::cumulants_from_moments(a, 8);
        const auto kb = moments::cumulants_from_moments(b, 8);
        const auto kab = moments::cumulants_from_moments(ab, 8);
        for (int n = 1; n <= 8; ++n)
        {
            CHECK(std::abs(kab[n] - ka[n] - kb[n]) < 1e-10);
        }
    }
    // Convolution is not linear in its arguments: (1/2 d_-1 + 1/2 d_1) [+] nu is
    // the arcsine law (m_4 = 6); the mixture of shifts of nu has m_4 = 8.
    const auto nu = law_moments("bernoulli2", 8);
    const double lhs = free_add(law_moments("bernoulli2", 8), nu, 8).moments[4];
    const double rhs = 0.5 * free_add(law_moments("delta:x=-1", 8), nu, 8).moments[4] +
                       0.5 * free_add(law_moments("delta:x=1", 8), nu, 8).moments[4];
    CHECK(lhs == doctest::Approx(6.0));
    CHECK(rhs == doctest::Approx(8.0));
    CHECK(std::abs(lhs - rhs) > 1e-3);
}

TEST_CASE("free multiplicative convolution")
{
    const auto one = law_moments("delta:x=1", 12);
    const auto mp = law_moments("marchenko-pastur:lambda=2", 12);
    const auto prod = free_mul(one, mp, 12).moments;
    for (int k = 1; k <= 12; ++k)
    {
        CHECK(std::abs(prod[k] - mp[k]) < 1e-10 * mp[k]);
    }
    CHECK_THROWS_AS(free_mul(law_moments("semicircle", 8), mp, 8), ArgumentError);

    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial)
    {
        const auto a = random_mean_one(rng, 8);
        const auto b = random_mean_one(rng, 8);
        const auto r = free_mul(a, b, 8).moments;
        CHECK(r[1] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(r.variance() - a.variance() - b.variance()) < 1e-10);
        for (int k = 1; k <= 4; ++k)
        {
            CHECK(std::abs(r[k] - oracle_product_moment(a, b, k)) < 1e-8);
        }
    }

    const auto bern = law_moments("bernoulli:p=0.75", 8);
    const auto bb = free_mul(bern, bern, 8).moments;
    CHECK(bb[1] == doctest::Approx(0.5625));
    for (int k = 1; k <= 4; ++k)
    {
        CHECK(std::abs(bb[k] - oracle_product_moment(bern, bern, k)) < 1e-10);
    }
}

TEST_CASE("free compression")
{
    const int order = 12;
    // Symmetric Bernoulli, t = 1/2: atom 1/2 at zero plus (1/2) arcsine on [-1, 1].
    const auto b2 = law_moments("bernoulli2", order);
    const auto raw = compress(b2, 0.5, order).moments;
    const auto resc = compress_rescaled(b2, 0.5, order).moments;
    const auto arc = law_moments("arcsine:scale=0.5", order);
    for (int k = 1; k <= order; ++k)
    {
        CHECK(std::abs(resc[k] - arc[k]) < 1e-10);
        CHECK(std::abs(raw[k] - 0.5 * arc[k]) < 1e-10);
    }
    // The atom at 0: m_k(raw) -> 1/2 m_k(continuous part) and the mass is 1 - raw/rescaled.
    CHECK(1.0 - raw[2] / resc[2] == doctest::Approx(0.5));

    // Semicircle, t = 1/2: continuous part is the semicircle of radius sqrt 2.
    const auto sc = compress_rescaled(law_moments("semicircle", order), 0.5, order).moments;
    const auto sc2 = law_moments("semicircle", {{"scale", std::sqrt(0.5)}}, order);
    for (int k = 1; k <= order; ++k)
    {
        CHECK(std::abs(sc[k] - sc2[k]) < 1e-9);
    }

    // S route and R route agree when both apply; both match P A P from the definition.
    const auto mp = law_moments("marchenko-pastur:lambda=1.5", order);
    for (double t : {0.2, 0.5, 0.9})
    {
        const auto via_s = compress(mp, t, order).moments;
        const auto via_r = compress_rescaled(mp, t, order).moments;
        const MomentSequence proj(std::vector<double>(order, t));
        for (int k = 1; k <= order; ++k)
        {
            CHECK(std::abs(via_s[k] - t * via_r[k]) < 1e-9 * std::max(1.0, via_s[k]));
        }
        for (int k = 1; k <= 5; ++k)
        {
            CHECK(std::abs(via_s[k] - oracle_product_moment(mp, proj, k)) < 1e-9 * std::max(1.0, via_s[k]));
        }
    }
    const auto same = compress(mp, 1.0, order).moments;
    const auto same_r = compress_rescaled(mp, 1.0, order).moments;
    for (int k = 1; k <= order; ++k)
    {
        CHECK(std::abs(same[k] - mp[k]) < 1e-10 * mp[k]);
        CHECK(same_r[k] == doctest::Approx(mp[k]).epsilon(1e-12));
    }

    // t = 1/n equals the n-fold free sum of the law scaled by 1/n.
    for (int n : {2, 3})
    {
        const std::vector<std::pair<std::string, std::map<std::string, double>>> laws{
            {"bernoulli2", {}}, {"marchenko-pastur", {{"lambda", 0.5}}}, {"bernoulli", {{"p", 0.3}}}};
        for (const auto& [name, params] : laws)
        {
            INFO(name, " n=", n);
            const auto a = law_moments(name, params, order);
            const auto lhs = compress_rescaled(a, 1.0 / n, order).moments;
            auto scaled = params;
            scaled["scale"] = 1.0 / n;
            const auto small = law_moments(name, scaled, order);
            auto sum = small;
            for (int i = 1; i < n; ++i)
            {
                sum = free_add(sum, small, order).moments;
            }
            const auto via_semigroup = semigroup_mu_t(small, n, order).moments;
            for (int k = 1; k <= order; ++k)
            {
                CHECK(std::abs(lhs[k] - sum[k]) < 1e-9);
                CHECK(std::abs(lhs[k] - via_semigroup[k]) < 1e-9);
            }
        }
    }
    CHECK_THROWS_AS(compress(mp, 0.0, order), ArgumentError);
    CHECK_THROWS_AS(compress_rescaled(mp, 1.5, order), ArgumentError);
}

TEST_CASE("additive semigroup")
{
    const int order = 10;
    const auto sc = law_moments("semicircle", order);
    const auto sc_t = semigroup_mu_t(sc, 2.5, order).moments;
    const auto dil = law_moments("semicircle", {{"scale", std::sqrt(2.5)}}, order);
    for (int k = 1; k <= order; ++k)
    {
        CHECK(std::abs(sc_t[k] - dil[k]) < 1e-9 * std::max(1.0, dil[k]));
    }
    const auto mp_t = semigroup_mu_t(law_moments("marchenko-pastur:lambda=0.5", order), 3.0, order).moments;
    const auto mp15 = law_moments("marchenko-pastur:lambda=1.5", order);
    for (int k = 1; k <= order; ++k)
    {
        CHECK(std::abs(mp_t[k] - mp15[k]) < 1e-9 * mp15[k]);
    }
    const auto zero = semigroup_mu_t(mp15, 0.0, order).moments;
    for (int k = 1; k <= order; ++k)
    {
        CHECK(zero[k] == 0.0);
    }
    const auto a = law_moments("bernoulli:p=0.3", order);
    const auto three = free_add(free_add(a, a, order).moments, a, order).moments;
    const auto a3 = semigroup_mu_t(a, 3.0, order).moments;
    for (int k = 1; k <= order; ++k)
    {
        CHECK(std::abs(three[k] - a3[k]) < 1e-10);
    }
}

TEST_CASE("Levy-Khintchine representation")
{
    const PhiRepresentation semicircle{0.0, {{0.0, 1.0}}};
    CHECK(std::abs(phi_eval(semicircle, {0.0, 2.0}) - Complex(0.0, -0.5)) < 1e-15);
    CHECK(phi_eval(PhiRepresentation{-1.0, {}}, {0.3, 1.0}) == Complex(-1.0));
    const PhiRepresentation rep{0.4, {{-1.0, 0.3}, {0.5, 1.2}, {2.0, 0.1}}};
    CHECK(std::abs(phi_eval(rep, {0.0, 1e5}) / 1e5) < 1e-5);
    for (double x : {-3.0, -0.5, 0.0, 1.0, 4.0})
    {
        for (double y : {0.01, 0.5, 3.0})
        {
            CHECK(phi_eval(rep, {x, y}).imag() <= 0.0);
        }
    }
    // For sigma = delta_0, phi(z) = 1/z = R(1/z) of the semicircle.
    CHECK(std::abs(phi_eval(semicircle, {0.4, 0.7}) - 1.0 / Complex(0.4, 0.7)) < 1e-15);
    CHECK_THROWS_AS(phi_eval(PhiRepresentation{0.0, {{1.0, -0.1}}}, {0.0, 1.0}), ArgumentError);
}

TEST_CASE("free central limit")
{
    const int order = 12;
    const auto b2 = law_moments("bernoulli2", order);
    const auto k = moments::cumulants_from_moments(b2, 9);
    for (int n : {1, 4, 100})
    {
        const auto scaled = clt_scaled_cumulants(b2, n, 9);
        CHECK(scaled[2] == 1.0);
        for (int j = 1; j <= 9; ++j)
        {
            CHECK(std::abs(scaled[j] - std::pow(n, 1.0 - j / 2.0) * k[j]) < 1e-14);
        }
    }
    // Direct route: n-fold free sum, then dilation by 1/sqrt(n).
    {
        const int n = 4;
        auto sum = b2;
        for (int i = 1; i < n; ++i)
        {
            sum = free_add(sum, b2, order).moments;
        }
        std::vector<double> m;
        for (int j = 1; j <= order; ++j)
        {
            m.push_back(sum[j] / std::pow(n, j / 2.0));
        }
        const auto direct = moments::cumulants_from_moments(MomentSequence(m), 9);
        const auto scaled = clt_scaled_cumulants(b2, n, 9);
        for (int j = 1; j <= 9; ++j)
        {
            CHECK(std::abs(direct[j] - scaled[j]) < 1e-12);
        }
    }
    // ||S_n / sqrt n|| <= 2 + ||X|| / sqrt n, so m_2k <= (2 + 1/sqrt n)^(2k).
    for (int n : {4, 16, 64})
    {
        const auto m = moments::moments_from_cumulants_series(clt_scaled_cumulants(b2, n, 12), 12);
        for (int kk = 1; kk <= 6; ++kk)
        {
            CHECK(m[2 * kk] <= std::pow(2.0 + 1.0 / std::sqrt(n), 2 * kk));
        }
        CHECK(std::abs(m[4] - 2.0) <= 2.0 / n);
    }
    CHECK_THROWS_AS(clt_scaled_cumulants(law_moments("arcsine", 8), 4, 8), ArgumentError);
}

// The bound with 1 in place of 2 cannot hold: the limit is the semicircle,
// whose moments m_2k = C_k outgrow (1 + eps)^(2k).
TEST_CASE("superconvergence bound with unit radius" * doctest::should_fail())
{
    const auto b2 = law_moments("bernoulli2", 12);
    for (int n : {4, 16, 64})
    {
        const auto m = moments::moments_from_cumulants_series(clt_scaled_cumulants(b2, n, 12), 12);
        for (int kk = 1; kk <= 6; ++kk)
        {
            INFO("n=", n, " k=", kk, " m_2k=", m[2 * kk]);
            CHECK(m[2 * kk] <= std::pow(1.0 + 1.0 / std::sqrt(n), 2 * kk));
        }
    }
}

TEST_CASE("free Poisson limit")
{
    const auto one = free_poisson_limit(0.4, 1, 8).moments;
    for (int k = 1; k <= 8; ++k)
    {
        CHECK(one[k] == doctest::Approx(0.4).epsilon(1e-12));
    }
    const auto big = free_poisson_limit(1.0, 10000, 8);
    CHECK(std::abs(big.cumulants[2] - 1.0) <= 2e-4);
    // Each cumulant is n times the Bernoulli(1/n) cumulant, from the lattice.
    const double p = 1e-4;
    const auto kb = moments::cumulants_from_moments(MomentSequence(std::vector<double>(8, p)), 8);
    for (int j = 1; j <= 8; ++j)
    {
        CHECK(std::abs(big.cumulants[j] - 1e4 * kb[j]) < 1e-10);
        // Leading deviation from the limit is -C(j,2) lambda^2 / n.
        CHECK(std::abs(big.cumulants[j] - 1.0 + binom(j, 2) / 1e4) <= 0.05 * binom(j, 2) / 1e4);
    }
    // Convergence of every coefficient.
    double prev = std::numeric_limits<double>::infinity();
    for (long long n : {10LL, 100LL, 1000LL, 10000LL})
    {
        const auto k = free_poisson_limit(2.0, n, 6).cumulants;
        double dev = 0.0;
        for (int j = 1; j <= 6; ++j)
        {
            dev = std::max(dev, std::abs(k[j] - 2.0));
        }
        CHECK(dev < prev);
        prev = dev;
    }
    CHECK_THROWS_AS(free_poisson_limit(3.0, 2, 6), ArgumentError);
}

TEST_CASE("support of free multiplicative powers")
{
    const auto mp = psi_law_marchenko_pastur();
    const auto e1 = product_support(mp, 1);
    CHECK(e1.u == doctest::Approx(1.0));
    CHECK(e1.right_edge == doctest::Approx(4.0));
    for (double n : {10.0, 1e3, 1e5})
    {
        const auto e = product_support(mp, n);
        CHECK(e.u == doctest::Approx(1.0 / n).epsilon(1e-10));
        CHECK(e.right_edge == doctest::Approx(n * std::pow(1.0 + 1.0 / n, n + 1.0)).epsilon(1e-9));
    }
    CHECK(std::abs(product_support(mp, 1e3).u * 1e3 - 1.0) < 0.1);
    CHECK(std::abs(product_support(mp, 1e5).edge_over_n / std::numbers::e - 1.0) < 0.01);

    for (double p : {0.2, 0.5})
    {
        const auto law = psi_law_bernoulli(p);
        for (double n : {10.0, 1e4})
        {
            const auto e = product_support(law, n);
            CHECK(e.u == doctest::Approx(p / (n * (1.0 - 1.0 / n - p))).epsilon(1e-9));
        }
        CHECK(std::abs(product_support(law, 1e6).edge_over_n / (std::numbers::e * law.variance) - 1.0) < 0.01);
    }
    // At n = 1 the Bernoulli edge 1/p is only reached as u -> infinity: no critical point.
    CHECK_THROWS_AS(product_support(psi_law_bernoulli(0.2), 1), NumericalError);

    // psi(z) - z - (1 + V) z^2 is O(z^3) below 1/(2L); the fitted constant stays bounded.
    double c1 = 0.0;
    for (int i = 1; i <= 100; ++i)
    {
        const double z = 0.125 * i / 100.0;
        c1 = std::max(c1, std::abs(mp.psi(z) - z - 2.0 * z * z) / (z * z * z));
    }
    CHECK(c1 < 20.0);
    CHECK(c1 > 5.0 - 1e-9);
    CHECK_THROWS_AS(product_support(psi_law_bernoulli(0.95), 10), NumericalError);
}
