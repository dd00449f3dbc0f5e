#include <doctest.h>

#include <cmath>
#include <random>

#include "freeconv/errors.hpp"
#include "freeconv/freeness_oracle.hpp"
#include "freeconv/moments.hpp"

using namespace freeconv;
using namespace freeconv::moments;
using nc::SetPartition;

namespace {

std::vector<double> atom_moments(const std::vector<double>& atoms, const std::vector<double>& weights, int order)
{
    std::vector<double> m;
    for (int k = 1; k <= order; ++k)
    {
        double s = 0.0;
        for (std::size_t i = 0; i < atoms.size(); ++i)
        {
            s += weights[i] * std::pow(atoms[i], k);
        }
        m.push_back(s);
    }
    return m;
}

// A random law on three atoms in [-1.5, 1.5].
std::vector<double> random_law(std::mt19937_64& rng, int order)
{
    std::uniform_real_distribution<double> loc(-1.5, 1.5);
    std::uniform_real_distribution<double> w(0.2, 1.0);
    std::vector<double> atoms{loc(rng), loc(rng), loc(rng)};
    std::vector<double> weights{w(rng), w(rng), w(rng)};
    const double total = weights[0] + weights[1] + weights[2];
    for (auto& x : weights)
    {
        x /= total;
    }
    return atom_moments(atoms, weights, order);
}

MomentSequence semicircle(int order)
{
    std::vector<double> m;
    for (int k = 1; k <= order; ++k)
    {
        m.push_back(k % 2 ? 0.0 : static_cast<double>(nc::catalan(k / 2)));
    }
    return MomentSequence(m);
}

MomentSequence marchenko_pastur(double lambda, int order)
{
    // Narayana polynomials: m_n = sum_k N(n,k) lambda^k, N(n,k) = C(n,k)C(n,k-1)/n.
    std::vector<double> m;
    for (int n = 1; n <= order; ++n)
    {
        double s = 0.0;
        for (int k = 1; k <= n; ++k)
        {
            s += std::tgamma(n + 1.0) / (std::tgamma(k + 1.0) * std::tgamma(n - k + 1.0)) * std::tgamma(n + 1.0) /
                 (std::tgamma(k) * std::tgamma(n - k + 2.0)) / n * std::pow(lambda, k);
        }
        m.push_back(s);
    }
    return MomentSequence(m);
}

MomentSequence arcsine(int order)
{
    // Arcsine on [-2, 2]: m_2k = binom(2k, k).
    std::vector<double> m;
    for (int k = 1; k <= order; ++k)
    {
        m.push_back(k % 2 ? 0.0 : std::round(std::tgamma(k + 1.0) / std::pow(std::tgamma(k / 2 + 1.0), 2)));
    }
    return MomentSequence(m);
}

std::vector<HaarLetter> haar_word(const std::string& s)
{
    std::vector<HaarLetter> w;
    for (char c : s)
    {
        w.push_back(c == 'u' ? HaarLetter::U : HaarLetter::UStar);
    }
    return w;
}

}  // namespace

TEST_CASE("cumulants of standard laws")
{
    const auto ks = cumulants_from_moments(semicircle(9), 9);
    for (int n = 1; n <= 9; ++n)
    {
        CHECK(ks[n] == doctest::Approx(n == 2 ? 1.0 : 0.0).scale(1.0));
    }
    for (double lambda : {0.5, 1.0, 2.0})
    {
        const auto k = cumulants_from_moments(marchenko_pastur(lambda, 9), 9);
        for (int n = 1; n <= 9; ++n)
        {
            CHECK(k[n] == doctest::Approx(lambda).epsilon(1e-10));
        }
    }
    const MomentSequence two({0.7, 2.0});
    CHECK(cumulants_from_moments(two, 2)[2] == doctest::Approx(2.0 - 0.49));
    CHECK_THROWS_AS(cumulants_from_moments(semicircle(12), 10), RangeError);
    CHECK_THROWS_AS(cumulants_from_moments(semicircle(4), 5), ArgumentError);
}

TEST_CASE("moments from cumulants")
{
    const auto m = moments_from_cumulants(CumulantSequence({0, 1, 0, 0, 0, 0}), 6);
    CHECK(m.values() == std::vector<double>{0, 1, 0, 2, 0, 5});
    const auto mp = moments_from_cumulants(CumulantSequence({1, 1, 1, 1}), 4);
    CHECK(mp.values() == std::vector<double>{1, 2, 5, 14});
    const double x = 1.3;
    const auto point = moments_from_cumulants(CumulantSequence({x, 0, 0, 0, 0}), 5);
    for (int k = 1; k <= 5; ++k)
    {
        CHECK(point[k] == doctest::Approx(std::pow(x, k)));
    }
    const auto mp2 = moments_from_cumulants(CumulantSequence(std::vector<double>(9, 2.0)), 9);
    const auto ref = marchenko_pastur(2.0, 9);
    for (int k = 1; k <= 9; ++k)
    {
        CHECK(mp2[k] == doctest::Approx(ref[k]).epsilon(1e-12));
    }
}

TEST_CASE("cumulant round trips and route agreement")
{
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial)
    {
        for (int order : {3, 6, 9})
        {
            std::vector<double> m;
            for (int k = 0; k < order; ++k)
            {
                m.push_back(u(rng));
            }
            const MomentSequence ms(m);
            const auto back = moments_from_cumulants(cumulants_from_moments(ms, order), order);
            for (int k = 1; k <= order; ++k)
            {
                CHECK(std::abs(back[k] - ms[k]) < 1e-10);
            }
            const auto lattice = cumulants_from_moments(ms, order);
            const auto via_series = cumulants_from_moments_series(ms, order);
            for (int k = 1; k <= order; ++k)
            {
                CHECK(std::abs(lattice[k] - via_series[k]) < 1e-9);
            }
            const CumulantSequence kk(m);
            const auto a = moments_from_cumulants(kk, order);
            const auto b = moments_from_cumulants_series(kk, order);
            for (int k = 1; k <= order; ++k)
            {
                CHECK(std::abs(a[k] - b[k]) < 1e-9);
            }
        }
    }
    for (const auto& law : {semicircle(9), marchenko_pastur(0.5, 9), arcsine(9)})
    {
        const auto a = cumulants_from_moments(law, 9);
        const auto b = cumulants_from_moments_series(law, 9);
        for (int k = 1; k <= 9; ++k)
        {
            CHECK(std::abs(a[k] - b[k]) < 1e-9);
        }
    }
}

TEST_CASE("generalized moments")
{
    const auto s = semicircle(4);
    CHECK(generalized_moment(s, SetPartition::parse("{1,4}{2,3}")) == 1.0);
    CHECK(generalized_moment(s, SetPartition::full(4)) == 2.0);
    const MomentSequence m({0.5, 1.0, 1.5});
    CHECK(generalized_moment(m, SetPartition::discrete(3)) == doctest::Approx(0.125));
    const auto g = make_generalized_moment(m, SetPartition::parse("{1,2}{3}"));
    CHECK(g.value == doctest::Approx(0.5));

    // The word callback sees each block's positions.
    const WordMoment word = [](const std::vector<int>& pos) { return static_cast<double>(pos.front() * 10 + pos.size()); };
    CHECK(generalized_moment(word, SetPartition::parse("{1,3}{2}")) == doctest::Approx(12.0 * 21.0));
}

TEST_CASE("alternating moments of free variables")
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial)
    {
        const MomentSequence a(random_law(rng, 7));
        const MomentSequence b(random_law(rng, 7));
        CHECK(mixed_moment_free(a, b, 1) == doctest::Approx(a[1] * b[1]));
        const double closed = a[2] * b[2] - a.variance() * b.variance();
        CHECK(std::abs(mixed_moment_free(a, b, 2) - closed) < 1e-12);

        oracle::FreeWordMoments oracle({a.values(), b.values()});
        for (int n = 1; n <= 7; ++n)
        {
            std::vector<int> word;
            for (int i = 0; i < n; ++i)
            {
                word.push_back(0);
                word.push_back(1);
            }
            CHECK(std::abs(mixed_moment_free(a, b, n) - oracle.expectation(word)) < 1e-10);
        }
    }
    const MomentSequence bern({0, 1, 0, 1, 0, 1});
    CHECK(std::abs(mixed_moment_free(bern, bern, 3)) < 1e-15);
    CHECK_THROWS_AS(mixed_moment_free(semicircle(8), semicircle(8), 8), RangeError);
}

TEST_CASE("mixed cumulants of free variables vanish")
{
    std::mt19937_64 rng(11);
    const MomentSequence a(random_law(rng, 6));
    const MomentSequence b(random_law(rng, 6));
    oracle::FreeWordMoments oracle({a.values(), b.values()});
    const auto ka = cumulants_from_moments(a, 5);
    for (int n = 2; n <= 5; ++n)
    {
        for (int mask = 0; mask < (1 << n); ++mask)
        {
            std::vector<int> vars;
            for (int i = 0; i < n; ++i)
            {
                vars.push_back((mask >> i) & 1);
            }
            const WordMoment word = [&](const std::vector<int>& pos) {
                std::vector<int> sub;
                for (int p : pos)
                {
                    sub.push_back(vars[static_cast<std::size_t>(p - 1)]);
                }
                return oracle.expectation(sub);
            };
            const double k = word_cumulant(word, n);
            if (mask == 0)
            {
                CHECK(k == doctest::Approx(ka[n]).epsilon(1e-9));
            }
            else if (mask != (1 << n) - 1)
            {
                CHECK(std::abs(k) < 1e-9);
            }
        }
    }
}

TEST_CASE("geodesic sum equals the Kreweras sum")
{
    const MomentSequence a({0.5, 1.0});
    const MomentSequence b({-0.3, 2.0});
    const double three_terms = a[1] * a[1] * b[2] + a[2] * b[1] * b[1] - a[1] * a[1] * b[1] * b[1];
    CHECK(geodesic_mixed_moment(a, b, 2) == doctest::Approx(three_terms));
    CHECK(geodesic_mixed_moment(a, b, 1) == doctest::Approx(a[1] * b[1]));
    CHECK(geodesic_mixed_moment(semicircle(3), marchenko_pastur(1.0, 3), 3) ==
          doctest::Approx(mixed_moment_free(semicircle(3), marchenko_pastur(1.0, 3), 3)));

    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 20; ++trial)
    {
        const MomentSequence x(random_law(rng, 6));
        const MomentSequence y(random_law(rng, 6));
        for (int n = 1; n <= 6; ++n)
        {
            CHECK(std::abs(geodesic_mixed_moment(x, y, n) - mixed_moment_free(x, y, n)) < 1e-9);
        }
    }
    CHECK(weingarten_phi(nc::Permutation::identity(3)) == 1.0);
    CHECK(weingarten_phi(nc::Permutation({2, 1})) == -1.0);
    CHECK(weingarten_phi(nc::Permutation({2, 3, 1})) == 2.0);
    CHECK(weingarten_phi(nc::Permutation({2, 1, 4, 3})) == 1.0);
}

TEST_CASE("semicircular families")
{
    const auto c = CovarianceMatrix({{1.0, 0.3}, {0.3, 2.0}});
    CHECK(semicircle_family_moment(c, {0, 1}) == doctest::Approx(0.3));
    CHECK(semicircle_family_moment(c, {1, 0}) == doctest::Approx(0.3));
    const auto id = CovarianceMatrix::identity(2);
    CHECK(semicircle_family_moment(id, {0, 0, 0, 0}) == 2.0);
    CHECK(semicircle_family_moment(id, {0, 1, 0, 1}) == 0.0);
    CHECK(semicircle_family_moment(id, {0, 1, 1, 0}) == 1.0);
    CHECK(semicircle_family_moment(id, {0, 1, 0}) == 0.0);

    const auto one = CovarianceMatrix::identity(1);
    for (int n = 2; n <= 12; n += 2)
    {
        CHECK(semicircle_family_moment(one, std::vector<int>(static_cast<std::size_t>(n), 0)) ==
              static_cast<double>(nc::catalan(n / 2)));
    }

    // x_i = sum_j A_ij s_j for a standard family s has covariance A A^T.
    const double amat[2][2] = {{1.0, 0.5}, {-0.7, 2.0}};
    const auto cov = CovarianceMatrix({{amat[0][0] * amat[0][0] + amat[0][1] * amat[0][1],
                                        amat[0][0] * amat[1][0] + amat[0][1] * amat[1][1]},
                                       {amat[0][0] * amat[1][0] + amat[0][1] * amat[1][1],
                                        amat[1][0] * amat[1][0] + amat[1][1] * amat[1][1]}});
    for (const auto& word : {std::vector<int>{0, 1, 1, 0}, {0, 1, 0, 1}, {1, 1, 0, 0, 1, 0}})
    {
        const int len = static_cast<int>(word.size());
        double expanded = 0.0;
        for (int mask = 0; mask < (1 << len); ++mask)
        {
            std::vector<int> inner;
            double coeff = 1.0;
            for (int p = 0; p < len; ++p)
            {
                const int j = (mask >> p) & 1;
                inner.push_back(j);
                coeff *= amat[word[static_cast<std::size_t>(p)]][j];
            }
            expanded += coeff * semicircle_family_moment(id, inner);
        }
        CHECK(semicircle_family_moment(cov, word) == doctest::Approx(expanded).epsilon(1e-12));
    }

    CHECK_THROWS_AS(CovarianceMatrix({{1.0, 0.2}, {0.1, 1.0}}), ArgumentError);
    CHECK_THROWS_AS(CovarianceMatrix({{1.0, 2.0}, {2.0, 1.0}}), ArgumentError);
    CHECK_THROWS_AS(semicircle_family_moment(id, {0, 2}), RangeError);
    CHECK_THROWS_AS(semicircle_family_moment(one, std::vector<int>(14, 0)), RangeError);
}

TEST_CASE("Haar unitary cumulants and moments")
{
    CHECK(haar_cumulant(haar_word("us")) == 1.0);
    CHECK(haar_cumulant(haar_word("usus")) == -1.0);
    CHECK(haar_cumulant(haar_word("uuss")) == 0.0);
    CHECK(haar_cumulant(haar_word("sususu")) == 2.0);
    CHECK(haar_cumulant(haar_word("u")) == 0.0);

    CHECK(haar_moment({}) == 1.0);
    for (int k = 1; k <= 6; ++k)
    {
        CHECK(haar_moment(haar_word(std::string(static_cast<std::size_t>(k), 'u'))) == 0.0);
    }
    CHECK(haar_moment(haar_word("usus")) == doctest::Approx(1.0));
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 30; ++trial)
    {
        std::string w = "uuuuusssss";
        std::shuffle(w.begin(), w.end(), rng);
        CHECK(haar_moment(haar_word(w)) == doctest::Approx(1.0));
    }
    CHECK(haar_moment(haar_word("uusuuss")) == 0.0);
}

TEST_CASE("cumulants of X*X from alternating cumulants")
{
    CHECK(xxstar_cumulants_from_alternating({0.7})[1] == doctest::Approx(0.7));
    const auto k2 = xxstar_cumulants_from_alternating({0.7, 0.4});
    CHECK(k2[2] == doctest::Approx(0.4 + 0.49));

    // Haar unitary: u*u = 1 has k_1 = 1 and no higher cumulants.
    std::vector<double> a;
    for (int s = 1; s <= 9; ++s)
    {
        std::string w;
        for (int i = 0; i < s; ++i)
        {
            w += "su";
        }
        a.push_back(static_cast<double>(nc::mobius_full_interval(s)));
        if (s <= 8)
        {
            CHECK(haar_cumulant(haar_word(w)) == a.back());
        }
    }
    const auto k = xxstar_cumulants_from_alternating(a);
    for (int n = 1; n <= 9; ++n)
    {
        CHECK(k[n] == doctest::Approx(n == 1 ? 1.0 : 0.0).scale(1.0));
    }

    const std::vector<double> orig{0.3, -0.2, 0.5, 1.1, -0.4};
    const auto back = alternating_from_xxstar_cumulants(xxstar_cumulants_from_alternating(orig));
    for (std::size_t i = 0; i < orig.size(); ++i)
    {
        CHECK(back[i] == doctest::Approx(orig[i]).scale(1.0));
    }
}
