#include "freeconv/moments.hpp"

#include <cmath>

#include "freeconv/errors.hpp"
#include "freeconv/linalg.hpp"

namespace freeconv::moments {

namespace {

// Words of a Haar unitary longer than this are evaluated by unitarity alone.
constexpr int kMaxHaarLatticeWord = 12;

void require_lattice_order(int n, int cap, const char* what)
{
    if (n < 1)
    {
        throw ArgumentError(std::string(what) + ": order must be at least 1");
    }
    if (n > cap)
    {
        throw RangeError(std::string(what) + ": order " + std::to_string(n) + " exceeds the lattice limit " +
                         std::to_string(cap));
    }
}

void require_moments(const MomentSequence& m, int n, const char* what)
{
    if (m.order() < n)
    {
        throw ArgumentError(std::string(what) + ": needs " + std::to_string(n) + " moments, got " +
                            std::to_string(m.order()));
    }
}

double product_over_cycles(const std::vector<std::vector<int>>& cycles, const MomentSequence& m)
{
    double v = 1.0;
    for (const auto& c : cycles)
    {
        v *= m[static_cast<int>(c.size())];
    }
    return v;
}

std::vector<int> cycle_lengths(const nc::Permutation& s)
{
    std::vector<int> out;
    for (const auto& c : s.cycles())
    {
        out.push_back(static_cast<int>(c.size()));
    }
    return out;
}

}  // namespace

CumulantSequence cumulants_from_moments(const MomentSequence& m, int upto)
{
    require_lattice_order(upto, kMaxLatticeOrder, "cumulants_from_moments");
    require_moments(m, upto, "cumulants_from_moments");
    std::vector<double> k(static_cast<std::size_t>(upto));
    for (int n = 1; n <= upto; ++n)
    {
        const auto top = nc::SetPartition::full(n);
        double s = 0.0;
        for (const auto& p : nc::enumerate_nc(n))
        {
            s += static_cast<double>(nc::mobius_nc(p, top)) * generalized_moment(m, p);
        }
        k[static_cast<std::size_t>(n - 1)] = s;
    }
    return CumulantSequence(std::move(k));
}

CumulantSequence cumulants_from_moments_series(const MomentSequence& m, int upto)
{
    if (upto < 1)
    {
        throw ArgumentError("cumulants_from_moments_series: order must be at least 1");
    }
    require_moments(m, upto, "cumulants_from_moments_series");
    return series::cumulants_from_R(series::moments_to_R(m.truncated(upto)));
}

MomentSequence moments_from_cumulants(const CumulantSequence& k, int upto)
{
    require_lattice_order(upto, kMaxLatticeOrder, "moments_from_cumulants");
    if (k.order() < upto)
    {
        throw ArgumentError("moments_from_cumulants: not enough cumulants");
    }
    std::vector<double> m(static_cast<std::size_t>(upto));
    for (int n = 1; n <= upto; ++n)
    {
        double s = 0.0;
        for (const auto& p : nc::enumerate_nc(n))
        {
            s += generalized_cumulant(k, p);
        }
        m[static_cast<std::size_t>(n - 1)] = s;
    }
    return MomentSequence(std::move(m));
}

MomentSequence moments_from_cumulants_series(const CumulantSequence& k, int upto)
{
    if (upto < 1 || k.order() < upto)
    {
        throw ArgumentError("moments_from_cumulants_series: not enough cumulants");
    }
    std::vector<double> head(k.values().begin(), k.values().begin() + upto);
    return series::R_to_moments(series::R_from_cumulants(CumulantSequence(std::move(head))));
}

double generalized_moment(const MomentSequence& m, const nc::SetPartition& p)
{
    double v = 1.0;
    for (const auto& b : p.blocks())
    {
        v *= m[static_cast<int>(b.size())];
    }
    return v;
}

double generalized_moment(const WordMoment& word, const nc::SetPartition& p)
{
    double v = 1.0;
    for (const auto& b : p.blocks())
    {
        v *= word(b);
    }
    return v;
}

GeneralizedMoment make_generalized_moment(const MomentSequence& m, const nc::SetPartition& p)
{
    return {p, generalized_moment(m, p)};
}

double generalized_cumulant(const CumulantSequence& k, const nc::SetPartition& p)
{
    double v = 1.0;
    for (const auto& b : p.blocks())
    {
        v *= k[static_cast<int>(b.size())];
    }
    return v;
}

double word_cumulant(const WordMoment& word, int n)
{
    require_lattice_order(n, kMaxLatticeOrder, "word_cumulant");
    const auto top = nc::SetPartition::full(n);
    double s = 0.0;
    for (const auto& p : nc::enumerate_nc(n))
    {
        s += static_cast<double>(nc::mobius_nc(p, top)) * generalized_moment(word, p);
    }
    return s;
}

double mixed_moment_free(const MomentSequence& a, const MomentSequence& b, int n)
{
    require_lattice_order(n, kMaxMixedOrder, "mixed_moment_free");
    require_moments(a, n, "mixed_moment_free");
    require_moments(b, n, "mixed_moment_free");
    const auto ka = cumulants_from_moments(a, n);
    double s = 0.0;
    for (const auto& p : nc::enumerate_nc(n))
    {
        s += generalized_cumulant(ka, p) * generalized_moment(b, nc::kreweras(p));
    }
    return s;
}

double weingarten_phi(const nc::Permutation& s)
{
    double v = 1.0;
    for (int len : cycle_lengths(s))
    {
        v *= static_cast<double>(nc::mobius_full_interval(len));
    }
    return v;
}

double geodesic_mixed_moment(const MomentSequence& a, const MomentSequence& b, int n)
{
    require_lattice_order(n, kMaxGeodesicOrder, "geodesic_mixed_moment");
    require_moments(a, n, "geodesic_mixed_moment");
    require_moments(b, n, "geodesic_mixed_moment");
    const auto gamma = nc::Permutation::long_cycle(n);
    std::vector<nc::Permutation> perms;
    for (const auto& p : nc::enumerate_nc(n))
    {
        perms.push_back(nc::nc_to_geodesic_perm(p));
    }
    double s = 0.0;
    for (const auto& alpha : perms)
    {
        const auto alpha_inv = nc::inverse(alpha);
        for (const auto& beta : perms)
        {
            const auto step = nc::multiply(alpha_inv, beta);
            const auto rest = nc::multiply(nc::inverse(beta), gamma);
            if (alpha.length() + step.length() + rest.length() != n - 1)
            {
                continue;
            }
            s += product_over_cycles(alpha.cycles(), a) * product_over_cycles(rest.cycles(), b) * weingarten_phi(step);
        }
    }
    return s;
}

CovarianceMatrix::CovarianceMatrix(std::vector<std::vector<double>> c, double tol) : c_(std::move(c))
{
    const auto r = c_.size();
    if (r == 0)
    {
        throw ArgumentError("covariance matrix is empty");
    }
    std::vector<double> flat;
    double scale = 1.0;
    for (const auto& row : c_)
    {
        if (row.size() != r)
        {
            throw ArgumentError("covariance matrix is not square");
        }
        for (double x : row)
        {
            scale = std::max(scale, std::abs(x));
        }
        flat.insert(flat.end(), row.begin(), row.end());
    }
    for (std::size_t i = 0; i < r; ++i)
    {
        for (std::size_t j = i + 1; j < r; ++j)
        {
            if (std::abs(c_[i][j] - c_[j][i]) > tol * scale)
            {
                throw ArgumentError("covariance matrix is not symmetric");
            }
        }
    }
    min_eig_ = linalg::symmetric_eigenvalues(std::move(flat), static_cast<int>(r)).front();
    if (min_eig_ < -tol * scale)
    {
        throw ArgumentError("covariance matrix is not nonnegative definite (smallest eigenvalue " +
                            std::to_string(min_eig_) + ")");
    }
}

CovarianceMatrix CovarianceMatrix::identity(int r)
{
    std::vector<std::vector<double>> c(static_cast<std::size_t>(r), std::vector<double>(static_cast<std::size_t>(r)));
    for (int i = 0; i < r; ++i)
    {
        c[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1.0;
    }
    return CovarianceMatrix(std::move(c));
}

double semicircle_family_moment(const CovarianceMatrix& c, const std::vector<int>& word)
{
    const int len = static_cast<int>(word.size());
    if (len > kMaxFamilyWord)
    {
        throw RangeError("semicircle_family_moment: word longer than " + std::to_string(kMaxFamilyWord));
    }
    for (int i : word)
    {
        if (i < 0 || i >= c.size())
        {
            throw RangeError("semicircle_family_moment: index " + std::to_string(i) + " outside the family");
        }
    }
    if (len == 0)
    {
        return 1.0;
    }
    double s = 0.0;
    for (const auto& p : nc::enumerate_nc_pairings(len))
    {
        double v = 1.0;
        for (const auto& b : p.blocks())
        {
            v *= c(word[static_cast<std::size_t>(b[0] - 1)], word[static_cast<std::size_t>(b[1] - 1)]);
        }
        s += v;
    }
    return s;
}

double haar_cumulant(const std::vector<HaarLetter>& word)
{
    const int len = static_cast<int>(word.size());
    if (len > kMaxHaarWord)
    {
        throw RangeError("haar_cumulant: word longer than " + std::to_string(kMaxHaarWord));
    }
    if (len == 0 || len % 2 != 0)
    {
        return 0.0;
    }
    for (int i = 0; i + 1 < len; ++i)
    {
        if (word[static_cast<std::size_t>(i)] == word[static_cast<std::size_t>(i + 1)])
        {
            return 0.0;
        }
    }
    return static_cast<double>(nc::mobius_full_interval(len / 2));
}

double haar_moment(const std::vector<HaarLetter>& word)
{
    const int len = static_cast<int>(word.size());
    int balance = 0;
    for (auto l : word)
    {
        balance += l == HaarLetter::U ? 1 : -1;
    }
    if (balance != 0)
    {
        return 0.0;
    }
    if (len == 0)
    {
        return 1.0;
    }
    if (len > kMaxHaarLatticeWord)
    {
        return 1.0;  // a balanced word in a unitary and its adjoint is the identity
    }
    double s = 0.0;
    for (const auto& p : nc::enumerate_nc(len))
    {
        double v = 1.0;
        for (const auto& b : p.blocks())
        {
            std::vector<HaarLetter> sub;
            for (int e : b)
            {
                sub.push_back(word[static_cast<std::size_t>(e - 1)]);
            }
            v *= haar_cumulant(sub);
            if (v == 0.0)
            {
                break;
            }
        }
        s += v;
    }
    return s;
}

CumulantSequence xxstar_cumulants_from_alternating(const std::vector<double>& a)
{
    const int n = static_cast<int>(a.size());
    require_lattice_order(n, kMaxLatticeOrder, "xxstar_cumulants_from_alternating");
    // Formally the moment-cumulant relation with a in the role of cumulants.
    return CumulantSequence(moments_from_cumulants(CumulantSequence(a), n).values());
}

std::vector<double> alternating_from_xxstar_cumulants(const CumulantSequence& k)
{
    const int n = k.order();
    require_lattice_order(n, kMaxLatticeOrder, "alternating_from_xxstar_cumulants");
    std::vector<double> a;
    for (int j = 1; j <= n; ++j)
    {
        // k_j = a_j + (sum over the other partitions, which only involve a_1..a_(j-1)).
        a.push_back(0.0);
        const double rest = xxstar_cumulants_from_alternating(a)[j];
        a.back() = k[j] - rest;
    }
    return a;
}

}  // namespace freeconv::moments
