#pragma once

// Moments and free cumulants on the non-crossing lattice: Moebius inversion,
// generalized moments, alternating moments of two free variables, semicircular
// families, and Haar-unitary cumulants.

#include <functional>
#include <vector>

#include "freeconv/ncpart.hpp"
#include "freeconv/series.hpp"

namespace freeconv::moments {

inline constexpr int kMaxLatticeOrder = 9;
inline constexpr int kMaxMixedOrder = 7;
inline constexpr int kMaxGeodesicOrder = 6;
inline constexpr int kMaxFamilyWord = 12;
inline constexpr int kMaxHaarWord = 16;

struct GeneralizedMoment
{
    nc::SetPartition partition;
    double value;
};

/// Joint moment of the subword at the given (increasing, 1-based) positions.
using WordMoment = std::function<double(const std::vector<int>& positions)>;

/// Free cumulants k_1..k_upto by Moebius inversion over NC(n); upto <= 9.
CumulantSequence cumulants_from_moments(const MomentSequence& m, int upto);
/// Same numbers through the R-transform; any order the moments support.
CumulantSequence cumulants_from_moments_series(const MomentSequence& m, int upto);

/// Moments m_1..m_upto as sums of k_pi over NC(n); upto <= 9.
MomentSequence moments_from_cumulants(const CumulantSequence& k, int upto);
/// Same numbers through the R-transform.
MomentSequence moments_from_cumulants_series(const CumulantSequence& k, int upto);

/// Product over blocks of m_|block|.
double generalized_moment(const MomentSequence& m, const nc::SetPartition& p);
/// Product over blocks of the joint moment of each block's subword.
double generalized_moment(const WordMoment& word, const nc::SetPartition& p);
GeneralizedMoment make_generalized_moment(const MomentSequence& m, const nc::SetPartition& p);

/// Product over blocks of k_|block|.
double generalized_cumulant(const CumulantSequence& k, const nc::SetPartition& p);
/// Joint free cumulant k_n of the whole word, by Moebius inversion of its moments; n <= 9.
double word_cumulant(const WordMoment& word, int n);

/// E(a b a b ... a b) with n copies of each of two free variables, as
/// sum over pi in NC(n) of k_pi(a) m_K(pi)(b); n <= 7.
double mixed_moment_free(const MomentSequence& a, const MomentSequence& b, int n);

/// The same moment as a sum over geodesic pairs alpha <= beta <= gamma in S_n
/// of m_alpha(a) m_(beta^-1 gamma)(b) phi(alpha^-1 beta), with the Weingarten
/// leading coefficients phi; n <= 6.
double geodesic_mixed_moment(const MomentSequence& a, const MomentSequence& b, int n);

/// Leading Weingarten coefficient of a permutation: product over cycles of
/// (-1)^(len-1) C_(len-1).
double weingarten_phi(const nc::Permutation& s);

/// Symmetric, nonnegative-definite real r x r matrix.
class CovarianceMatrix
{
  public:
    /// Rows of the matrix; throws ArgumentError if asymmetric or not PSD.
    explicit CovarianceMatrix(std::vector<std::vector<double>> c, double tol = 1e-10);

    static CovarianceMatrix identity(int r);

    int size() const { return static_cast<int>(c_.size()); }
    double operator()(int i, int j) const { return c_.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(j)); }
    double smallest_eigenvalue() const { return min_eig_; }

  private:
    std::vector<std::vector<double>> c_;
    double min_eig_ = 0.0;
};

/// Sum over non-crossing pairings of prod c_(i_p, i_q); indices are 0-based; length <= 12.
double semicircle_family_moment(const CovarianceMatrix& c, const std::vector<int>& word);

enum class HaarLetter
{
    U,
    UStar
};

/// (-1)^(n-1) C_(n-1) for an alternating word of length 2n, 0 otherwise.
double haar_cumulant(const std::vector<HaarLetter>& word);
/// Moment of a word in a Haar unitary and its adjoint.
double haar_moment(const std::vector<HaarLetter>& word);

/// k_n(X*X, ..., X*X) = sum over pi in NC(n) of prod a_|V| from the alternating
/// cumulants a_s = k_(2s)(X*, X, ..., X*, X); n <= 9.
CumulantSequence xxstar_cumulants_from_alternating(const std::vector<double>& a);
/// Triangular inverse of xxstar_cumulants_from_alternating.
std::vector<double> alternating_from_xxstar_cumulants(const CumulantSequence& k);

}  // namespace freeconv::moments
