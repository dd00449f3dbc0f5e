#pragma once

// Truncated formal power series and the transform algebra linking moments,
// the Cauchy transform G, its inverse K, the R-transform, psi, and the
// S-transform.

#include <complex>
#include <vector>

namespace freeconv {

inline constexpr int kDefaultOrder = 12;
inline constexpr int kMinOrder = 4;
inline constexpr int kMaxOrder = 24;

/// Moments m_1..m_M of a single variable; m_0 = 1 is implicit.
class MomentSequence
{
  public:
    MomentSequence() = default;
    explicit MomentSequence(std::vector<double> m) : m_(std::move(m)) {}

    int order() const { return static_cast<int>(m_.size()); }
    /// m_k for 0 <= k <= order().
    double operator[](int k) const { return k == 0 ? 1.0 : m_.at(static_cast<std::size_t>(k - 1)); }
    const std::vector<double>& values() const { return m_; }
    MomentSequence truncated(int order) const;

    double mean() const { return (*this)[1]; }
    double variance() const { return (*this)[2] - mean() * mean(); }

  private:
    std::vector<double> m_;
};

/// Free cumulants k_1..k_M.
class CumulantSequence
{
  public:
    CumulantSequence() = default;
    explicit CumulantSequence(std::vector<double> k) : k_(std::move(k)) {}

    int order() const { return static_cast<int>(k_.size()); }
    /// k_n for 1 <= n <= order().
    double operator[](int n) const { return k_.at(static_cast<std::size_t>(n - 1)); }
    const std::vector<double>& values() const { return k_; }

  private:
    std::vector<double> k_;
};

namespace series {

/// Coefficients c_0..c_M of a power series known modulo z^(M+1).
///
/// Binary operations truncate to the smaller of the two orders; nothing ever
/// extends the order silently.
class TruncatedSeries
{
  public:
    explicit TruncatedSeries(std::vector<double> coeffs);

    static TruncatedSeries zero(int order);
    static TruncatedSeries constant(double c, int order);
    /// The series z.
    static TruncatedSeries identity(int order);

    int order() const { return static_cast<int>(c_.size()) - 1; }
    double operator[](int k) const { return k <= order() ? c_[static_cast<std::size_t>(k)] : 0.0; }
    const std::vector<double>& coeffs() const { return c_; }

    TruncatedSeries truncated(int order) const;

    double evaluate(double z) const;
    std::complex<double> evaluate(std::complex<double> z) const;

  private:
    std::vector<double> c_;
};

TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries operator*(double s, const TruncatedSeries& a);

/// 1/f; requires c_0 != 0.
TruncatedSeries reciprocal(const TruncatedSeries& f);
/// f(g(z)); requires g.c_0 == 0. Order is min of the two orders.
TruncatedSeries compose(const TruncatedSeries& f, const TruncatedSeries& g);
/// Compositional inverse; requires c_0 == 0 and c_1 != 0.
TruncatedSeries revert(const TruncatedSeries& f);
TruncatedSeries derivative(const TruncatedSeries& f);
/// Principal square root; requires c_0 > 0.
TruncatedSeries sqrt(const TruncatedSeries& f);

/// f(z)/z^k; the first k coefficients must vanish (they are dropped).
TruncatedSeries divide_by_power(const TruncatedSeries& f, int k);
/// z^k f(z), with the order raised by k.
TruncatedSeries multiply_by_power(const TruncatedSeries& f, int k);

// --- transforms -------------------------------------------------------------

/// R(u) = K(u) - 1/u with coefficients c_0..c_(M-1); c_(n-1) is the free cumulant k_n.
TruncatedSeries moments_to_R(const MomentSequence& m);
/// Inverse of moments_to_R: moments m_1..m_(order+1).
MomentSequence R_to_moments(const TruncatedSeries& r);

/// S(z) = ((1+z)/z) psi^(-1)(z), a power series of order M-1; requires m_1 != 0.
TruncatedSeries moments_to_S(const MomentSequence& m);
/// Inverse of moments_to_S; requires s.c_0 != 0.
MomentSequence S_to_moments(const TruncatedSeries& s);

/// S from R through (z R(z))^(-1) = z S(z); requires k_1 = r.c_0 != 0.
TruncatedSeries S_from_R(const TruncatedSeries& r);
TruncatedSeries R_from_S(const TruncatedSeries& s);

/// For a law whose odd cumulants vanish (k_2 != 0): the power series T(z) = z S(z)^2.
/// S itself is multivalued there; T is branch independent.
TruncatedSeries symmetric_s_square(const TruncatedSeries& r);

CumulantSequence cumulants_from_R(const TruncatedSeries& r);
TruncatedSeries R_from_cumulants(const CumulantSequence& k);

}  // namespace series
}  // namespace freeconv
