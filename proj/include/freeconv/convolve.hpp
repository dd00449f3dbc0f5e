#pragma once

// Free additive and multiplicative convolution on truncated moment sequences,
// free compression, the additive semigroup, limit theorems, and the right
// edge of free multiplicative powers.

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "freeconv/series.hpp"

namespace freeconv::convolve {

using Complex = std::complex<double>;

struct ConvolutionResult
{
    MomentSequence moments;
    CumulantSequence cumulants;
    std::vector<std::string> provenance;
    /// max |m_k - moments_from(cumulants_from(m))_k|, relative to max(1, |m_k|).
    double roundtrip_residual = 0.0;
};

/// Wraps a moment sequence with its free cumulants (series route).
ConvolutionResult make_result(MomentSequence m, std::vector<std::string> provenance);

/// Cumulants add. Uses the first `order` moments of each input.
ConvolutionResult free_add(const MomentSequence& a, const MomentSequence& b, int order = kDefaultOrder);
/// S-transforms multiply; both means must be nonzero.
ConvolutionResult free_mul(const MomentSequence& a, const MomentSequence& b, int order = kDefaultOrder);

/// Law of P A P under the original expectation, P a free projection of trace t.
/// S route when m_1 != 0; otherwise t times the rescaled moments (the atom at 0 carries 1 - t).
ConvolutionResult compress(const MomentSequence& a, double t, int order = kDefaultOrder);
/// Same element with the expectation divided by t: cumulants k_n t^(n-1), i.e. R(tz).
ConvolutionResult compress_rescaled(const MomentSequence& a, double t, int order = kDefaultOrder);

/// mu_t with R_t = t R; t >= 0.
ConvolutionResult semigroup_mu_t(const MomentSequence& a, double t, int order = kDefaultOrder);

/// Point-mass discretization of the Levy-Khintchine pair (alpha, sigma).
struct PhiRepresentation
{
    double alpha = 0.0;
    std::vector<std::pair<double, double>> sigma;  // (s_j, w_j), w_j >= 0
};

/// alpha + sum_j w_j (1 + s_j z)/(z - s_j); Im z > 0.
Complex phi_eval(const PhiRepresentation& rep, Complex z);

/// k_j(S_n / sqrt n) = n^(1 - j/2) k_j(X) for X with mean 0 and variance 1.
CumulantSequence clt_scaled_cumulants(const MomentSequence& a, int n, int order = kDefaultOrder);

/// n-fold free sum of Bernoulli(lambda/n); requires lambda/n < 1.
ConvolutionResult free_poisson_limit(double lambda, long long n, int order = kDefaultOrder);

/// A mean-one law on [0, inf) with closed-form psi^(-1) and its log-derivative.
struct PsiLaw
{
    std::string name;
    double variance;
    std::function<double(double)> psi_inverse;
    std::function<double(double)> dlog_psi_inverse;
    std::function<double(double)> psi;
};

/// Marchenko-Pastur with lambda = 1.
PsiLaw psi_law_marchenko_pastur();
/// Bernoulli(p) divided by p, so that the mean is one.
PsiLaw psi_law_bernoulli(double p);

struct SupportEdge
{
    double u;               // critical point u_n
    double right_edge;      // L_n
    double edge_over_n;     // L_n / n
};

/// Right edge of the n-th free multiplicative power: u_n solves
/// u(1+u) d/du log psi^(-1)(u) = 1 - 1/n, and L_n = 1/z_n with
/// z_n = ((1+u)/u)^(n-1) psi^(-1)(u)^n.
SupportEdge product_support(const PsiLaw& law, double n);

}  // namespace freeconv::convolve
