#pragma once

// Fuglede-Kadison determinants of matrices, the log-potential L(lambda), and
// radial Brown measures of R-diagonal elements from the S-transform of X*X.

#include <functional>
#include <vector>

#include "freeconv/catalog.hpp"
#include "freeconv/linalg.hpp"
#include "freeconv/rmtlab.hpp"
#include "freeconv/series.hpp"

namespace freeconv::brown {

using linalg::Complex;
using linalg::ComplexMatrix;

inline constexpr int kDefaultRadialGrid = 512;

/// (1/2N) sum log eig(X*X), -inf when X is singular.
double log_fk_det(const ComplexMatrix& x);
/// exp of log_fk_det: |Det X|^(1/N) through the singular values; 0 for singular X.
double fk_det(const ComplexMatrix& x);
/// |Det X|^(1/N) by LU, the independent route.
double fk_det_lu(const ComplexMatrix& x);

/// L(lambda) = log fk_det(X - lambda); -inf on an eigenvalue.
double L_function(const ComplexMatrix& x, Complex lambda);

/// Mass that (1/2pi) Laplacian(L) puts in the square of half-width `half` around
/// `center`, from the discrete Laplacian on a cells x cells lattice.
double laplacian_mass(const ComplexMatrix& x, Complex center, double half, int cells);

/// S(z) of sigma_X = law of X*X, for real z in (w - 1, 0]. +inf is allowed at z = w - 1.
using SEvaluator = std::function<double(double)>;

struct RadialJump
{
    double r;
    double mass;
};

struct RadialMeasure
{
    double atom_at_zero = 0.0;
    /// Strictly increasing radii with F(r) at each; r[0] = 0 unless truncated.
    std::vector<double> r;
    std::vector<double> F;
    /// dF/dr at each radius, three-point differences; meaningless next to a jump.
    std::vector<double> rho;
    /// Radii where F jumps (rotation-invariant mass on a circle).
    std::vector<RadialJump> jumps;
    /// Set when the grid had to stop short of t = w (series outside its radius).
    bool truncated = false;

    double r_max() const { return r.empty() ? 0.0 : r.back(); }
};

/// F^(-1)(t) = 1 / sqrt(S(t - 1)) on a uniform grid of t in [w, 1] with
/// grid_size points. Throws ArgumentError if the radii decrease.
RadialMeasure hl_radial(const SEvaluator& s, double w, int grid_size = kDefaultRadialGrid);

/// Same, with S built from the first `order` moments of sigma_X. Grid points
/// where the last series term exceeds 1e-9 are dropped (truncated flag).
RadialMeasure hl_from_moments(const MomentSequence& sigma_moments, double w, int order,
                              int grid_size = kDefaultRadialGrid);

/// S evaluator from a catalog law's closed form.
SEvaluator s_evaluator(const catalog::DistributionSpec& sigma);

struct SingularValueReport
{
    double sup_distance;
    std::vector<double> squared_singular_values;
};

using HermitianSampler = std::function<ComplexMatrix(int, rng::PhiloxStream&)>;

/// Pools eig((U H)*(U H)) over cfg.reps samples (Haar U, H from `sampler`, same
/// stream per rep) and measures the sup-distance of the empirical CDF to `reference`.
SingularValueReport singular_value_check(const HermitianSampler& sampler, const catalog::DistributionSpec& reference,
                                         const rmtlab::EnsembleConfig& cfg);

}  // namespace freeconv::brown
