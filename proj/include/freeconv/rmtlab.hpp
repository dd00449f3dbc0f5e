#pragma once

// Random-matrix Monte Carlo (GUE, Haar unitaries) and the exact finite-N
// predictions it is compared against: the genus expansion of Gaussian traces
// and Weingarten sums for Haar entries.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "freeconv/linalg.hpp"
#include "freeconv/ncpart.hpp"
#include "freeconv/rng.hpp"

namespace freeconv::rmtlab {

using linalg::Complex;
using linalg::ComplexMatrix;

inline constexpr int kMaxGenusWord = 10;
inline constexpr int kMaxCensusWord = 12;
inline constexpr int kMaxWeingartenOrder = 3;

/// Hermitian, E|a_ij|^2 = 1/N, E a_ij^2 = 0 off the diagonal, real N(0, 1/N) diagonal.
ComplexMatrix sample_gue(int n, rng::PhiloxStream& stream);
/// Complex Ginibre matrix with iid entries, E|g_ij|^2 = 1.
ComplexMatrix sample_ginibre(int n, rng::PhiloxStream& stream);
/// QR of a Ginibre matrix with column j multiplied by the phase of r_jj.
ComplexMatrix sample_haar_unitary(int n, rng::PhiloxStream& stream);

struct MCEstimate
{
    double mean = 0.0;
    double stderr_ = 0.0;
    long long reps = 0;
    std::uint64_t seed = 0;
};

/// Mean and standard error of per-rep values (pairwise summation, rep order).
MCEstimate summarize(const std::vector<double>& values, std::uint64_t seed);

struct Letter
{
    enum class Kind
    {
        Gaussian,       // A_k: independent GUE per slot, fresh every rep
        Unitary,        // U: one Haar unitary per rep
        UnitaryStar,    // U*
        Deterministic,  // D_k: fixed matrix from the config
    };
    Kind kind;
    int slot = 1;
};

/// Letters of a trace word, e.g. "A D1 A D1", "A2 U B1 U*". Tokens: A, A<k>
/// (Gaussian slot k, A = A1), U, U*, D<k> or B<k> (deterministic slot k).
struct TraceWord
{
    std::vector<Letter> letters;

    static TraceWord parse(const std::string& text);
    std::string to_string() const;
    bool is_random() const;
};

struct EnsembleConfig
{
    int n = 2;
    long long reps = 1;
    std::uint64_t seed = 0;
    /// Deterministic matrices by slot.
    std::map<int, ComplexMatrix> deterministic;
    int threads = 1;
};

/// Real part of tr(word) averaged over reps; rep r draws from stream r of the seed.
MCEstimate mc_trace(const TraceWord& word, const EnsembleConfig& cfg);

/// E tr(A D^1 A D^2 ... A D^n) for GUE A: sum over pairings pi of
/// N^(#(pi gamma) - n/2 - 1) tr_(pi gamma)(D^1, ..., D^n). An empty list means all D = I
/// with the dimension taken from `dim`.
double genus_expansion_exact(const std::vector<ComplexMatrix>& d, int n, int dim = 0);

/// Number of pairings of {1..n} of each genus.
std::map<int, long long> genus_census(int n);

struct WeingartenLeading
{
    int exponent;
    double coefficient;
};

/// Wg(N, alpha) ~ coefficient * N^exponent, with exponent #(alpha) - 2q and
/// coefficient prod over parts of (-1)^(l-1) C_(l-1).
WeingartenLeading weingarten_leading(const nc::IntegerPartitionClass& alpha);
/// Exact Wg(N, alpha) for q <= 3.
double weingarten_exact_smallq(int n, const nc::IntegerPartitionClass& alpha);

/// Index tuple (i_1 j_1, ..., i_q j_q; i'_1 j'_1, ..., i'_q j'_q), 1-based.
struct HaarEntryPattern
{
    std::vector<int> i, j, ip, jp;
};

/// E u_(i1 j1)...u_(iq jq) conj(u_(i'1 j'1))...conj(u_(i'q j'q)) by the Weingarten sum.
double haar_entry_moment_exact(int n, const HaarEntryPattern& p);
/// Monte Carlo of the same product (real part) for several patterns from shared samples.
std::vector<MCEstimate> haar_entry_moment_mc(int n, const std::vector<HaarEntryPattern>& patterns, long long reps,
                                             std::uint64_t seed);

/// Monte Carlo of tr(U^k) (real part) for k = 1..kmax.
std::vector<MCEstimate> haar_power_traces(int n, int kmax, long long reps, std::uint64_t seed);

struct ConjugationReport
{
    MCEstimate estimate;
    double prediction;
    double z;
};

/// tr((A U B U*)^n) by Monte Carlo against the free prediction built from the
/// empirical moments tr(A^k), tr(B^k) through the geodesic permutation sum.
ConjugationReport conjugation_experiment(const ComplexMatrix& a, const ComplexMatrix& b, int n,
                                         const EnsembleConfig& cfg);

struct Histogram
{
    double lo;
    double hi;
    std::vector<long long> counts;
    std::vector<double> eigenvalues;
};

/// Jacobi eigenvalues of H binned on [lo, hi]; lo == hi picks the eigenvalue range.
Histogram empirical_spectrum(const ComplexMatrix& h, int bins, double lo = 0.0, double hi = 0.0);

/// Eigenvalues of `reps` GUE samples of size n, pooled; rep r uses stream r.
std::vector<double> pooled_gue_eigenvalues(int n, int reps, std::uint64_t seed, int threads = 1);

/// Runs body(r) for r in [0, reps) on up to `threads` workers; results must be
/// written to per-rep slots so the outcome is order independent.
template <typename Body>
void for_each_rep(long long reps, int threads, Body body);

}  // namespace freeconv::rmtlab

#include <algorithm>
#include <exception>
#include <thread>

namespace freeconv::rmtlab {

template <typename Body>
void for_each_rep(long long reps, int threads, Body body)
{
    const long long workers = std::max(1LL, std::min<long long>(threads, reps));
    if (workers == 1)
    {
        for (long long r = 0; r < reps; ++r)
        {
            body(r);
        }
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    for (long long w = 0; w < workers; ++w)
    {
        pool.emplace_back([=, &body, &errors] {
            try
            {
                for (long long r = w; r < reps; r += workers)
                {
                    body(r);
                }
            }
            catch (...)
            {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& t : pool)
    {
        t.join();
    }
    for (const auto& e : errors)
    {
        if (e)
        {
            std::rethrow_exception(e);
        }
    }
}

}  // namespace freeconv::rmtlab
