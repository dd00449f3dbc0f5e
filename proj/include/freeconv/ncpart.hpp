#pragma once

// Exact combinatorics of set partitions, pairings, and permutations of {1..n}:
// the non-crossing lattice NC(n), its Kreweras complement and Moebius function,
// and the correspondence between NC(n) and geodesic permutations.

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace freeconv::nc {

using Block = std::vector<int>;

/// Partition of the ground set {1..n}.
///
/// Stored canonically: every block is strictly increasing and blocks are
/// ordered by their minimal element, so structural equality is partition
/// equality.
class SetPartition
{
  public:
    SetPartition(int n, std::vector<Block> blocks);

    /// 0_n: all singletons.
    static SetPartition discrete(int n);
    /// 1_n: a single block.
    static SetPartition full(int n);
    /// Build from a restricted-growth label vector (label[i] = block of element i+1).
    static SetPartition from_labels(const std::vector<int>& labels);
    /// Parse canonical block notation, e.g. "{1,4}{2,3}".
    static SetPartition parse(std::string_view text);

    int size() const { return n_; }
    const std::vector<Block>& blocks() const { return blocks_; }
    std::size_t block_count() const { return blocks_.size(); }

    /// 0-based block index of every element, indexed by element-1.
    std::vector<int> labels() const;

    std::string to_string() const;

    friend bool operator==(const SetPartition&, const SetPartition&) = default;
    friend auto operator<=>(const SetPartition&, const SetPartition&) = default;

  private:
    int n_;
    std::vector<Block> blocks_;
};

/// Bijection of {1..n}; composition is right-to-left: (s*r)(x) = s(r(x)).
class Permutation
{
  public:
    explicit Permutation(std::vector<int> images);

    static Permutation identity(int n);
    /// The long cycle (1 2 ... n).
    static Permutation long_cycle(int n);
    /// Permutation whose cycles are the given blocks, each traversed in increasing order.
    static Permutation from_blocks(const SetPartition& p);

    int size() const { return static_cast<int>(images_.size()); }
    int operator()(int i) const { return images_[static_cast<std::size_t>(i - 1)]; }
    const std::vector<int>& images() const { return images_; }

    /// Disjoint cycles, each starting at its smallest element, ordered by that element.
    std::vector<std::vector<int>> cycles() const;
    int cycle_count() const;
    /// Minimal number of transpositions: n - #cycles.
    int length() const { return size() - cycle_count(); }

    /// Cycle notation including fixed points, e.g. "(1 3)(2)".
    std::string to_string() const;

    friend bool operator==(const Permutation&, const Permutation&) = default;

  private:
    std::vector<int> images_;
};

Permutation multiply(const Permutation& s, const Permutation& r);
Permutation inverse(const Permutation& s);
/// Set partition formed by the cycles of s.
SetPartition cycle_partition(const Permutation& s);

/// Conjugacy class of a permutation in S_q, as a weakly decreasing list of cycle lengths.
struct IntegerPartitionClass
{
    std::vector<int> parts;

    IntegerPartitionClass() = default;
    explicit IntegerPartitionClass(std::vector<int> parts);

    static IntegerPartitionClass cycle_type(const Permutation& s);

    int weight() const;
    int length() const { return static_cast<int>(parts.size()); }

    friend bool operator==(const IntegerPartitionClass&, const IntegerPartitionClass&) = default;
};

// --- counting -------------------------------------------------------------

inline constexpr int kMaxCatalanIndex = 30;
inline constexpr int kMaxNcEnumeration = 14;
inline constexpr int kMaxPairingEnumeration = 16;

/// C_k, exact for 0 <= k <= 30.
std::int64_t catalan(int k);
/// mu(0_k, 1_k) in NC(k): (-1)^(k-1) C_(k-1).
std::int64_t mobius_full_interval(int k);

// --- predicates and enumeration ---------------------------------------------

bool is_noncrossing(const SetPartition& p);
bool is_pairing(const SetPartition& p);

/// NC(n) in lexicographic order of restricted-growth labels, 1 <= n <= 14.
std::vector<SetPartition> enumerate_nc(int n);
/// Non-crossing pairings of {1..n}; empty for odd n.
std::vector<SetPartition> enumerate_nc_pairings(int n);
/// All (n-1)!! pairings of {1..n}; empty for odd n, n <= 16.
std::vector<SetPartition> enumerate_all_pairings(int n);

// --- lattice ----------------------------------------------------------------

/// True iff every block of a lies inside some block of b.
bool refines(const SetPartition& a, const SetPartition& b);
/// Least upper bound in NC(n): overlap closure followed by merging crossing blocks.
SetPartition join(const SetPartition& a, const SetPartition& b);
/// Greatest lower bound: the common refinement.
SetPartition meet(const SetPartition& a, const SetPartition& b);

/// Kreweras complement, relabeled onto {1..n} (the point between i and i+1 becomes i).
SetPartition kreweras(const SetPartition& p);

/// Moebius function of NC(n) on the interval [a, b]; requires a refines b.
std::int64_t mobius_nc(const SetPartition& a, const SetPartition& b);

// --- permutations of pairings and geodesics -----------------------------------

/// #(pi gamma) for a pairing pi of {1..n} and gamma = (1 2 ... n).
int genus_cycle_count(const SetPartition& pairing);
/// Genus (1 + n/2 - #(pi gamma)) / 2 of the surface glued by a pairing.
int pairing_genus(const SetPartition& pairing);

/// Permutation with the blocks of a non-crossing partition as increasing cycles.
Permutation nc_to_geodesic_perm(const SetPartition& p);
/// |s| + |s^-1 gamma| == n - 1.
bool geodesic_test(const Permutation& s);

}  // namespace freeconv::nc
