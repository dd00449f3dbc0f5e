#include "freeconv/ncpart.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>

#include "freeconv/errors.hpp"

namespace freeconv::nc {

namespace {

void require_same_size(const SetPartition& a, const SetPartition& b)
{
    if (a.size() != b.size())
    {
        throw ArgumentError("partitions live on ground sets of different size");
    }
}

void require_noncrossing(const SetPartition& p, const char* what)
{
    if (!is_noncrossing(p))
    {
        throw ArgumentError(std::string(what) + ": partition " + p.to_string() + " has a crossing");
    }
}

struct UnionFind
{
    std::vector<int> parent;

    explicit UnionFind(int n) : parent(static_cast<std::size_t>(n))
    {
        std::iota(parent.begin(), parent.end(), 0);
    }

    int find(int x)
    {
        while (parent[static_cast<std::size_t>(x)] != x)
        {
            auto& px = parent[static_cast<std::size_t>(x)];
            px = parent[static_cast<std::size_t>(px)];
            x = px;
        }
        return x;
    }

    void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
};

SetPartition partition_from_roots(UnionFind& uf, int n)
{
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
    {
        labels[static_cast<std::size_t>(i)] = uf.find(i);
    }
    return SetPartition::from_labels(labels);
}

// Indices (into p.blocks()) of two crossing blocks, or {-1,-1}.
std::pair<int, int> find_crossing(const SetPartition& p)
{
    const auto& bl = p.blocks();
    for (std::size_t x = 0; x < bl.size(); ++x)
    {
        for (std::size_t y = x + 1; y < bl.size(); ++y)
        {
            // x has the smaller minimum; the blocks cross iff some element of y sits
            // strictly inside x's span and some other element of y sits after an
            // element of x that follows it (or before x's span ends in the other order).
            const auto& bx = bl[x];
            const auto& by = bl[y];
            for (std::size_t i = 0; i + 1 < bx.size(); ++i)
            {
                const int lo = bx[i];
                const int hi = bx[i + 1];
                bool inside = false;
                bool outside = false;
                for (int e : by)
                {
                    if (e > lo && e < hi)
                    {
                        inside = true;
                    }
                    else
                    {
                        outside = true;
                    }
                }
                if (inside && outside)
                {
                    return {static_cast<int>(x), static_cast<int>(y)};
                }
            }
        }
    }
    return {-1, -1};
}

}  // namespace

// --- SetPartition -------------------------------------------------------------

SetPartition::SetPartition(int n, std::vector<Block> blocks) : n_(n), blocks_(std::move(blocks))
{
    if (n_ < 1)
    {
        throw ArgumentError("partition ground set must be nonempty");
    }
    std::vector<char> seen(static_cast<std::size_t>(n_), 0);
    for (auto& b : blocks_)
    {
        if (b.empty())
        {
            throw ArgumentError("partition contains an empty block");
        }
        std::sort(b.begin(), b.end());
        for (int e : b)
        {
            if (e < 1 || e > n_)
            {
                throw ArgumentError("partition element " + std::to_string(e) + " outside {1.." +
                                    std::to_string(n_) + "}");
            }
            auto& s = seen[static_cast<std::size_t>(e - 1)];
            if (s)
            {
                throw ArgumentError("partition element " + std::to_string(e) + " appears twice");
            }
            s = 1;
        }
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end())
    {
        throw ArgumentError("partition blocks do not cover {1.." + std::to_string(n_) + "}");
    }
    std::sort(blocks_.begin(), blocks_.end(), [](const Block& a, const Block& b) { return a.front() < b.front(); });
}

SetPartition SetPartition::discrete(int n)
{
    std::vector<Block> bl;
    for (int i = 1; i <= n; ++i)
    {
        bl.push_back({i});
    }
    return SetPartition(n, std::move(bl));
}

SetPartition SetPartition::full(int n)
{
    Block b(static_cast<std::size_t>(n));
    std::iota(b.begin(), b.end(), 1);
    return SetPartition(n, {std::move(b)});
}

SetPartition SetPartition::from_labels(const std::vector<int>& labels)
{
    std::vector<int> order;  // distinct labels in order of first appearance
    std::vector<Block> bl;
    for (std::size_t i = 0; i < labels.size(); ++i)
    {
        auto it = std::find(order.begin(), order.end(), labels[i]);
        if (it == order.end())
        {
            order.push_back(labels[i]);
            bl.push_back({static_cast<int>(i) + 1});
        }
        else
        {
            bl[static_cast<std::size_t>(it - order.begin())].push_back(static_cast<int>(i) + 1);
        }
    }
    return SetPartition(static_cast<int>(labels.size()), std::move(bl));
}

SetPartition SetPartition::parse(std::string_view text)
{
    std::vector<Block> bl;
    int n = 0;
    std::size_t i = 0;
    auto skip_ws = [&] {
        while (i < text.size() && (text[i] == ' ' || text[i] == '\t'))
        {
            ++i;
        }
    };
    skip_ws();
    while (i < text.size())
    {
        if (text[i] != '{')
        {
            throw ArgumentError("expected '{' in partition string \"" + std::string(text) + "\"");
        }
        ++i;
        Block b;
        while (true)
        {
            skip_ws();
            int v = 0;
            auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + text.size(), v);
            if (ec != std::errc())
            {
                throw ArgumentError("expected integer in partition string \"" + std::string(text) + "\"");
            }
            i = static_cast<std::size_t>(ptr - text.data());
            b.push_back(v);
            n = std::max(n, v);
            skip_ws();
            if (i < text.size() && text[i] == ',')
            {
                ++i;
                continue;
            }
            if (i < text.size() && text[i] == '}')
            {
                ++i;
                break;
            }
            throw ArgumentError("unterminated block in partition string \"" + std::string(text) + "\"");
        }
        bl.push_back(std::move(b));
        skip_ws();
    }
    if (bl.empty())
    {
        throw ArgumentError("empty partition string");
    }
    return SetPartition(n, std::move(bl));
}

std::vector<int> SetPartition::labels() const
{
    std::vector<int> out(static_cast<std::size_t>(n_));
    for (std::size_t b = 0; b < blocks_.size(); ++b)
    {
        for (int e : blocks_[b])
        {
            out[static_cast<std::size_t>(e - 1)] = static_cast<int>(b);
        }
    }
    return out;
}

std::string SetPartition::to_string() const
{
    std::ostringstream os;
    for (const auto& b : blocks_)
    {
        os << '{';
        for (std::size_t i = 0; i < b.size(); ++i)
        {
            os << (i ? "," : "") << b[i];
        }
        os << '}';
    }
    return os.str();
}

// --- Permutation --------------------------------------------------------------

Permutation::Permutation(std::vector<int> images) : images_(std::move(images))
{
    const int n = size();
    std::vector<char> hit(images_.size(), 0);
    for (int v : images_)
    {
        if (v < 1 || v > n || hit[static_cast<std::size_t>(v - 1)])
        {
            throw ArgumentError("image list is not a permutation of {1.." + std::to_string(n) + "}");
        }
        hit[static_cast<std::size_t>(v - 1)] = 1;
    }
}

Permutation Permutation::identity(int n)
{
    std::vector<int> im(static_cast<std::size_t>(n));
    std::iota(im.begin(), im.end(), 1);
    return Permutation(std::move(im));
}

Permutation Permutation::long_cycle(int n)
{
    std::vector<int> im(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
    {
        im[static_cast<std::size_t>(i)] = (i + 1) % n + 1;
    }
    return Permutation(std::move(im));
}

Permutation Permutation::from_blocks(const SetPartition& p)
{
    std::vector<int> im(static_cast<std::size_t>(p.size()));
    for (const auto& b : p.blocks())
    {
        for (std::size_t i = 0; i < b.size(); ++i)
        {
            im[static_cast<std::size_t>(b[i] - 1)] = b[(i + 1) % b.size()];
        }
    }
    return Permutation(std::move(im));
}

std::vector<std::vector<int>> Permutation::cycles() const
{
    std::vector<std::vector<int>> out;
    std::vector<char> seen(images_.size(), 0);
    for (int start = 1; start <= size(); ++start)
    {
        if (seen[static_cast<std::size_t>(start - 1)])
        {
            continue;
        }
        std::vector<int> c;
        for (int x = start; !seen[static_cast<std::size_t>(x - 1)]; x = (*this)(x))
        {
            seen[static_cast<std::size_t>(x - 1)] = 1;
            c.push_back(x);
        }
        out.push_back(std::move(c));
    }
    return out;
}

int Permutation::cycle_count() const
{
    int count = 0;
    std::vector<char> seen(images_.size(), 0);
    for (int start = 1; start <= size(); ++start)
    {
        if (seen[static_cast<std::size_t>(start - 1)])
        {
            continue;
        }
        ++count;
        for (int x = start; !seen[static_cast<std::size_t>(x - 1)]; x = (*this)(x))
        {
            seen[static_cast<std::size_t>(x - 1)] = 1;
        }
    }
    return count;
}

std::string Permutation::to_string() const
{
    std::ostringstream os;
    for (const auto& c : cycles())
    {
        os << '(';
        for (std::size_t i = 0; i < c.size(); ++i)
        {
            os << (i ? " " : "") << c[i];
        }
        os << ')';
    }
    return os.str();
}

Permutation multiply(const Permutation& s, const Permutation& r)
{
    if (s.size() != r.size())
    {
        throw ArgumentError("cannot multiply permutations of different degree");
    }
    std::vector<int> im(static_cast<std::size_t>(s.size()));
    for (int x = 1; x <= s.size(); ++x)
    {
        im[static_cast<std::size_t>(x - 1)] = s(r(x));
    }
    return Permutation(std::move(im));
}

Permutation inverse(const Permutation& s)
{
    std::vector<int> im(static_cast<std::size_t>(s.size()));
    for (int x = 1; x <= s.size(); ++x)
    {
        im[static_cast<std::size_t>(s(x) - 1)] = x;
    }
    return Permutation(std::move(im));
}

SetPartition cycle_partition(const Permutation& s)
{
    return SetPartition(s.size(), s.cycles());
}

// --- IntegerPartitionClass ----------------------------------------------------

IntegerPartitionClass::IntegerPartitionClass(std::vector<int> p) : parts(std::move(p))
{
    for (int x : parts)
    {
        if (x < 1)
        {
            throw ArgumentError("integer partition parts must be positive");
        }
    }
    std::sort(parts.begin(), parts.end(), std::greater<>());
}

IntegerPartitionClass IntegerPartitionClass::cycle_type(const Permutation& s)
{
    std::vector<int> lens;
    for (const auto& c : s.cycles())
    {
        lens.push_back(static_cast<int>(c.size()));
    }
    return IntegerPartitionClass(std::move(lens));
}

int IntegerPartitionClass::weight() const
{
    return std::accumulate(parts.begin(), parts.end(), 0);
}

// --- counting -----------------------------------------------------------------

std::int64_t catalan(int k)
{
    if (k < 0 || k > kMaxCatalanIndex)
    {
        throw RangeError("catalan(" + std::to_string(k) + ") is outside the exact range 0.." +
                         std::to_string(kMaxCatalanIndex));
    }
    // C_{j+1} = C_j * 2(2j+1) / (j+2); the division is exact.
    std::int64_t c = 1;
    for (int j = 0; j < k; ++j)
    {
        c = c * 2 * (2 * j + 1) / (j + 2);
    }
    return c;
}

std::int64_t mobius_full_interval(int k)
{
    const std::int64_t c = catalan(k - 1);
    return (k % 2 == 1) ? c : -c;
}

// --- predicates and enumeration -------------------------------------------------

bool is_noncrossing(const SetPartition& p)
{
    const auto labels = p.labels();
    std::vector<int> last(p.block_count(), 0);
    for (std::size_t i = 0; i < labels.size(); ++i)
    {
        last[static_cast<std::size_t>(labels[i])] = static_cast<int>(i);
    }
    // Stack of blocks that have started but not finished; a block may only
    // receive its next element while it is on top.
    std::vector<int> open;
    std::vector<char> started(p.block_count(), 0);
    for (std::size_t i = 0; i < labels.size(); ++i)
    {
        const int b = labels[i];
        if (!started[static_cast<std::size_t>(b)])
        {
            started[static_cast<std::size_t>(b)] = 1;
            if (last[static_cast<std::size_t>(b)] > static_cast<int>(i))
            {
                open.push_back(b);
            }
            continue;
        }
        if (open.empty() || open.back() != b)
        {
            return false;
        }
        if (last[static_cast<std::size_t>(b)] == static_cast<int>(i))
        {
            open.pop_back();
        }
    }
    return true;
}

bool is_pairing(const SetPartition& p)
{
    return std::all_of(p.blocks().begin(), p.blocks().end(), [](const Block& b) { return b.size() == 2; });
}

std::vector<SetPartition> enumerate_nc(int n)
{
    if (n < 1 || n > kMaxNcEnumeration)
    {
        throw RangeError("enumerate_nc supports 1 <= n <= " + std::to_string(kMaxNcEnumeration));
    }
    std::vector<SetPartition> out;
    out.reserve(static_cast<std::size_t>(catalan(n)));
    std::vector<int> labels(static_cast<std::size_t>(n));
    std::vector<int> stack;

    // Element i either opens a new block or joins a block still on the stack;
    // joining block b closes every block opened after b.
    auto rec = [&](auto&& self, int i, int next_label) -> void {
        if (i == n)
        {
            out.push_back(SetPartition::from_labels(labels));
            return;
        }
        for (std::size_t s = 0; s < stack.size(); ++s)
        {
            const int b = stack[s];
            std::vector<int> saved(stack.begin() + static_cast<std::ptrdiff_t>(s) + 1, stack.end());
            stack.resize(s + 1);
            labels[static_cast<std::size_t>(i)] = b;
            self(self, i + 1, next_label);
            stack.insert(stack.end(), saved.begin(), saved.end());
        }
        stack.push_back(next_label);
        labels[static_cast<std::size_t>(i)] = next_label;
        self(self, i + 1, next_label + 1);
        stack.pop_back();
    };
    rec(rec, 0, 0);
    return out;
}

std::vector<SetPartition> enumerate_nc_pairings(int n)
{
    if (n < 1)
    {
        throw ArgumentError("enumerate_nc_pairings needs n >= 1");
    }
    std::vector<SetPartition> out;
    if (n % 2 == 1)
    {
        return out;
    }
    if (n > 2 * kMaxNcEnumeration)
    {
        throw RangeError("enumerate_nc_pairings supports n <= " + std::to_string(2 * kMaxNcEnumeration));
    }
    // Dyck-path scan: each element opens a pair or closes the most recent open one.
    std::vector<int> partner(static_cast<std::size_t>(n), 0);
    std::vector<int> open;
    auto rec = [&](auto&& self, int i) -> void {
        if (i == n)
        {
            std::vector<Block> bl;
            for (int e = 1; e <= n; ++e)
            {
                if (partner[static_cast<std::size_t>(e - 1)] > e)
                {
                    bl.push_back({e, partner[static_cast<std::size_t>(e - 1)]});
                }
            }
            out.emplace_back(n, std::move(bl));
            return;
        }
        const int remaining = n - i;
        if (static_cast<int>(open.size()) < remaining)
        {
            open.push_back(i + 1);
            self(self, i + 1);
            open.pop_back();
        }
        if (!open.empty())
        {
            const int j = open.back();
            open.pop_back();
            partner[static_cast<std::size_t>(j - 1)] = i + 1;
            partner[static_cast<std::size_t>(i)] = j;
            self(self, i + 1);
            open.push_back(j);
        }
    };
    rec(rec, 0);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<SetPartition> enumerate_all_pairings(int n)
{
    if (n < 1)
    {
        throw ArgumentError("enumerate_all_pairings needs n >= 1");
    }
    std::vector<SetPartition> out;
    if (n % 2 == 1)
    {
        return out;
    }
    if (n > kMaxPairingEnumeration)
    {
        throw RangeError("enumerate_all_pairings supports n <= " + std::to_string(kMaxPairingEnumeration));
    }
    std::vector<char> used(static_cast<std::size_t>(n), 0);
    std::vector<Block> current;
    auto rec = [&](auto&& self) -> void {
        int first = 0;
        while (first < n && used[static_cast<std::size_t>(first)])
        {
            ++first;
        }
        if (first == n)
        {
            out.emplace_back(n, current);
            return;
        }
        used[static_cast<std::size_t>(first)] = 1;
        for (int j = first + 1; j < n; ++j)
        {
            if (used[static_cast<std::size_t>(j)])
            {
                continue;
            }
            used[static_cast<std::size_t>(j)] = 1;
            current.push_back({first + 1, j + 1});
            self(self);
            current.pop_back();
            used[static_cast<std::size_t>(j)] = 0;
        }
        used[static_cast<std::size_t>(first)] = 0;
    };
    rec(rec);
    return out;
}

// --- lattice ------------------------------------------------------------------

bool refines(const SetPartition& a, const SetPartition& b)
{
    require_same_size(a, b);
    const auto lb = b.labels();
    for (const auto& blk : a.blocks())
    {
        const int l = lb[static_cast<std::size_t>(blk.front() - 1)];
        for (int e : blk)
        {
            if (lb[static_cast<std::size_t>(e - 1)] != l)
            {
                return false;
            }
        }
    }
    return true;
}

SetPartition join(const SetPartition& a, const SetPartition& b)
{
    require_same_size(a, b);
    const int n = a.size();
    UnionFind uf(n);
    for (const auto* p : {&a, &b})
    {
        for (const auto& blk : p->blocks())
        {
            for (int e : blk)
            {
                uf.unite(e - 1, blk.front() - 1);
            }
        }
    }
    SetPartition result = partition_from_roots(uf, n);
    for (auto [x, y] = find_crossing(result); x >= 0; std::tie(x, y) = find_crossing(result))
    {
        const auto& bl = result.blocks();
        uf.unite(bl[static_cast<std::size_t>(x)].front() - 1, bl[static_cast<std::size_t>(y)].front() - 1);
        result = partition_from_roots(uf, n);
    }
    return result;
}

SetPartition meet(const SetPartition& a, const SetPartition& b)
{
    require_same_size(a, b);
    const auto la = a.labels();
    const auto lb = b.labels();
    std::vector<int> joint(la.size());
    const int stride = static_cast<int>(b.block_count());
    for (std::size_t i = 0; i < la.size(); ++i)
    {
        joint[i] = la[i] * stride + lb[i];
    }
    return SetPartition::from_labels(joint);
}

SetPartition kreweras(const SetPartition& p)
{
    require_noncrossing(p, "kreweras");
    const auto sigma = Permutation::from_blocks(p);
    return cycle_partition(multiply(inverse(sigma), Permutation::long_cycle(p.size())));
}

std::int64_t mobius_nc(const SetPartition& a, const SetPartition& b)
{
    require_same_size(a, b);
    require_noncrossing(a, "mobius_nc");
    require_noncrossing(b, "mobius_nc");
    if (!refines(a, b))
    {
        throw ArgumentError("mobius_nc: " + a.to_string() + " does not refine " + b.to_string());
    }
    // [a, b] factors over the blocks of b; within a block B, [a|B, 1_B] is
    // isomorphic to [0, K(a|B)], a product of full intervals NC(|C|).
    const auto la = a.labels();
    std::int64_t mu = 1;
    for (const auto& blk : b.blocks())
    {
        std::vector<int> local(blk.size());
        for (std::size_t i = 0; i < blk.size(); ++i)
        {
            local[i] = la[static_cast<std::size_t>(blk[i] - 1)];
        }
        const auto complement = kreweras(SetPartition::from_labels(local));
        for (const auto& c : complement.blocks())
        {
            mu *= mobius_full_interval(static_cast<int>(c.size()));
        }
    }
    return mu;
}

// --- pairings and geodesics -------------------------------------------------------

int genus_cycle_count(const SetPartition& pairing)
{
    if (!is_pairing(pairing))
    {
        throw ArgumentError("genus_cycle_count needs a pairing, got " + pairing.to_string());
    }
    const auto pi = Permutation::from_blocks(pairing);
    return multiply(pi, Permutation::long_cycle(pairing.size())).cycle_count();
}

int pairing_genus(const SetPartition& pairing)
{
    const int twice = 1 + pairing.size() / 2 - genus_cycle_count(pairing);
    return twice / 2;
}

Permutation nc_to_geodesic_perm(const SetPartition& p)
{
    require_noncrossing(p, "nc_to_geodesic_perm");
    return Permutation::from_blocks(p);
}

bool geodesic_test(const Permutation& s)
{
    const int n = s.size();
    return s.length() + multiply(inverse(s), Permutation::long_cycle(n)).length() == n - 1;
}

}  // namespace freeconv::nc
