#include "freeconv/rmtlab.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "freeconv/errors.hpp"
#include "freeconv/moments.hpp"

namespace freeconv::rmtlab {

namespace {

double pairwise_sum(const double* x, std::size_t n)
{
    if (n <= 8)
    {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
        {
            s += x[i];
        }
        return s;
    }
    const std::size_t h = n / 2;
    return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

void require_dimension(int n)
{
    if (n < 2)
    {
        throw ArgumentError("matrix dimension must be at least 2");
    }
}

const ComplexMatrix& deterministic_slot(const EnsembleConfig& cfg, int slot)
{
    const auto it = cfg.deterministic.find(slot);
    if (it == cfg.deterministic.end())
    {
        throw ArgumentError("no deterministic matrix bound to slot D" + std::to_string(slot));
    }
    return it->second;
}

// All permutations of {1..q} as image vectors.
std::vector<nc::Permutation> symmetric_group(int q)
{
    std::vector<int> img(static_cast<std::size_t>(q));
    std::iota(img.begin(), img.end(), 1);
    std::vector<nc::Permutation> out;
    do
    {
        out.emplace_back(img);
    } while (std::next_permutation(img.begin(), img.end()));
    return out;
}

Complex entry_product(const ComplexMatrix& u, const HaarEntryPattern& p)
{
    Complex v = 1.0;
    for (std::size_t k = 0; k < p.i.size(); ++k)
    {
        v *= u(p.i[k] - 1, p.j[k] - 1);
    }
    for (std::size_t k = 0; k < p.ip.size(); ++k)
    {
        v *= std::conj(u(p.ip[k] - 1, p.jp[k] - 1));
    }
    return v;
}

void validate_pattern(int n, const HaarEntryPattern& p)
{
    const auto q = p.i.size();
    if (p.j.size() != q || p.ip.size() != p.jp.size())
    {
        throw ArgumentError("Haar entry pattern: index lists of unequal length");
    }
    for (const auto* v : {&p.i, &p.j, &p.ip, &p.jp})
    {
        for (int x : *v)
        {
            if (x < 1 || x > n)
            {
                throw ArgumentError("Haar entry pattern: index " + std::to_string(x) + " outside 1.." + std::to_string(n));
            }
        }
    }
}

// Product of letters [lo, hi) by halving; equal letter runs are multiplied once.
class WordProduct
{
  public:
    WordProduct(const TraceWord& w, const std::vector<const ComplexMatrix*>& f) : word_(w), factors_(f) {}

    const ComplexMatrix& range(std::size_t lo, std::size_t hi)
    {
        if (hi - lo == 1)
        {
            return *factors_[lo];
        }
        const auto key = key_of(lo, hi);
        const auto it = memo_.find(key);
        if (it != memo_.end())
        {
            return it->second;
        }
        const std::size_t mid = lo + (hi - lo) / 2;
        auto product = range(lo, mid) * range(mid, hi);
        return memo_.emplace(key, std::move(product)).first->second;
    }

  private:
    std::vector<std::pair<int, int>> key_of(std::size_t lo, std::size_t hi) const
    {
        std::vector<std::pair<int, int>> k;
        for (std::size_t i = lo; i < hi; ++i)
        {
            k.emplace_back(static_cast<int>(word_.letters[i].kind), word_.letters[i].slot);
        }
        return k;
    }

    const TraceWord& word_;
    const std::vector<const ComplexMatrix*>& factors_;
    std::map<std::vector<std::pair<int, int>>, ComplexMatrix> memo_;
};

double trace_of_word(const TraceWord& w, const std::vector<const ComplexMatrix*>& factors)
{
    if (factors.size() == 1)
    {
        return factors[0]->normalized_trace().real();
    }
    WordProduct wp(w, factors);
    const std::size_t mid = factors.size() / 2;
    const auto& left = wp.range(0, mid);
    const auto& right = wp.range(mid, factors.size());
    return linalg::normalized_trace_of_product(left, right).real();
}

}  // namespace

ComplexMatrix sample_gue(int n, rng::PhiloxStream& stream)
{
    require_dimension(n);
    ComplexMatrix a(n);
    const double sd_diag = 1.0 / std::sqrt(static_cast<double>(n));
    const double sd_off = 1.0 / std::sqrt(2.0 * n);
    for (int i = 0; i < n; ++i)
    {
        a(i, i) = stream.normal() * sd_diag;
        for (int j = i + 1; j < n; ++j)
        {
            const double x = stream.normal();
            const double y = stream.normal();
            a(i, j) = Complex(x, y) * sd_off;
            a(j, i) = std::conj(a(i, j));
        }
    }
    return a;
}

ComplexMatrix sample_ginibre(int n, rng::PhiloxStream& stream)
{
    require_dimension(n);
    ComplexMatrix g(n);
    for (int i = 0; i < n; ++i)
    {
        for (int j = 0; j < n; ++j)
        {
            g(i, j) = stream.complex_normal();
        }
    }
    return g;
}

ComplexMatrix sample_haar_unitary(int n, rng::PhiloxStream& stream)
{
    auto [q, r] = linalg::householder_qr(sample_ginibre(n, stream));
    // Plain QR leaves a phase per column undetermined; fixing diag(R) > 0 makes Q Haar.
    for (int j = 0; j < n; ++j)
    {
        const double m = std::abs(r(j, j));
        const Complex phase = m == 0.0 ? Complex(1.0) : r(j, j) / m;
        for (int i = 0; i < n; ++i)
        {
            q(i, j) *= phase;
        }
    }
    return q;
}

MCEstimate summarize(const std::vector<double>& values, std::uint64_t seed)
{
    MCEstimate e;
    e.reps = static_cast<long long>(values.size());
    e.seed = seed;
    if (values.empty())
    {
        throw ArgumentError("summarize needs at least one value");
    }
    e.mean = pairwise_sum(values.data(), values.size()) / static_cast<double>(values.size());
    if (values.size() >= 2)
    {
        std::vector<double> sq(values.size());
        for (std::size_t i = 0; i < values.size(); ++i)
        {
            sq[i] = (values[i] - e.mean) * (values[i] - e.mean);
        }
        const double var = pairwise_sum(sq.data(), sq.size()) / static_cast<double>(values.size() - 1);
        e.stderr_ = std::sqrt(var / static_cast<double>(values.size()));
    }
    return e;
}

TraceWord TraceWord::parse(const std::string& text)
{
    TraceWord w;
    std::istringstream in(text);
    std::string tok;
    while (in >> tok)
    {
        const auto slot_of = [&](std::size_t from) {
            if (tok.size() == from)
            {
                return 1;
            }
            const auto digits = tok.substr(from);
            if (digits.find_first_not_of("0123456789") != std::string::npos)
            {
                throw ArgumentError("bad trace-word token '" + tok + "'");
            }
            const int s = std::stoi(digits);
            if (s < 1)
            {
                throw ArgumentError("slot indices start at 1: '" + tok + "'");
            }
            return s;
        };
        if (tok == "U")
        {
            w.letters.push_back({Letter::Kind::Unitary, 1});
        }
        else if (tok == "U*" || tok == "Ustar")
        {
            w.letters.push_back({Letter::Kind::UnitaryStar, 1});
        }
        else if (tok[0] == 'A')
        {
            w.letters.push_back({Letter::Kind::Gaussian, slot_of(1)});
        }
        else if (tok[0] == 'D' || tok[0] == 'B')
        {
            w.letters.push_back({Letter::Kind::Deterministic, slot_of(1)});
        }
        else
        {
            throw ArgumentError("bad trace-word token '" + tok + "'");
        }
    }
    if (w.letters.empty())
    {
        throw ArgumentError("empty trace word");
    }
    return w;
}

std::string TraceWord::to_string() const
{
    std::string out;
    for (const auto& l : letters)
    {
        if (!out.empty())
        {
            out += ' ';
        }
        switch (l.kind)
        {
            case Letter::Kind::Gaussian: out += "A" + std::to_string(l.slot); break;
            case Letter::Kind::Unitary: out += "U"; break;
            case Letter::Kind::UnitaryStar: out += "U*"; break;
            case Letter::Kind::Deterministic: out += "D" + std::to_string(l.slot); break;
        }
    }
    return out;
}

bool TraceWord::is_random() const
{
    return std::any_of(letters.begin(), letters.end(), [](const Letter& l) { return l.kind != Letter::Kind::Deterministic; });
}

MCEstimate mc_trace(const TraceWord& word, const EnsembleConfig& cfg)
{
    require_dimension(cfg.n);
    if (cfg.reps < 1)
    {
        throw ArgumentError("mc_trace needs reps >= 1");
    }
    for (const auto& l : word.letters)
    {
        if (l.kind == Letter::Kind::Deterministic && deterministic_slot(cfg, l.slot).size() != cfg.n)
        {
            throw ArgumentError("deterministic matrix D" + std::to_string(l.slot) + " has dimension " +
                                std::to_string(deterministic_slot(cfg, l.slot).size()) + ", expected " +
                                std::to_string(cfg.n));
        }
    }
    const auto evaluate = [&](long long rep) {
        rng::PhiloxStream stream(cfg.seed, static_cast<std::uint64_t>(rep));
        std::map<int, ComplexMatrix> gaussians;
        ComplexMatrix u;
        std::vector<const ComplexMatrix*> factors;
        std::vector<ComplexMatrix> adjoints;
        adjoints.reserve(word.letters.size());
        for (const auto& l : word.letters)
        {
            switch (l.kind)
            {
                case Letter::Kind::Gaussian:
                    if (!gaussians.count(l.slot))
                    {
                        gaussians.emplace(l.slot, sample_gue(cfg.n, stream));
                    }
                    factors.push_back(&gaussians.at(l.slot));
                    break;
                case Letter::Kind::Unitary:
                case Letter::Kind::UnitaryStar:
                    if (u.size() == 0)
                    {
                        u = sample_haar_unitary(cfg.n, stream);
                    }
                    if (l.kind == Letter::Kind::Unitary)
                    {
                        factors.push_back(&u);
                    }
                    else
                    {
                        adjoints.push_back(u.adjoint());
                        factors.push_back(&adjoints.back());
                    }
                    break;
                case Letter::Kind::Deterministic: factors.push_back(&deterministic_slot(cfg, l.slot)); break;
            }
        }
        return trace_of_word(word, factors);
    };
    if (!word.is_random())
    {
        MCEstimate e;
        e.mean = evaluate(0);
        e.reps = cfg.reps;
        e.seed = cfg.seed;
        return e;
    }
    std::vector<double> values(static_cast<std::size_t>(cfg.reps));
    for_each_rep(cfg.reps, cfg.threads, [&](long long r) { values[static_cast<std::size_t>(r)] = evaluate(r); });
    return summarize(values, cfg.seed);
}

double genus_expansion_exact(const std::vector<ComplexMatrix>& d, int n, int dim)
{
    if (n < 1)
    {
        throw ArgumentError("genus_expansion_exact needs n >= 1");
    }
    if (n > kMaxGenusWord)
    {
        throw RangeError("genus_expansion_exact: word length " + std::to_string(n) + " exceeds " +
                         std::to_string(kMaxGenusWord));
    }
    const bool identity = d.empty();
    const int size = identity ? dim : d.front().size();
    if (identity && dim < 1)
    {
        throw ArgumentError("genus_expansion_exact: with no matrices, give the dimension");
    }
    if (!identity)
    {
        if (static_cast<int>(d.size()) != n)
        {
            throw ArgumentError("genus_expansion_exact: need one matrix per letter");
        }
        for (const auto& m : d)
        {
            if (m.size() != size)
            {
                throw ArgumentError("genus_expansion_exact: matrices of unequal dimension");
            }
        }
    }
    if (n % 2 != 0)
    {
        return 0.0;
    }
    const double nn = static_cast<double>(size);
    const auto gamma = nc::Permutation::long_cycle(n);
    std::map<std::vector<int>, Complex> trace_cache;
    const auto cycle_trace = [&](const std::vector<int>& cycle) -> Complex {
        if (identity)
        {
            return 1.0;
        }
        const auto it = trace_cache.find(cycle);
        if (it != trace_cache.end())
        {
            return it->second;
        }
        Complex t;
        if (cycle.size() == 1)
        {
            t = d[static_cast<std::size_t>(cycle[0] - 1)].normalized_trace();
        }
        else
        {
            ComplexMatrix acc = d[static_cast<std::size_t>(cycle[0] - 1)];
            for (std::size_t i = 1; i + 1 < cycle.size(); ++i)
            {
                acc = acc * d[static_cast<std::size_t>(cycle[i] - 1)];
            }
            t = linalg::normalized_trace_of_product(acc, d[static_cast<std::size_t>(cycle.back() - 1)]);
        }
        trace_cache.emplace(cycle, t);
        return t;
    };
    Complex total = 0.0;
    for (const auto& pi : nc::enumerate_all_pairings(n))
    {
        const auto pg = nc::multiply(nc::Permutation::from_blocks(pi), gamma);
        const auto cycles = pg.cycles();
        Complex term = std::pow(nn, static_cast<int>(cycles.size()) - n / 2 - 1);
        for (const auto& c : cycles)
        {
            term *= cycle_trace(c);
        }
        total += term;
    }
    return total.real();
}

std::map<int, long long> genus_census(int n)
{
    if (n < 2 || n % 2 != 0)
    {
        throw ArgumentError("genus_census needs an even n >= 2");
    }
    if (n > kMaxCensusWord)
    {
        throw RangeError("genus_census: n exceeds " + std::to_string(kMaxCensusWord));
    }
    std::map<int, long long> census;
    for (const auto& pi : nc::enumerate_all_pairings(n))
    {
        ++census[nc::pairing_genus(pi)];
    }
    return census;
}

WeingartenLeading weingarten_leading(const nc::IntegerPartitionClass& alpha)
{
    double c = 1.0;
    for (int l : alpha.parts)
    {
        c *= static_cast<double>(nc::mobius_full_interval(l));
    }
    return {alpha.length() - 2 * alpha.weight(), c};
}

double weingarten_exact_smallq(int n, const nc::IntegerPartitionClass& alpha)
{
    const int q = alpha.weight();
    if (q < 1 || q > kMaxWeingartenOrder)
    {
        throw RangeError("weingarten_exact_smallq supports q = 1..3, got " + std::to_string(q));
    }
    if (n < q)
    {
        throw ArgumentError("weingarten_exact_smallq needs N >= q");
    }
    const double nn = n;
    const double a = nn * nn - 1.0;
    const double b = nn * nn - 4.0;
    const auto& p = alpha.parts;
    if (q == 1)
    {
        return 1.0 / nn;
    }
    if (q == 2)
    {
        return p.size() == 2 ? 1.0 / a : -1.0 / (nn * a);
    }
    if (p.size() == 3)
    {
        return (nn * nn - 2.0) / (nn * a * b);
    }
    if (p.size() == 2)
    {
        return -1.0 / (a * b);
    }
    return 2.0 / (nn * a * b);
}

double haar_entry_moment_exact(int n, const HaarEntryPattern& p)
{
    validate_pattern(n, p);
    const int q = static_cast<int>(p.i.size());
    if (static_cast<int>(p.ip.size()) != q)
    {
        return 0.0;
    }
    if (q == 0)
    {
        return 1.0;
    }
    const auto group = symmetric_group(q);
    const auto matches = [&](const std::vector<int>& x, const std::vector<int>& xp, const nc::Permutation& s) {
        for (int k = 1; k <= q; ++k)
        {
            if (x[static_cast<std::size_t>(k - 1)] != xp[static_cast<std::size_t>(s(k) - 1)])
            {
                return false;
            }
        }
        return true;
    };
    double total = 0.0;
    for (const auto& sigma : group)
    {
        if (!matches(p.i, p.ip, sigma))
        {
            continue;
        }
        for (const auto& tau : group)
        {
            if (!matches(p.j, p.jp, tau))
            {
                continue;
            }
            const auto cls = nc::IntegerPartitionClass::cycle_type(nc::multiply(tau, nc::inverse(sigma)));
            total += weingarten_exact_smallq(n, cls);
        }
    }
    return total;
}

std::vector<MCEstimate> haar_entry_moment_mc(int n, const std::vector<HaarEntryPattern>& patterns, long long reps,
                                             std::uint64_t seed)
{
    require_dimension(n);
    if (reps < 2)
    {
        throw ArgumentError("haar_entry_moment_mc needs reps >= 2");
    }
    for (const auto& p : patterns)
    {
        validate_pattern(n, p);
    }
    // Streaming sums in rep order; storing every value would be reps x patterns.
    std::vector<long double> sum(patterns.size(), 0.0L);
    std::vector<long double> sumsq(patterns.size(), 0.0L);
    for (long long r = 0; r < reps; ++r)
    {
        rng::PhiloxStream stream(seed, static_cast<std::uint64_t>(r));
        const auto u = sample_haar_unitary(n, stream);
        for (std::size_t k = 0; k < patterns.size(); ++k)
        {
            const double v = entry_product(u, patterns[k]).real();
            sum[k] += v;
            sumsq[k] += static_cast<long double>(v) * v;
        }
    }
    std::vector<MCEstimate> out;
    const long double cnt = static_cast<long double>(reps);
    for (std::size_t k = 0; k < patterns.size(); ++k)
    {
        MCEstimate e;
        e.reps = reps;
        e.seed = seed;
        const long double mean = sum[k] / cnt;
        const long double var = std::max(0.0L, (sumsq[k] - cnt * mean * mean) / (cnt - 1.0L));
        e.mean = static_cast<double>(mean);
        e.stderr_ = static_cast<double>(std::sqrt(var / cnt));
        out.push_back(e);
    }
    return out;
}

std::vector<MCEstimate> haar_power_traces(int n, int kmax, long long reps, std::uint64_t seed)
{
    require_dimension(n);
    if (kmax < 1 || reps < 2)
    {
        throw ArgumentError("haar_power_traces needs kmax >= 1 and reps >= 2");
    }
    std::vector<std::vector<double>> values(static_cast<std::size_t>(kmax), std::vector<double>(static_cast<std::size_t>(reps)));
    for (long long r = 0; r < reps; ++r)
    {
        rng::PhiloxStream stream(seed, static_cast<std::uint64_t>(r));
        const auto u = sample_haar_unitary(n, stream);
        ComplexMatrix power = u;
        for (int k = 1; k <= kmax; ++k)
        {
            if (k > 1)
            {
                power = power * u;
            }
            values[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(r)] = power.normalized_trace().real();
        }
    }
    std::vector<MCEstimate> out;
    for (const auto& v : values)
    {
        out.push_back(summarize(v, seed));
    }
    return out;
}

ConjugationReport conjugation_experiment(const ComplexMatrix& a, const ComplexMatrix& b, int n,
                                         const EnsembleConfig& cfg)
{
    if (a.size() != cfg.n || b.size() != cfg.n)
    {
        throw ArgumentError("conjugation_experiment: matrix dimension differs from N");
    }
    if (linalg::hermitian_residual(a) > 1e-12 || linalg::hermitian_residual(b) > 1e-12)
    {
        throw ArgumentError("conjugation_experiment needs Hermitian A and B");
    }
    if (n < 1)
    {
        throw ArgumentError("conjugation_experiment needs n >= 1");
    }
    const auto empirical = [n](const ComplexMatrix& m) {
        std::vector<double> out;
        ComplexMatrix p = m;
        for (int k = 1; k <= n; ++k)
        {
            if (k > 1)
            {
                p = p * m;
            }
            out.push_back(p.normalized_trace().real());
        }
        return MomentSequence(out);
    };
    EnsembleConfig c = cfg;
    c.deterministic = {{1, a}, {2, b}};
    TraceWord w;
    for (int i = 0; i < n; ++i)
    {
        w.letters.push_back({Letter::Kind::Deterministic, 1});
        w.letters.push_back({Letter::Kind::Unitary, 1});
        w.letters.push_back({Letter::Kind::Deterministic, 2});
        w.letters.push_back({Letter::Kind::UnitaryStar, 1});
    }
    ConjugationReport rep;
    rep.estimate = mc_trace(w, c);
    rep.prediction = moments::geodesic_mixed_moment(empirical(a), empirical(b), n);
    const double diff = rep.estimate.mean - rep.prediction;
    rep.z = rep.estimate.stderr_ > 0.0 ? diff / rep.estimate.stderr_ : (diff == 0.0 ? 0.0 : HUGE_VAL);
    return rep;
}

Histogram empirical_spectrum(const ComplexMatrix& h, int bins, double lo, double hi)
{
    if (bins < 1)
    {
        throw ArgumentError("empirical_spectrum needs bins >= 1");
    }
    Histogram out;
    out.eigenvalues = linalg::hermitian_eigenvalues(h);
    if (lo == hi)
    {
        lo = out.eigenvalues.front();
        hi = out.eigenvalues.back();
        if (lo == hi)
        {
            lo -= 0.5;
            hi += 0.5;
        }
    }
    if (hi < lo)
    {
        throw ArgumentError("empirical_spectrum needs lo < hi");
    }
    out.lo = lo;
    out.hi = hi;
    out.counts.assign(static_cast<std::size_t>(bins), 0);
    for (double x : out.eigenvalues)
    {
        if (x < lo || x > hi)
        {
            continue;
        }
        const int b = std::min(bins - 1, static_cast<int>((x - lo) / (hi - lo) * bins));
        ++out.counts[static_cast<std::size_t>(b)];
    }
    return out;
}

std::vector<double> pooled_gue_eigenvalues(int n, int reps, std::uint64_t seed, int threads)
{
    require_dimension(n);
    std::vector<std::vector<double>> per_rep(static_cast<std::size_t>(reps));
    for_each_rep(reps, threads, [&](long long r) {
        rng::PhiloxStream stream(seed, static_cast<std::uint64_t>(r));
        per_rep[static_cast<std::size_t>(r)] = linalg::hermitian_eigenvalues(sample_gue(n, stream));
    });
    std::vector<double> all;
    for (const auto& v : per_rep)
    {
        all.insert(all.end(), v.begin(), v.end());
    }
    return all;
}

}  // namespace freeconv::rmtlab
