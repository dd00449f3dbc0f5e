#include "freeconv/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "freeconv/brown.hpp"
#include "freeconv/catalog.hpp"
#include "freeconv/convolve.hpp"
#include "freeconv/errors.hpp"
#include "freeconv/moments.hpp"
#include "freeconv/ncpart.hpp"
#include "freeconv/repro.hpp"
#include "freeconv/rmtlab.hpp"
#include "freeconv/series.hpp"

namespace freeconv::cli {

namespace {

using json = nlohmann::json;
using linalg::Complex;
using linalg::ComplexMatrix;

// Largest order for which the lattice route (enumerating NC(n)) stays quick.
constexpr int kLatticeOrderCap = 12;
constexpr int kCensusCap = 12;

struct Output
{
    bool is_json = true;
    json payload;
    std::string text;
    json timing = json::object();
    /// Itemized failures for the error stream; non-empty means exit 1.
    std::vector<std::string> failures;
    std::vector<std::string> warnings;
};

std::string num(double x)
{
    if (std::isnan(x))
    {
        return "nan";
    }
    if (std::isinf(x))
    {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& s, const std::string& what)
{
    double v = 0.0;
    const auto* end = s.data() + s.size();
    const auto res = std::from_chars(s.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end)
    {
        throw ArgumentError("cannot read " + what + " '" + s + "' as a number");
    }
    return v;
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep))
    {
        parts.push_back(cur);
    }
    if (!s.empty() && s.back() == sep)
    {
        parts.emplace_back();
    }
    return parts;
}

std::vector<double> parse_list(const std::string& s, const std::string& what)
{
    std::vector<double> v;
    for (const auto& p : split(s, ','))
    {
        v.push_back(parse_double(p, what));
    }
    if (v.empty())
    {
        throw ArgumentError(what + " is empty");
    }
    return v;
}

struct Grid
{
    double lo, hi;
    int n;
};

Grid parse_grid(const std::string& s)
{
    const auto p = split(s, ':');
    if (p.size() != 3)
    {
        throw ArgumentError("grid must look like lo:hi:n, got '" + s + "'");
    }
    Grid g{parse_double(p[0], "grid lo"), parse_double(p[1], "grid hi"), 0};
    const double n = parse_double(p[2], "grid n");
    if (n < 1 || n != std::floor(n) || n > 1e7)
    {
        throw ArgumentError("grid point count must be a positive integer");
    }
    g.n = static_cast<int>(n);
    if (!(g.hi >= g.lo) || (g.n > 1 && g.hi == g.lo))
    {
        throw ArgumentError("grid needs lo < hi");
    }
    return g;
}

std::vector<double> grid_points(const Grid& g)
{
    std::vector<double> x;
    for (int i = 0; i < g.n; ++i)
    {
        x.push_back(g.n == 1 ? g.lo : g.lo + (g.hi - g.lo) * i / (g.n - 1));
    }
    return x;
}

catalog::DistributionSpec law(std::string text)
{
    if (text.rfind("spec:", 0) == 0)
    {
        text = text.substr(5);
    }
    return catalog::parse_spec(text);
}

MomentSequence law_moments(const std::string& text, int order)
{
    const auto spec = law(text);
    if (!spec.moment)
    {
        throw ArgumentError("law '" + text + "' has no moments");
    }
    return catalog::moment_table(spec, order);
}

json values(const std::vector<double>& v)
{
    json a = json::array();
    for (double x : v)
    {
        // -0.0 prints as "-0.0"; the sign of a zero carries no information here.
        a.push_back(std::isfinite(x) ? json(x == 0.0 ? 0.0 : x) : json(nullptr));
    }
    return a;
}

void require_order(int order)
{
    if (order < 1 || order > kMaxOrder)
    {
        throw ArgumentError("--order must lie in 1.." + std::to_string(kMaxOrder));
    }
}

ComplexMatrix read_matrix(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw ArgumentError("cannot open matrix file '" + path + "'");
    }
    json j;
    try
    {
        in >> j;
    }
    catch (const json::exception& e)
    {
        throw ArgumentError("matrix file '" + path + "' is not valid JSON: " + e.what());
    }
    if (!j.is_array() || j.empty())
    {
        throw ArgumentError("matrix JSON must be a nonempty array of rows");
    }
    const int n = static_cast<int>(j.size());
    ComplexMatrix m(n);
    for (int r = 0; r < n; ++r)
    {
        const auto& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<int>(row.size()) != n)
        {
            throw ArgumentError("matrix JSON must be square");
        }
        for (int c = 0; c < n; ++c)
        {
            const auto& e = row[static_cast<std::size_t>(c)];
            if (e.is_number())
            {
                m(r, c) = e.get<double>();
            }
            else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
            {
                m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
            }
            else
            {
                throw ArgumentError("matrix entries must be numbers or [re, im] pairs");
            }
        }
    }
    return m;
}

// ---------------------------------------------------------------- commands --

struct NcArgs
{
    std::string op;
    int k = -1;
    int n = -1;
    std::string partition, a, b;
};

Output cmd_nc(const NcArgs& o)
{
    Output out;
    if (o.op == "catalan")
    {
        if (o.k < 0)
        {
            throw ArgumentError("nc catalan needs --k");
        }
        out.payload = {{"k", o.k}, {"catalan", nc::catalan(o.k)}};
    }
    else if (o.op == "census")
    {
        if (o.n < 1 || o.n > kCensusCap)
        {
            throw ArgumentError("nc census needs --n in 1.." + std::to_string(kCensusCap));
        }
        out.payload = {{"n", o.n},
                       {"nc_count", nc::enumerate_nc(o.n).size()},
                       {"catalan", nc::catalan(o.n)},
                       {"mobius_0_1", nc::mobius_full_interval(o.n)}};
        if (o.n % 2 == 0)
        {
            out.payload["nc_pairings"] = nc::enumerate_nc_pairings(o.n).size();
            out.payload["all_pairings"] = nc::enumerate_all_pairings(o.n).size();
        }
    }
    else if (o.op == "kreweras")
    {
        const auto p = nc::SetPartition::parse(o.partition);
        const auto k = nc::kreweras(p);
        out.payload = {{"partition", p.to_string()}, {"kreweras", k.to_string()},
                       {"kreweras_twice", nc::kreweras(k).to_string()}};
    }
    else
    {
        const auto a = nc::SetPartition::parse(o.a);
        const auto b = nc::SetPartition::parse(o.b);
        out.payload = {{"a", a.to_string()}, {"b", b.to_string()}, {"mobius", nc::mobius_nc(a, b)}};
    }
    return out;
}

struct SeriesArgs
{
    std::string spec;
    std::string moments;
    int order = kDefaultOrder;
};

MomentSequence series_input(const SeriesArgs& o, std::string& source)
{
    require_order(o.order);
    if (!o.moments.empty() == !o.spec.empty())
    {
        throw ArgumentError("give exactly one of a law spec or --moments");
    }
    if (!o.moments.empty())
    {
        source = "moments";
        auto m = MomentSequence(parse_list(o.moments, "--moments"));
        return m.truncated(std::min(o.order, m.order()));
    }
    source = o.spec;
    return law_moments(o.spec, o.order);
}

Output cmd_transform(const SeriesArgs& o)
{
    std::string source;
    const auto m = series_input(o, source);
    Output out;
    const auto r = series::moments_to_R(m);
    out.payload = {{"source", source},
                   {"order", m.order()},
                   {"moments", values(m.values())},
                   {"cumulants", values(series::cumulants_from_R(r).values())},
                   {"R", values(r.coeffs())}};
    if (m[1] != 0.0)
    {
        out.payload["S"] = values(series::moments_to_S(m).coeffs());
    }
    else
    {
        try
        {
            out.payload["zS2"] = values(series::symmetric_s_square(r).coeffs());
        }
        catch (const ArgumentError&)
        {
            out.payload["S"] = nullptr;  // centered but not symmetric: no S-transform
        }
    }
    return out;
}

Output cmd_cumulants(const SeriesArgs& o)
{
    std::string source;
    const auto m = series_input(o, source);
    Output out;
    const auto series = moments::cumulants_from_moments_series(m, m.order());
    out.payload = {{"source", source}, {"moments", values(m.values())}, {"series", values(series.values())}};
    if (m.order() <= kLatticeOrderCap)
    {
        const auto lattice = moments::cumulants_from_moments(m, m.order());
        double gap = 0.0;
        for (int j = 1; j <= m.order(); ++j)
        {
            gap = std::max(gap, std::abs(lattice[j] - series[j]));
        }
        out.payload["lattice"] = values(lattice.values());
        out.payload["max_gap"] = gap;
    }
    else
    {
        out.payload["lattice"] = nullptr;
    }
    return out;
}

struct CatalogArgs
{
    std::string spec;
    std::string grid = "-2.5:2.5:101";
    double eps = 1e-3;
};

Output cmd_catalog(const CatalogArgs& o)
{
    Output out;
    if (o.spec == "list")
    {
        out.payload = {{"laws", catalog::catalog_names()}};
        return out;
    }
    const auto spec = law(o.spec);
    const auto g = parse_grid(o.grid);
    const auto x = grid_points(g);
    const auto inv = catalog::stieltjes_invert([&](Complex z) { return catalog::cauchy_transform(spec, z); }, x, o.eps);
    out.is_json = false;
    std::string csv = "x,density,stieltjes\n";
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        csv += num(x[i]) + "," + (spec.density ? num(spec.density(x[i])) : std::string()) + "," + num(inv[i]) + "\n";
    }
    out.text = csv;
    return out;
}

struct ConvolveArgs
{
    std::string op;
    std::vector<std::string> laws;
    int order = kDefaultOrder;
    double t = std::nan("");
};

Output cmd_convolve(const ConvolveArgs& o)
{
    require_order(o.order);
    const bool binary = o.op == "add" || o.op == "mul";
    if (o.laws.size() != (binary ? 2u : 1u))
    {
        throw ArgumentError("convolve " + o.op + " takes " + (binary ? "two laws" : "one law"));
    }
    if (!binary && std::isnan(o.t))
    {
        throw ArgumentError("convolve " + o.op + " needs --t");
    }
    std::vector<MomentSequence> in;
    for (const auto& l : o.laws)
    {
        in.push_back(law_moments(l, o.order));
    }
    convolve::ConvolutionResult r;
    if (o.op == "add")
    {
        r = convolve::free_add(in[0], in[1], o.order);
    }
    else if (o.op == "mul")
    {
        r = convolve::free_mul(in[0], in[1], o.order);
    }
    else if (o.op == "compress")
    {
        r = convolve::compress(in[0], o.t, o.order);
    }
    else if (o.op == "compress-rescaled")
    {
        r = convolve::compress_rescaled(in[0], o.t, o.order);
    }
    else
    {
        r = convolve::semigroup_mu_t(in[0], o.t, o.order);
    }
    Output out;
    out.payload = {{"op", o.op},
                   {"inputs", o.laws},
                   {"order", o.order},
                   {"moments", values(r.moments.values())},
                   {"cumulants", values(r.cumulants.values())},
                   {"provenance", r.provenance},
                   {"roundtrip_residual", r.roundtrip_residual}};
    if (!binary)
    {
        out.payload["t"] = o.t;
    }
    return out;
}

struct McArgs
{
    std::string op;
    std::string word;
    int n = 64;
    long long reps = -1;
    std::map<int, std::string> d;
    std::string ensemble = "gue";
    int bins = 80;
    std::string range;
};

// Exact prediction for words in A (slot 1) and deterministic letters only.
std::optional<double> genus_prediction(const rmtlab::TraceWord& w, const rmtlab::EnsembleConfig& cfg)
{
    std::size_t first_a = w.letters.size();
    for (std::size_t i = 0; i < w.letters.size(); ++i)
    {
        const auto& l = w.letters[i];
        if (l.kind == rmtlab::Letter::Kind::Gaussian)
        {
            if (l.slot != 1)
            {
                return std::nullopt;
            }
            first_a = std::min(first_a, i);
        }
        else if (l.kind != rmtlab::Letter::Kind::Deterministic)
        {
            return std::nullopt;
        }
    }
    if (first_a == w.letters.size())
    {
        return std::nullopt;
    }
    // Rotate so the word starts with A; each A carries the product of the letters after it.
    std::vector<ComplexMatrix> ds;
    bool any_d = false;
    const std::size_t len = w.letters.size();
    for (std::size_t s = 0; s < len; ++s)
    {
        const auto& l = w.letters[(first_a + s) % len];
        if (l.kind == rmtlab::Letter::Kind::Gaussian)
        {
            ds.push_back(ComplexMatrix::identity(cfg.n));
        }
        else
        {
            any_d = true;
            ds.back() = ds.back() * cfg.deterministic.at(l.slot);
        }
    }
    const int n = static_cast<int>(ds.size());
    if (n > rmtlab::kMaxGenusWord)
    {
        return std::nullopt;
    }
    return any_d ? rmtlab::genus_expansion_exact(ds, n) : rmtlab::genus_expansion_exact({}, n, cfg.n);
}

Output cmd_mc(const McArgs& o, std::uint64_t seed, int threads)
{
    if (o.n < 2)
    {
        throw ArgumentError("--N must be at least 2");
    }
    Output out;
    if (o.op == "trace")
    {
        if (o.word.empty())
        {
            throw ArgumentError("mc trace needs --word");
        }
        rmtlab::EnsembleConfig cfg;
        cfg.n = o.n;
        cfg.reps = o.reps < 0 ? 1000 : o.reps;
        cfg.seed = seed;
        cfg.threads = threads;
        if (cfg.reps < 2)
        {
            throw ArgumentError("--reps must be at least 2");
        }
        for (const auto& [slot, spec] : o.d)
        {
            cfg.deterministic[slot] = ComplexMatrix::diagonal(catalog::quantile_spectrum(law(spec), o.n));
        }
        const auto word = rmtlab::TraceWord::parse(o.word);
        for (const auto& l : word.letters)
        {
            if (l.kind == rmtlab::Letter::Kind::Deterministic && !cfg.deterministic.count(l.slot))
            {
                throw ArgumentError("word uses D" + std::to_string(l.slot) + " but --d" + std::to_string(l.slot) +
                                    " is not set");
            }
        }
        const auto e = rmtlab::mc_trace(word, cfg);
        const auto exact = genus_prediction(word, cfg);
        out.payload = {{"word", word.to_string()}, {"N", o.n},          {"reps", e.reps},
                       {"seed", e.seed},           {"mean", e.mean},    {"stderr", e.stderr_},
                       {"exact_prediction", nullptr}, {"z", nullptr}};
        if (exact)
        {
            out.payload["exact_prediction"] = *exact;
            if (e.stderr_ > 0.0)
            {
                out.payload["z"] = (e.mean - *exact) / e.stderr_;
            }
        }
        return out;
    }
    const long long reps = o.reps < 0 ? 1 : o.reps;
    if (reps < 1 || o.bins < 1)
    {
        throw ArgumentError("--reps and --bins must be positive");
    }
    std::vector<double> ev;
    if (o.ensemble == "gue")
    {
        ev = rmtlab::pooled_gue_eigenvalues(o.n, static_cast<int>(reps), seed, threads);
    }
    else
    {
        std::vector<std::vector<double>> per(static_cast<std::size_t>(reps));
        rmtlab::for_each_rep(reps, threads, [&](long long r) {
            rng::PhiloxStream s(seed, static_cast<std::uint64_t>(r));
            const auto g = rmtlab::sample_ginibre(o.n, s);
            auto w = (1.0 / o.n) * (g.adjoint() * g);
            for (int i = 0; i < o.n; ++i)
            {
                for (int j = i; j < o.n; ++j)
                {
                    const Complex avg = 0.5 * (w(i, j) + std::conj(w(j, i)));
                    w(i, j) = avg;
                    w(j, i) = std::conj(avg);
                }
            }
            per[static_cast<std::size_t>(r)] = linalg::hermitian_eigenvalues(w);
        });
        for (const auto& v : per)
        {
            ev.insert(ev.end(), v.begin(), v.end());
        }
    }
    double lo = *std::min_element(ev.begin(), ev.end());
    double hi = *std::max_element(ev.begin(), ev.end());
    if (!o.range.empty())
    {
        const auto p = split(o.range, ':');
        if (p.size() != 2)
        {
            throw ArgumentError("--range must look like lo:hi");
        }
        lo = parse_double(p[0], "range lo");
        hi = parse_double(p[1], "range hi");
    }
    if (!(hi > lo))
    {
        hi = lo + 1.0;
    }
    std::vector<long long> counts(static_cast<std::size_t>(o.bins), 0);
    const double width = (hi - lo) / o.bins;
    for (double x : ev)
    {
        if (x < lo || x > hi)
        {
            continue;
        }
        const auto b = std::min<long long>(o.bins - 1, static_cast<long long>((x - lo) / width));
        ++counts[static_cast<std::size_t>(b)];
    }
    out.is_json = false;
    out.text = "bin_lo,bin_hi,count,density\n";
    for (int b = 0; b < o.bins; ++b)
    {
        const long long c = counts[static_cast<std::size_t>(b)];
        out.text += num(lo + b * width) + "," + num(lo + (b + 1) * width) + "," + std::to_string(c) + "," +
                    num(static_cast<double>(c) / (static_cast<double>(ev.size()) * width)) + "\n";
    }
    return out;
}

struct BrownArgs
{
    std::string op;
    std::string sigma;
    std::string moments;
    int order = 20;
    double w = 0.0;
    int grid = brown::kDefaultRadialGrid;
    std::string matrix;
    int n = 128;
    long long reps = 20;
};

Output cmd_brown(const BrownArgs& o, std::uint64_t seed, int threads)
{
    Output out;
    if (o.op == "radial")
    {
        if (o.sigma.empty() == o.moments.empty())
        {
            throw ArgumentError("brown radial needs exactly one of --sigma or --moments");
        }
        brown::RadialMeasure m;
        if (!o.sigma.empty())
        {
            m = brown::hl_radial(brown::s_evaluator(law(o.sigma)), o.w, o.grid);
        }
        else
        {
            require_order(o.order);
            const MomentSequence mom(parse_list(o.moments, "--moments"));
            m = brown::hl_from_moments(mom, o.w, std::min(o.order, mom.order()), o.grid);
        }
        if (m.truncated)
        {
            out.warnings.push_back("moment series too short for the whole grid; radii start at " + num(m.r.front()));
        }
        out.is_json = false;
        out.text = "r,F,rho\n";
        for (std::size_t i = 0; i < m.r.size(); ++i)
        {
            out.text += num(m.r[i]) + "," + num(m.F[i]) + "," + num(m.rho[i]) + "\n";
        }
        return out;
    }
    if (o.op == "fkdet")
    {
        if (o.matrix.empty())
        {
            throw ArgumentError("brown fkdet needs --matrix");
        }
        const auto x = read_matrix(o.matrix);
        const double l = brown::log_fk_det(x);
        out.payload = {{"N", x.size()},
                       {"fk_det", std::exp(l)},
                       {"fk_det_lu", brown::fk_det_lu(x)},
                       {"log_fk_det", std::isfinite(l) ? json(l) : json("-inf")}};
        return out;
    }
    rmtlab::EnsembleConfig cfg;
    cfg.n = o.n;
    cfg.reps = o.reps;
    cfg.seed = seed;
    cfg.threads = threads;
    const auto rep = brown::singular_value_check(rmtlab::sample_gue, law("marchenko-pastur:lambda=1"), cfg);
    out.payload = {{"N", o.n},
                   {"reps", o.reps},
                   {"seed", seed},
                   {"model", "U H, H GUE"},
                   {"reference", "marchenko-pastur:lambda=1"},
                   {"sup_distance", rep.sup_distance}};
    return out;
}

struct ReproArgs
{
    std::string suite;
    int n = 4;
    int dim = 64;
    long long reps = 10000;
    bool custom = false;
};

json check_json(const repro::Check& c, const std::string& anchor)
{
    return {{"name", c.name},       {"observed", c.observed}, {"expected", c.expected},
            {"tolerance", c.tolerance}, {"relation", c.relation}, {"passed", c.passed},
            {"anchor", anchor}};
}

Output cmd_repro(const ReproArgs& o, std::uint64_t seed, int threads)
{
    std::vector<repro::CriterionReport> reports;
    if (o.suite == "genus" && o.custom)
    {
        reports.push_back(repro::genus_report(o.n, o.dim, o.reps, seed, threads));
    }
    else if (o.suite == "all")
    {
        for (int id = 1; id <= repro::kCriteria; ++id)
        {
            reports.push_back(repro::run_criterion(id, {threads}));
        }
    }
    else
    {
        const int id = repro::criterion_id(o.suite);
        if (id == 0)
        {
            throw ArgumentError("unknown repro suite '" + o.suite + "'");
        }
        reports.push_back(repro::run_criterion(id, {threads}));
    }
    Output out;
    json suites = json::array();
    json timing = json::array();
    bool all = true;
    for (const auto& r : reports)
    {
        json checks = json::array();
        for (const auto& c : r.checks)
        {
            // Wall-clock checks live with the timing so payloads stay reproducible.
            if (c.name == "runtime in seconds")
            {
                timing.push_back({{"suite", r.key}, {"seconds", c.observed}, {"limit", c.tolerance}, {"passed", c.passed}});
                continue;
            }
            checks.push_back(check_json(c, r.anchor));
        }
        suites.push_back({{"criterion", r.id},
                          {"suite", r.key},
                          {"title", r.title},
                          {"anchor", r.anchor},
                          {"passed", r.passed()},
                          {"checks", checks},
                          {"notes", r.notes}});
        all = all && r.passed();
        for (const auto& c : r.failures())
        {
            out.failures.push_back("criterion " + std::to_string(r.id) + " (" + r.key + "): " + c.name + ": observed " +
                                   num(c.observed) +
                                   (c.relation == "max" ? ", bound " + num(c.tolerance)
                                                        : ", expected " + num(c.expected) + " +- " + num(c.tolerance)));
        }
    }
    out.payload = {{"passed", all}, {"suites", suites}};
    out.timing["suites"] = timing;
    return out;
}

std::uint64_t resolve_seed(const CLI::Option* flag, std::uint64_t value)
{
    if (flag->count() > 0)
    {
        return value;
    }
    if (const char* env = std::getenv("FREECONV_SEED"))
    {
        const std::string s(env);
        std::uint64_t v = 0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        {
            throw ArgumentError("FREECONV_SEED='" + s + "' is not an unsigned integer");
        }
        return v;
    }
    return 0;
}

json echo_parameters(const CLI::App* sub)
{
    json p = json::object();
    for (const auto* opt : sub->get_options())
    {
        if (opt->count() == 0 || opt->get_name() == "--help")
        {
            continue;
        }
        const auto& longs = opt->get_lnames();
        const std::string name = longs.empty() ? opt->get_name(true) : longs.front();
        std::string v;
        for (const auto& r : opt->results())
        {
            v += (v.empty() ? "" : " ") + r;
        }
        p[name] = v;
    }
    return p;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"freeconv: free cumulants, free convolutions, random-matrix checks and radial Brown measures"};
    app.require_subcommand(1, 1);
    std::uint64_t seed_value = 0;
    int threads = 1;
    std::string out_path;
    auto* seed_flag = app.add_option("--seed", seed_value, "RNG seed (falls back to FREECONV_SEED, then 0)");
    app.add_option("--threads", threads, "worker threads for Monte Carlo")->check(CLI::PositiveNumber);
    app.add_option("--out", out_path, "write the result here instead of standard output");

    NcArgs nc_args;
    auto* nc_cmd = app.add_subcommand("nc", "non-crossing partition combinatorics");
    nc_cmd->add_option("op", nc_args.op)->required()->check(CLI::IsMember({"catalan", "census", "kreweras", "mobius"}));
    nc_cmd->add_option("--k", nc_args.k, "Catalan index");
    nc_cmd->add_option("--n", nc_args.n, "ground set size");
    nc_cmd->add_option("--partition", nc_args.partition, "block notation, e.g. {1,4}{2,3}");
    nc_cmd->add_option("--a", nc_args.a, "lower partition");
    nc_cmd->add_option("--b", nc_args.b, "upper partition");

    SeriesArgs tr_args, cu_args;
    auto* tr_cmd = app.add_subcommand("transform", "R- and S-transform coefficients");
    tr_cmd->add_option("spec", tr_args.spec, "law, e.g. marchenko-pastur:lambda=0.5");
    tr_cmd->add_option("--moments", tr_args.moments, "comma-separated m_1, m_2, ...");
    tr_cmd->add_option("--order", tr_args.order, "truncation order");
    auto* cu_cmd = app.add_subcommand("cumulants", "free cumulants by the lattice and series routes");
    cu_cmd->add_option("spec", cu_args.spec, "law");
    cu_cmd->add_option("--moments", cu_args.moments, "comma-separated m_1, m_2, ...");
    cu_cmd->add_option("--order", cu_args.order, "truncation order");

    CatalogArgs cat_args;
    auto* cat_cmd = app.add_subcommand("catalog", "density and Stieltjes inversion of a catalog law on a grid (CSV)");
    cat_cmd->add_option("spec", cat_args.spec, "law, or 'list'")->required();
    cat_cmd->add_option("--grid", cat_args.grid, "lo:hi:n");
    cat_cmd->add_option("--eps", cat_args.eps, "distance from the real axis");

    ConvolveArgs cv_args;
    auto* cv_cmd = app.add_subcommand("convolve", "free additive/multiplicative convolution and compression");
    cv_cmd->add_option("op", cv_args.op)
        ->required()
        ->check(CLI::IsMember({"add", "mul", "compress", "compress-rescaled", "semigroup"}));
    cv_cmd->add_option("laws", cv_args.laws, "one or two laws")->required();
    cv_cmd->add_option("--order", cv_args.order, "truncation order");
    cv_cmd->add_option("--t", cv_args.t, "compression trace or semigroup time");

    McArgs mc_args;
    auto* mc_cmd = app.add_subcommand("mc", "random-matrix Monte Carlo");
    mc_cmd->add_option("op", mc_args.op)->required()->check(CLI::IsMember({"trace", "spectrum"}));
    mc_cmd->add_option("--word", mc_args.word, "trace word, e.g. \"A D1 A D1\"");
    mc_cmd->add_option("--N", mc_args.n, "matrix size");
    mc_cmd->add_option("--reps", mc_args.reps, "Monte Carlo repetitions");
    std::array<std::string, 4> d_specs;
    for (int k = 1; k <= 4; ++k)
    {
        mc_cmd->add_option("--d" + std::to_string(k), d_specs[static_cast<std::size_t>(k - 1)],
                           "deterministic slot " + std::to_string(k) + " as spec:<law> (quantile spectrum)");
    }
    mc_cmd->add_option("--ensemble", mc_args.ensemble)->check(CLI::IsMember({"gue", "wishart"}));
    mc_cmd->add_option("--bins", mc_args.bins, "histogram bins");
    mc_cmd->add_option("--range", mc_args.range, "histogram range lo:hi");

    BrownArgs br_args;
    auto* br_cmd = app.add_subcommand("brown", "Fuglede-Kadison determinants and radial Brown measures");
    br_cmd->add_option("op", br_args.op)->required()->check(CLI::IsMember({"radial", "fkdet", "singular"}));
    br_cmd->add_option("--sigma", br_args.sigma, "law of X*X");
    br_cmd->add_option("--moments", br_args.moments, "moments of X*X instead of --sigma");
    br_cmd->add_option("--order", br_args.order, "moments used with --moments");
    br_cmd->add_option("--w", br_args.w, "atom mass at 0");
    br_cmd->add_option("--grid", br_args.grid, "radial grid size");
    br_cmd->add_option("--matrix", br_args.matrix, "JSON matrix file for fkdet");
    br_cmd->add_option("--N", br_args.n, "matrix size for singular");
    br_cmd->add_option("--reps", br_args.reps, "samples for singular");

    ReproArgs rp_args;
    auto* rp_cmd = app.add_subcommand("repro", "run a reproduction suite and report every check (JSON)");
    rp_cmd->add_option("suite", rp_args.suite, "criterion key, number, alias, or 'all'")->required();
    auto* rp_n = rp_cmd->add_option("--n", rp_args.n, "genus: word length");
    auto* rp_dim = rp_cmd->add_option("--N", rp_args.dim, "genus: matrix size");
    auto* rp_reps = rp_cmd->add_option("--reps", rp_args.reps, "genus: repetitions");

    for (auto* sub : app.get_subcommands({}))
    {
        sub->fallthrough();
    }

    std::vector<const char*> argv{"freeconv"};
    for (const auto& a : args)
    {
        argv.push_back(a.c_str());
    }
    try
    {
        app.parse(static_cast<int>(argv.size()), argv.data());
    }
    catch (const CLI::CallForHelp&)
    {
        out << app.help();
        return kExitOk;
    }
    catch (const CLI::ParseError& e)
    {
        if (e.get_exit_code() == 0)
        {
            out << app.help();
            return kExitOk;
        }
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    }

    const auto* sub = app.get_subcommands().front();
    const auto start = std::chrono::steady_clock::now();
    Output result;
    std::uint64_t seed = 0;
    try
    {
        seed = resolve_seed(seed_flag, seed_value);
        const std::string name = sub->get_name();
        if (name == "nc")
        {
            result = cmd_nc(nc_args);
        }
        else if (name == "transform")
        {
            result = cmd_transform(tr_args);
        }
        else if (name == "cumulants")
        {
            result = cmd_cumulants(cu_args);
        }
        else if (name == "catalog")
        {
            result = cmd_catalog(cat_args);
        }
        else if (name == "convolve")
        {
            result = cmd_convolve(cv_args);
        }
        else if (name == "mc")
        {
            for (int k = 1; k <= 4; ++k)
            {
                if (!d_specs[static_cast<std::size_t>(k - 1)].empty())
                {
                    mc_args.d[k] = d_specs[static_cast<std::size_t>(k - 1)];
                }
            }
            result = cmd_mc(mc_args, seed, threads);
        }
        else if (name == "brown")
        {
            result = cmd_brown(br_args, seed, threads);
        }
        else
        {
            rp_args.custom = rp_n->count() + rp_dim->count() + rp_reps->count() > 0;
            result = cmd_repro(rp_args, seed, threads);
        }
    }
    catch (const ArgumentError& e)
    {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    catch (const RangeError& e)
    {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    catch (const NumericalError& e)
    {
        err << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
    catch (const std::exception& e)
    {
        err << "failure: " << e.what() << "\n";
        return kExitNumerical;
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    std::string text;
    if (result.is_json)
    {
        json env;
        env["tool_version"] = kToolVersion;
        env["config"] = {{"command", sub->get_name()},
                         {"parameters", echo_parameters(sub)},
                         {"seed", seed},
                         {"output_path", out_path}};
        env["payload"] = result.payload;
        result.timing["wall_seconds"] = seconds;
        env["timing"] = result.timing;
        text = env.dump(2) + "\n";
    }
    else
    {
        text = result.text;
    }
    if (out_path.empty())
    {
        out << text;
    }
    else
    {
        std::ofstream f(out_path, std::ios::binary);
        if (!f || !(f << text))
        {
            err << "error: cannot write '" << out_path << "'\n";
            return kExitValidation;
        }
    }
    for (const auto& w : result.warnings)
    {
        err << "warning: " << w << "\n";
    }
    for (const auto& f : result.failures)
    {
        err << "FAIL " << f << "\n";
    }
    return result.failures.empty() ? kExitOk : kExitNumerical;
}

}  // namespace freeconv::cli
