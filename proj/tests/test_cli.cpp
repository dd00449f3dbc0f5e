#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "freeconv/cli.hpp"

using nlohmann::json;

namespace {

struct Run
{
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = freeconv::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

json payload(const Run& r)
{
    return json::parse(r.out).at("payload");
}

std::vector<std::string> lines(const std::string& text)
{
    std::vector<std::string> v;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);)
    {
        v.push_back(l);
    }
    return v;
}

std::string without_timing(const std::string& text)
{
    auto j = json::parse(text);
    j.erase("timing");
    return j.dump();
}

}  // namespace

TEST_CASE("catalog grid as CSV")
{
    const auto r = run({"catalog", "semicircle", "--grid", "-2.5:2.5:101", "--eps", "1e-4"});
    REQUIRE(r.code == 0);
    const auto rows = lines(r.out);
    CHECK(rows.size() == 102);
    CHECK(rows[0] == "x,density,stieltjes");
    CHECK(rows[1].rfind("-2.5,", 0) == 0);
    CHECK(run({"catalog", "semicircle", "--grid", "1:0:5"}).code == 2);
    CHECK(run({"catalog", "semicircle", "--eps", "5"}).code == 2);
    CHECK(payload(run({"catalog", "list"})).at("laws").size() == 7);
}

TEST_CASE("convolve add reproduces the arcsine moments")
{
    const auto r = run({"convolve", "add", "bernoulli2", "bernoulli2", "--order", "12"});
    REQUIRE(r.code == 0);
    const auto m = payload(r).at("moments").get<std::vector<double>>();
    const std::vector<double> arcsine{0, 2, 0, 6, 0, 20, 0, 70, 0, 252, 0, 924};
    REQUIRE(m.size() == arcsine.size());
    for (std::size_t i = 0; i < m.size(); ++i)
    {
        CHECK(m[i] == doctest::Approx(arcsine[i]).epsilon(1e-12));
    }
    const auto env = json::parse(r.out);
    CHECK(env.at("tool_version") == "1.0.0");
    CHECK(env.at("config").at("command") == "convolve");
    CHECK(env.at("config").at("parameters").at("order") == "12");

    const auto c = payload(run({"convolve", "compress-rescaled", "bernoulli2", "--t", "0.5", "--order", "6"}));
    CHECK(c.at("moments")[1].get<double>() == doctest::Approx(0.5));
    CHECK(run({"convolve", "compress", "bernoulli2"}).code == 2);
    CHECK(run({"convolve", "add", "bernoulli2"}).code == 2);
    CHECK(run({"convolve", "mul", "cauchy", "delta:x=1"}).code == 2);
}

TEST_CASE("repro genus example")
{
    const auto r = run({"repro", "genus", "--n", "4", "--N", "64", "--reps", "10000", "--seed", "7"});
    REQUIRE(r.code == 0);
    const auto p = payload(r);
    CHECK(p.at("passed") == true);
    const auto checks = p.at("suites")[0].at("checks");
    REQUIRE(checks.size() == 2);
    CHECK(checks[0].at("expected").get<double>() == 2.0 + 1.0 / 4096);
    CHECK(checks[1].at("passed") == true);
    for (const auto& c : checks)
    {
        CHECK(c.contains("tolerance"));
        CHECK(c.at("anchor") == "gue-trace-expansion");
    }
}

TEST_CASE("repro suites and failure reporting")
{
    const auto ok = run({"repro", "product-support"});
    CHECK(ok.code == 0);
    CHECK(payload(ok).at("suites")[0].at("criterion") == 13);
    CHECK(run({"repro", "moments"}).code == 0);

    // The rare-Bernoulli suite fails at orders >= 3; the CLI itemizes it and exits 1.
    const auto bad = run({"repro", "poisson"});
    CHECK(bad.code == 1);
    CHECK(bad.err.find("FAIL criterion 8 (poisson): k3") != std::string::npos);
    CHECK(payload(bad).at("passed") == false);

    CHECK(run({"repro", "nonsense"}).code == 2);
    CHECK(run({"repro", "genus", "--n", "5"}).code == 2);
}

TEST_CASE("exit codes and validation")
{
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"nc", "catalan", "--k", "3", "--unknown", "1"}).code == 2);
    CHECK(run({"nc", "catalan", "--k", "31"}).code == 2);
    CHECK(run({"nc", "catalan"}).code == 2);
    CHECK(run({"--help"}).code == 0);
    CHECK(payload(run({"nc", "catalan", "--k", "4"})).at("catalan") == 14);
    CHECK(payload(run({"nc", "mobius", "--a", "{1}{2}{3}", "--b", "{1,2,3}"})).at("mobius") == 2);
    CHECK(payload(run({"nc", "kreweras", "--partition", "{1,4}{2,3}"})).at("kreweras") == "{1,3}{2}{4}");
    CHECK(run({"mc", "trace", "--word", "A D1", "--N", "8", "--reps", "10"}).code == 2);
    CHECK(run({"mc", "trace", "--word", "A Q", "--N", "8"}).code == 2);
    CHECK(run({"brown", "fkdet", "--matrix", "/nonexistent.json"}).code == 2);
}

TEST_CASE("seed handling and reproducibility")
{
    const std::vector<std::string> cmd{"mc", "trace", "--word", "A A", "--N", "16", "--reps", "200", "--seed", "42"};
    const auto a = run(cmd);
    const auto b = run(cmd);
    REQUIRE(a.code == 0);
    CHECK(without_timing(a.out) == without_timing(b.out));
    const auto threaded = [&] {
        auto c = cmd;
        c.push_back("--threads");
        c.push_back("3");
        return run(c);
    }();
    CHECK(payload(threaded).at("mean") == payload(a).at("mean"));

    setenv("FREECONV_SEED", "42", 1);
    const auto env = run({"mc", "trace", "--word", "A A", "--N", "16", "--reps", "200"});
    CHECK(payload(env).at("mean") == payload(a).at("mean"));
    CHECK(json::parse(env.out).at("config").at("seed") == 42);
    setenv("FREECONV_SEED", "not-a-number", 1);
    CHECK(run({"mc", "trace", "--word", "A A", "--N", "16"}).code == 2);
    unsetenv("FREECONV_SEED");

    const auto p = payload(run({"mc", "trace", "--word", "A A A A", "--N", "32", "--reps", "2000", "--seed", "1"}));
    CHECK(p.at("exact_prediction").get<double>() == doctest::Approx(2.0 + 1.0 / 1024));
    CHECK(std::abs(p.at("z").get<double>()) < 4.0);
}

TEST_CASE("brown commands and output files")
{
    const auto radial = run({"brown", "radial", "--sigma", "spec:marchenko-pastur:lambda=1", "--w", "0", "--grid", "512"});
    REQUIRE(radial.code == 0);
    const auto rows = lines(radial.out);
    CHECK(rows.size() == 513);
    CHECK(rows[0] == "r,F,rho");
    CHECK(rows.back().rfind("1,1,", 0) == 0);

    const std::string mpath = "/tmp/freeconv_cli_matrix.json";
    std::ofstream(mpath) << "[[2, 0], [0, [0, 8]]]";
    const auto det = payload(run({"brown", "fkdet", "--matrix", mpath}));
    CHECK(det.at("fk_det").get<double>() == doctest::Approx(4.0));
    CHECK(det.at("fk_det_lu").get<double>() == doctest::Approx(4.0));
    std::ofstream(mpath) << "[[1, 2], [3]]";
    CHECK(run({"brown", "fkdet", "--matrix", mpath}).code == 2);
    std::remove(mpath.c_str());

    const std::string out = "/tmp/freeconv_cli_out.csv";
    const auto to_file = run({"brown", "radial", "--sigma", "bernoulli:p=0.5", "--w", "0.5", "--grid", "64", "--out", out});
    CHECK(to_file.code == 0);
    CHECK(to_file.out.empty());
    std::ifstream in(out);
    std::string header;
    std::getline(in, header);
    CHECK(header == "r,F,rho");
    std::remove(out.c_str());

    CHECK(run({"brown", "radial", "--sigma", "semicircle"}).code == 2);
    const auto trunc = run({"brown", "radial", "--moments", "1,2,5,14,42,132,429,1430", "--order", "8"});
    CHECK(trunc.code == 0);
    CHECK(trunc.err.find("warning") != std::string::npos);
}

TEST_CASE("transform and cumulants")
{
    const auto t = payload(run({"transform", "marchenko-pastur:lambda=0.5", "--order", "6"}));
    for (const auto& k : t.at("cumulants"))
    {
        CHECK(k.get<double>() == doctest::Approx(0.5));
    }
    CHECK(t.at("S")[0].get<double>() == doctest::Approx(2.0));
    const auto sym = payload(run({"transform", "semicircle", "--order", "8"}));
    CHECK(sym.contains("zS2"));
    const auto c = payload(run({"cumulants", "--moments", "0,1,0,2,0,5"}));
    CHECK(c.at("lattice")[1].get<double>() == doctest::Approx(1.0));
    CHECK(c.at("max_gap").get<double>() < 1e-12);
    CHECK(run({"cumulants"}).code == 2);
    CHECK(run({"cumulants", "semicircle", "--moments", "1"}).code == 2);
    CHECK(run({"cumulants", "--moments", "1,x"}).code == 2);
}

TEST_CASE("spectrum histogram")
{
    const auto r = run({"mc", "spectrum", "--ensemble", "wishart", "--N", "32", "--bins", "10", "--reps", "2"});
    REQUIRE(r.code == 0);
    const auto rows = lines(r.out);
    CHECK(rows.size() == 11);
    long long total = 0;
    for (std::size_t i = 1; i < rows.size(); ++i)
    {
        total += std::stoll(rows[i].substr(rows[i].find(',', rows[i].find(',') + 1) + 1));
    }
    CHECK(total == 64);
}
