#pragma once

// The fixed-seed reproduction suites behind the acceptance criteria. Each
// suite returns every observed value next to its target and tolerance.

#include <cstdint>
#include <string>
#include <vector>

namespace freeconv::repro {

struct Check
{
    std::string name;
    double observed = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    /// "abs": |observed - expected| <= tolerance; "max": observed <= tolerance.
    std::string relation = "abs";
    bool passed = false;
};

struct CriterionReport
{
    int id = 0;
    std::string key;
    std::string title;
    std::string anchor;
    std::vector<Check> checks;
    std::vector<std::string> notes;
    double seconds = 0.0;

    bool passed() const;
    /// Checks that did not pass.
    std::vector<Check> failures() const;
};

struct RunOptions
{
    int threads = 1;
};

struct CriterionInfo
{
    int id;
    std::string key;
    std::string title;
    std::string anchor;
};

inline constexpr int kCriteria = 16;

const std::vector<CriterionInfo>& criteria();
/// Id for a suite key or alias ("moments", "weingarten", "product-support", ...); 0 if unknown.
int criterion_id(const std::string& key);
CriterionReport run_criterion(int id, const RunOptions& opt = {});

/// Exact genus expansion of tr(A^n) with D = I against Monte Carlo at one (n, N).
CriterionReport genus_report(int n, int dim, long long reps, std::uint64_t seed, int threads = 1);

}  // namespace freeconv::repro
