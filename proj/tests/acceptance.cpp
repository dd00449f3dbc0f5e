// Runs every acceptance criterion with its fixed seeds and prints one
// PASS/FAIL line per criterion; failing checks are itemized below the line.

#include <cstdio>
#include <cstdlib>
#include <string>

#include "freeconv/repro.hpp"

using namespace freeconv::repro;

int main(int argc, char** argv)
{
    RunOptions opt;
    if (const char* t = std::getenv("FREECONV_THREADS"))
    {
        opt.threads = std::max(1, std::atoi(t));
    }
    int first = 1, last = kCriteria;
    if (argc > 1)
    {
        first = last = criterion_id(argv[1]);
        if (first == 0)
        {
            std::fprintf(stderr, "unknown criterion '%s'\n", argv[1]);
            return 2;
        }
    }
    int failed = 0;
    for (int id = first; id <= last; ++id)
    {
        const auto r = run_criterion(id, opt);
        const bool ok = r.passed();
        failed += ok ? 0 : 1;
        std::printf("%s criterion %2d [%s] %s (%zu checks, %.2f s)\n", ok ? "PASS" : "FAIL", r.id, r.anchor.c_str(),
                    r.title.c_str(), r.checks.size(), r.seconds);
        if (!ok)
        {
            for (const auto& c : r.failures())
            {
                if (c.relation == "max")
                {
                    std::printf("     - %s: observed %.6g, bound %.6g\n", c.name.c_str(), c.observed, c.tolerance);
                }
                else
                {
                    std::printf("     - %s: observed %.10g, expected %.10g, tolerance %.3g\n", c.name.c_str(),
                                c.observed, c.expected, c.tolerance);
                }
            }
            for (const auto& n : r.notes)
            {
                std::printf("       %s\n", n.c_str());
            }
        }
        std::fflush(stdout);
    }
    std::printf("%d of %d criteria passed\n", last - first + 1 - failed, last - first + 1);
    return failed == 0 ? 0 : 1;
}
