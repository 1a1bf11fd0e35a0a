// One line per acceptance criterion; exit status 1 if any fails.
#include <cstdio>
#include <cstring>

#include "tracekit/acceptance.hpp"

int main(int argc, char** argv)
{
    tracekit::SuiteOptions o;
    for (int i = 1; i < argc; ++i)
        if (std::strcmp(argv[i], "--quick") == 0) o.quick = true;
    auto results = tracekit::acceptance::run_suite(o);
    int failed = 0;
    for (const auto& r : results) {
        std::printf("criterion %d: %s  %s (%ld checks, %.1fs)%s%s\n", r.id, r.passed ? "PASS" : "FAIL", r.name.c_str(),
                    r.checks, r.seconds, r.detail.empty() ? "" : ": ", r.detail.c_str());
        if (!r.passed) ++failed;
    }
    std::printf("%zu/%zu criteria passed\n", results.size() - failed, results.size());
    return failed ? 1 : 0;
}
