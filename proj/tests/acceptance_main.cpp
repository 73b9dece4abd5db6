#include <cstdio>
#include <cstdlib>

#include "csb/acceptance.hpp"

// Runs every acceptance criterion and prints one pass/fail line each.
int main(int argc, char** argv) {
    csb::AcceptanceOptions opts;
    for (int i = 1; i < argc; ++i)
        opts.only.push_back(std::atoi(argv[i]));
    if (const char* dir = std::getenv("CSB_SCRATCH"))
        opts.scratch_dir = dir;
    auto results = csb::run_acceptance(opts);
    bool ok = true;
    for (const auto& r : results) {
        std::printf("%s\n", csb::format_result_line(r).c_str());
        std::fflush(stdout);
        ok = ok && r.pass;
    }
    std::printf(ok ? "acceptance: all criteria passed\n" : "acceptance: FAILURES above\n");
    return ok ? 0 : 1;
}
