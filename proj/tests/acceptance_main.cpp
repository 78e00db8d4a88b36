// One line per acceptance criterion; exit status 1 if any fails.
#include <cstdio>
#include <cstdlib>
#include <string>

#include "countdown/harness.hpp"

int main(int argc, char** argv) {
    countdown::SuiteOptions opt;
    opt.threads = countdown::defaultThreads();
    const std::string suite = argc > 1 ? argv[1] : "all";
    bool ok = true;
    for (const auto& r : countdown::runSuite(suite, opt)) {
        std::printf("[%s] %2d %-16s %7.2fs  %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds,
                    r.detail.c_str());
        std::fflush(stdout);
        ok = ok && r.pass;
    }
    return ok ? EXIT_SUCCESS : EXIT_FAILURE;
}
