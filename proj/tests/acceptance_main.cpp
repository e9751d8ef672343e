// Validation suite runner: one pass/fail line per criterion, nonzero exit on
// any failure. The same suite backs the CLI `validate` subcommand.

#include <cstdio>
#include <cstdlib>

#include "spectrafrac/acceptance.hpp"

int main(int argc, char** argv) {
    unsigned jobs = 0;
    if (argc > 1) jobs = static_cast<unsigned>(std::strtoul(argv[1], nullptr, 10));
    auto results = spectrafrac::run_acceptance(jobs);
    std::fputs(spectrafrac::format_results(results).c_str(), stdout);
    return spectrafrac::all_passed(results) ? 0 : 1;
}
