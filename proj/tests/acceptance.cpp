// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. The same checks back the CLI's `reproduce` subcommand.

#include <cstdio>

#include "berry/checks.hpp"

int main() {
    berry::CheckOptions opts;
    bool all_pass = true;
    std::size_t index = 0;
    for (const berry::Check& check : berry::acceptance_checks()) {
        ++index;
        const berry::CheckResult res = berry::run_check(check, opts);
        all_pass = all_pass && res.pass;
        std::printf("%s  %zu. %s  [%s]  (worst error %.3g of tolerance)\n",
                    res.pass ? "PASS" : "FAIL", index, check.name.c_str(), check.group.c_str(),
                    res.worst);
        if (!res.pass)
            for (const std::string& line : res.lines) std::printf("%s\n", line.c_str());
        std::fflush(stdout);
    }
    std::printf(all_pass ? "acceptance: all criteria passed\n"
                         : "acceptance: FAILURES present\n");
    return all_pass ? 0 : 1;
}
