// Runs every acceptance criterion at its stated tolerance and prints one line per check.

#include <cstdio>
#include <iostream>

#include "lambda_lab/verify.hpp"

int main() {
    using namespace lambda_lab;
    const auto s = verify(Suite::all, 7);
    int failed = 0;
    for (const auto& r : s.checks) {
        const std::string tag = r.id ? "criterion " + std::to_string(r.id) : std::string("auxiliary");
        std::printf("%s %-12s %-40s measured %.6g required %.6g (%.1f s)\n", r.passed ? "PASS" : "FAIL", tag.c_str(),
                    r.name.c_str(), r.measured, r.required, r.seconds);
        if (!r.detail.empty()) std::printf("     %s\n", r.detail.c_str());
        if (!r.passed) ++failed;
    }
    std::printf("%zu checks, %d failed\n", s.checks.size(), failed);
    return failed == 0 ? 0 : 1;
}
