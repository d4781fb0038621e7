// Acceptance harness: runs every verification criterion at its pinned
// tolerance and prints one pass/fail line per criterion.

#include <cstdio>

#include "opnorm/verify.hpp"

int main() {
    const auto results = opnorm::verify::run("all");
    bool all_pass = true;
    for (const auto& r : results) {
        std::printf("[%s] %2d %-24s (%6.2f s)  %s\n", r.pass ? "PASS" : "FAIL", r.id,
                    r.name.c_str(), r.seconds, r.detail.c_str());
        all_pass = all_pass && r.pass;
    }
    std::printf("%s: %zu criteria\n", all_pass ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED",
                results.size());
    return all_pass ? 0 : 1;
}
