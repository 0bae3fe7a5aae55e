// Stand-alone acceptance runner: executes every criterion, prints one line
// per result plus a summary, and exits nonzero if anything failed.
// Usage: popmatch_acceptance [seed]

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>

#include "popmatch/acceptance.hpp"

int main(int argc, char** argv) {
    std::uint64_t seed = 20260819;
    if (argc > 1) {
        try {
            seed = std::stoull(argv[1]);
        } catch (const std::exception&) {
            std::cerr << "usage: " << argv[0] << " [seed]\n";
            return 2;
        }
    }
    std::cout << "running acceptance suite with seed " << seed << "\n";
    auto results = popmatch::run_acceptance(seed, &std::cout);
    int failed = 0;
    double total = 0.0;
    for (const auto& r : results) {
        failed += r.passed ? 0 : 1;
        total += r.seconds;
    }
    std::cout << results.size() - static_cast<std::size_t>(failed) << "/"
              << results.size() << " criteria passed in " << total << " s\n";
    return failed == 0 ? 0 : 1;
}
