// The executable acceptance suite: ten end-to-end criteria exercising every
// module against exhaustive oracles and the worked examples. Returned
// results carry pass/fail plus a human-readable detail line; the `popmatch
// selftest` subcommand and the dedicated acceptance binary both run this.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace popmatch {

struct CriterionResult {
    int number = 0;
    std::string description;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

// Runs all criteria in order. `seed` drives every random generator (same
// seed, same verdicts); `progress`, when non-null, receives one line per
// finished criterion. Never throws: a criterion that raises is reported
// failed with the exception text in its detail.
std::vector<CriterionResult> run_acceptance(std::uint64_t seed,
                                            std::ostream* progress);

}  // namespace popmatch
