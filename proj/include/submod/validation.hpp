#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "submod/instance.hpp"

namespace submod {

struct SuiteResult {
    std::string suite;
    std::string check;
    bool passed = false;
    std::string detail;
};

struct ValidateOptions {
    std::vector<std::string> suites;            // empty = all
    std::vector<InstanceSpec> extra_instances;  // appended to the corpus
    std::uint64_t seed = 1;
};

// Property suites over a built-in corpus: submodularity of every instance,
// the Lovasz extension properties, sampler distribution checks, cover
// invariants and the two-coordinate estimator demonstration. Returns one
// line per check; the CLI prints them as a table.
std::vector<SuiteResult> run_validation(const ValidateOptions& opts);

}  // namespace submod
