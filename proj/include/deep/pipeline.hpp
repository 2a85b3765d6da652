#pragma once

#include <optional>

#include "deep/dataset.hpp"
#include "deep/generalise.hpp"
#include "deep/patterns.hpp"
#include "deep/structure.hpp"

namespace deep {

struct DiscoveryConfig {
    double alpha = 0.01;
    double gamma = 0.95;
    double theta = 1.0;
    std::optional<int> max_merges;
    int max_condition_size = 3;
    bool bonferroni = false;

    CITestConfig ci_config() const { return {alpha, max_condition_size}; }
};

struct PhaseTimings {
    double structure_seconds = 0.0;
    double initialise_seconds = 0.0;
    double generalise_seconds = 0.0;
    double total_seconds = 0.0;
};

struct DiscoveryResult {
    StructureResult structure;
    PatternSet initial;
    PatternSet patterns;
    SignTestConfig sign_test;  // after any Bonferroni adjustment
    PhaseTimings timings;
};

// The full pipeline: structure learning, pattern initialisation, greedy
// generalisation. With bonferroni set, the sign-test significance level
// (1 - gamma) is divided by the number of initial patterns and the initial
// signs are recomputed at the adjusted critical value.
DiscoveryResult discover(const BinaryDataset& d, const DiscoveryConfig& cfg);

}  // namespace deep
