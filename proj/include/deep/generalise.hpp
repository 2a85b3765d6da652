#pragma once

#include <optional>

#include "deep/patterns.hpp"

namespace deep {

struct GeneraliseConfig {
    double theta = 1.0;                 // correlation stop threshold; 1.0 = run to exhaustion
    std::optional<int> max_merges_k;    // alternative stop criterion
    SignTestConfig sign_test;           // used to re-test signs after x-merges
};

// Position of the single 0/1 opposition between two patterns sharing sign and
// all other positions (wildcards must match wildcards of the same kind).
std::optional<int> can_merge(const Pattern& a, const Pattern& b);

// Merge two same-signed (+/-) patterns; the distinctive position becomes *.
// The sign is kept, tables and supports add.
Pattern star_generalise(const Pattern& a, const Pattern& b, int at);

// Merge two ?-signed patterns; the distinctive position becomes x and the
// sign of the summed table is re-tested. `at` must not be a Z position.
Pattern cross_generalise(const Pattern& a, const Pattern& b, int at,
                         const std::vector<bool>& z_positions, const SignTestConfig& cfg);

// Greedy loop: repeatedly merge the eligible pair whose distinctive variable
// has the lowest |corr with Y| (ties: variable index, then canonical pattern
// order). Stops when nothing is mergeable, the best candidate's correlation
// exceeds theta, or max_merges_k merges have been applied.
PatternSet run_generalisation(PatternSet patterns, const StructureResult& s,
                              const GeneraliseConfig& cfg);

}  // namespace deep
