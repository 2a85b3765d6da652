#pragma once

#include <map>
#include <vector>

#include "deep/dataset.hpp"
#include "deep/stats.hpp"

namespace deep {

struct StructureResult {
    std::vector<int> parents_of_y;     // ascending; never contains W
    std::vector<int> adjustment_set_z; // parents marginally dependent on W
    std::vector<int> y_parent_only_c;  // parents marginally independent of W
    std::map<int, double> corr_with_y; // |phi| per parent
};

// PC-simple restricted to the neighbourhood of Y. Candidates are the
// covariates; W is never a candidate but is always available to conditioning
// sets (paths mediated by W cannot be blocked otherwise). Within one round,
// candidates are visited in ascending index order and removals apply
// immediately; subsets of equal size are enumerated lexicographically.
std::vector<int> find_parents_of_y(const BinaryDataset& d, const CITestConfig& cfg);

// Marginal test of each parent against W: independent parents form C, the
// rest form Z. Also records each parent's |phi| with Y.
StructureResult split_adjustment_set(const BinaryDataset& d, const std::vector<int>& parents,
                                     const CITestConfig& cfg);

StructureResult learn_structure(const BinaryDataset& d, const CITestConfig& cfg);

}  // namespace deep
