#include "deep/structure.hpp"

#include <algorithm>
#include <functional>

namespace deep {

namespace {

// Visit all size-k subsets of pool in lexicographic order; stop early when fn
// returns true.
bool for_each_subset(const std::vector<int>& pool, int k,
                     const std::function<bool(const std::vector<int>&)>& fn) {
    const int n = static_cast<int>(pool.size());
    if (k > n) return false;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    std::vector<int> subset(k);
    while (true) {
        for (int i = 0; i < k; ++i) subset[i] = pool[idx[i]];
        if (fn(subset)) return true;
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) return false;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace

std::vector<int> find_parents_of_y(const BinaryDataset& d, const CITestConfig& cfg) {
    const int y = d.outcome_index();
    const int w = d.treatment_index();
    std::vector<int> active = d.covariate_indices();

    // The conditioning pool for a candidate X is (active \ {X}) + W, which has
    // |active| members, so rounds run while level <= |active| (capped).
    int level = 0;
    while (level <= std::min(cfg.max_condition_size, static_cast<int>(active.size()))) {
        for (std::size_t i = 0; i < active.size();) {
            const int x = active[i];
            std::vector<int> pool;
            pool.reserve(active.size());
            for (int v : active) {
                if (v != x) pool.push_back(v);
            }
            pool.push_back(w);  // W is always available to conditioning sets
            std::sort(pool.begin(), pool.end());

            const bool removed = for_each_subset(pool, level, [&](const std::vector<int>& s) {
                return ci_test(d, x, y, s, cfg).independent;
            });
            if (removed) {
                active.erase(active.begin() + static_cast<std::ptrdiff_t>(i));
            } else {
                ++i;
            }
        }
        ++level;
    }
    return active;
}

StructureResult split_adjustment_set(const BinaryDataset& d, const std::vector<int>& parents,
                                     const CITestConfig& cfg) {
    StructureResult result;
    result.parents_of_y = parents;
    std::sort(result.parents_of_y.begin(), result.parents_of_y.end());
    const int w = d.treatment_index();
    const int y = d.outcome_index();
    for (int x : result.parents_of_y) {
        if (ci_test(d, x, w, {}, cfg).independent) {
            result.y_parent_only_c.push_back(x);
        } else {
            result.adjustment_set_z.push_back(x);
        }
        result.corr_with_y[x] = correlation_with(d, x, y);
    }
    return result;
}

StructureResult learn_structure(const BinaryDataset& d, const CITestConfig& cfg) {
    return split_adjustment_set(d, find_parents_of_y(d, cfg), cfg);
}

}  // namespace deep
