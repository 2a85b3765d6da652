#include "deep/generalise.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace deep {

std::optional<int> can_merge(const Pattern& a, const Pattern& b) {
    if (a.sign != b.sign) return std::nullopt;
    if (a.values.size() != b.values.size())
        throw std::invalid_argument("can_merge: descriptor lengths differ");
    int distinctive = -1;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const DescriptorValue va = a.values[i];
        const DescriptorValue vb = b.values[i];
        if (va == vb) continue;
        const bool opposition =
            (va == DescriptorValue::zero && vb == DescriptorValue::one) ||
            (va == DescriptorValue::one && vb == DescriptorValue::zero);
        if (!opposition) return std::nullopt;  // wildcard vs literal never merges
        if (distinctive >= 0) return std::nullopt;
        distinctive = static_cast<int>(i);
    }
    if (distinctive < 0) return std::nullopt;
    return distinctive;
}

Pattern star_generalise(const Pattern& a, const Pattern& b, int at) {
    if (a.sign == Sign::uncertain)
        throw std::invalid_argument("star_generalise requires signed patterns");
    Pattern merged = a;
    merged.values[at] = DescriptorValue::star;
    merged.table += b.table;
    return merged;
}

Pattern cross_generalise(const Pattern& a, const Pattern& b, int at,
                         const std::vector<bool>& z_positions, const SignTestConfig& cfg) {
    if (a.sign != Sign::uncertain || b.sign != Sign::uncertain)
        throw std::invalid_argument("cross_generalise requires '?'-signed patterns");
    if (at >= 0 && at < static_cast<int>(z_positions.size()) && z_positions[at])
        throw std::invalid_argument("cross_generalise: adjustment variables cannot be omitted");
    Pattern merged = a;
    merged.values[at] = DescriptorValue::cross;
    merged.table += b.table;
    merged.sign = sign_of_cate(merged.table, cfg);
    return merged;
}

namespace {

struct Candidate {
    double corr;
    int var;
    std::size_t i, j;  // indices into the canonically ordered pattern list
    int position;
};

}  // namespace

PatternSet run_generalisation(PatternSet set, const StructureResult& s,
                              const GeneraliseConfig& cfg) {
    set.sort_canonical();
    int merges = 0;
    while (!cfg.max_merges_k || merges < *cfg.max_merges_k) {
        std::optional<Candidate> best;
        for (std::size_t i = 0; i < set.patterns.size(); ++i) {
            for (std::size_t j = i + 1; j < set.patterns.size(); ++j) {
                const auto pos = can_merge(set.patterns[i], set.patterns[j]);
                if (!pos) continue;
                if (set.patterns[i].sign == Sign::uncertain && set.z_positions[*pos]) {
                    continue;  // Z must stay intact under x-generalisation
                }
                const int var = set.descriptor_vars[*pos];
                const auto it = s.corr_with_y.find(var);
                const double corr = it == s.corr_with_y.end() ? 0.0 : it->second;
                // Patterns are kept in canonical order, so (i, j) ascending is
                // exactly the canonical tie-break on the pair.
                if (!best || corr < best->corr ||
                    (corr == best->corr &&
                     (var < best->var || (var == best->var && std::tie(i, j) <
                                                                 std::tie(best->i, best->j))))) {
                    best = Candidate{corr, var, i, j, *pos};
                }
            }
        }
        if (!best) break;
        if (best->corr > cfg.theta) break;

        const Pattern& a = set.patterns[best->i];
        const Pattern& b = set.patterns[best->j];
        Pattern merged = a.sign == Sign::uncertain
                             ? cross_generalise(a, b, best->position, set.z_positions,
                                                cfg.sign_test)
                             : star_generalise(a, b, best->position);
        set.patterns.erase(set.patterns.begin() + static_cast<std::ptrdiff_t>(best->j));
        set.patterns.erase(set.patterns.begin() + static_cast<std::ptrdiff_t>(best->i));
        set.patterns.push_back(std::move(merged));
        set.sort_canonical();
        ++merges;
    }
    return set;
}

}  // namespace deep
