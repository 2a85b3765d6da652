#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "deep/patterns.hpp"

namespace deep {

enum class Advice { treat, do_not_treat, no_recommendation };
enum class MatchSpecificity { exact, star_match, cross_match, unmatched };

std::string to_string(Advice a);
std::string to_string(MatchSpecificity s);

struct Recommendation {
    std::optional<std::size_t> pattern_index;  // into PatternSet::patterns
    Advice advice = Advice::no_recommendation;
    MatchSpecificity specificity = MatchSpecificity::unmatched;
};

// A pattern matches when every position is equal or holds a wildcard. At most
// one final pattern can match (merges preserve the partition property); if a
// hand-built set violates that, the most specific match wins. x dominates *
// in the specificity label.
Recommendation match(const std::vector<std::uint8_t>& individual, const PatternSet& set);

// Batch scoring: reads a CSV whose header must list exactly the descriptor
// names, appends advice and specificity columns.
void batch_match(const std::string& individuals_csv, const NamedPatternSet& patterns,
                 const std::string& out_csv);

}  // namespace deep
