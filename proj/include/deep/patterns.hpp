#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "deep/dataset.hpp"
#include "deep/stats.hpp"
#include "deep/structure.hpp"

namespace deep {

enum class DescriptorValue : std::uint8_t { zero = 0, one = 1, star = 2, cross = 3 };

char to_char(DescriptorValue v);
DescriptorValue descriptor_from_char(char c);

struct Pattern {
    std::vector<DescriptorValue> values;  // aligned with PatternSet::descriptor_vars
    Sign sign = Sign::uncertain;
    CrossTable table;

    std::uint64_t support() const { return table.total(); }
    bool has_wildcard() const;

    bool operator==(const Pattern&) const = default;
};

// Canonical order: lexicographic on the value vector with 0 < 1 < * < x.
bool pattern_less(const Pattern& a, const Pattern& b);

struct PatternSet {
    std::vector<int> descriptor_vars;    // ascending variable indices (= PA(Y))
    std::vector<bool> z_positions;       // per position: belongs to Z
    std::vector<Pattern> patterns;       // canonically ordered
    bool whole_population = false;       // PA(Y) was empty

    void sort_canonical();
};

// One pattern per distinct value-vector over PA(Y); patterns partition the
// records. Empty PA(Y) degenerates to the single whole-population pattern
// with the warning flag set.
PatternSet initialise_patterns(const BinaryDataset& d, const StructureResult& s,
                               const SignTestConfig& cfg);

// p1 - p0. Throws DataError when an arm is empty.
double cate(const CrossTable& t);

// Pattern file format: one column per descriptor variable (cells 0/1/*/x),
// then sign, cate, n11, n10, n01, n00.
void write_pattern_csv(std::ostream& os, const PatternSet& set,
                       const std::vector<std::string>& variable_names);
void write_pattern_csv(const std::string& path, const PatternSet& set,
                       const std::vector<std::string>& variable_names);

struct NamedPatternSet {
    std::vector<std::string> descriptor_names;
    PatternSet set;  // descriptor_vars are positions 0..k-1 in file order
};

NamedPatternSet read_pattern_csv(const std::string& path);

}  // namespace deep
