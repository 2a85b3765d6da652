#include "deep/patterns.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace deep {

char to_char(DescriptorValue v) {
    switch (v) {
        case DescriptorValue::zero: return '0';
        case DescriptorValue::one: return '1';
        case DescriptorValue::star: return '*';
        case DescriptorValue::cross: return 'x';
    }
    return '?';
}

DescriptorValue descriptor_from_char(char c) {
    switch (c) {
        case '0': return DescriptorValue::zero;
        case '1': return DescriptorValue::one;
        case '*': return DescriptorValue::star;
        case 'x':
        case 'X': return DescriptorValue::cross;
        default:
            throw std::invalid_argument(std::string("not a descriptor value: '") + c + "'");
    }
}

bool Pattern::has_wildcard() const {
    return std::any_of(values.begin(), values.end(), [](DescriptorValue v) {
        return v == DescriptorValue::star || v == DescriptorValue::cross;
    });
}

bool pattern_less(const Pattern& a, const Pattern& b) { return a.values < b.values; }

void PatternSet::sort_canonical() {
    std::sort(patterns.begin(), patterns.end(), pattern_less);
}

PatternSet initialise_patterns(const BinaryDataset& d, const StructureResult& s,
                               const SignTestConfig& cfg) {
    PatternSet set;
    set.descriptor_vars = s.parents_of_y;
    std::sort(set.descriptor_vars.begin(), set.descriptor_vars.end());
    set.z_positions.resize(set.descriptor_vars.size(), false);
    for (std::size_t i = 0; i < set.descriptor_vars.size(); ++i) {
        const int var = set.descriptor_vars[i];
        set.z_positions[i] = std::find(s.adjustment_set_z.begin(), s.adjustment_set_z.end(),
                                       var) != s.adjustment_set_z.end();
    }
    set.whole_population = set.descriptor_vars.empty();

    const auto groups = d.group_cross_tables(set.descriptor_vars);
    set.patterns.reserve(groups.size());
    for (const auto& [key, table] : groups) {
        Pattern p;
        p.values.reserve(key.size());
        for (std::uint8_t v : key) {
            p.values.push_back(v ? DescriptorValue::one : DescriptorValue::zero);
        }
        p.table = table;
        p.sign = sign_of_cate(table, cfg);
        set.patterns.push_back(std::move(p));
    }
    // std::map iteration already yields canonical order; keep the invariant
    // explicit regardless.
    set.sort_canonical();
    return set;
}

double cate(const CrossTable& t) {
    if (t.treated() == 0 || t.control() == 0)
        throw DataError("cate undefined: empty treatment or control arm");
    return t.p1() - t.p0();
}

namespace {

void write_pattern_row(std::ostream& os, const Pattern& p) {
    for (DescriptorValue v : p.values) os << to_char(v) << ',';
    os << to_char(p.sign) << ',';
    if (p.table.treated() > 0 && p.table.control() > 0) {
        os << std::setprecision(10) << cate(p.table);
    }
    os << ',' << p.table.n11 << ',' << p.table.n10 << ',' << p.table.n01 << ',' << p.table.n00;
    os << '\n';
}

}  // namespace

void write_pattern_csv(std::ostream& os, const PatternSet& set,
                       const std::vector<std::string>& variable_names) {
    for (int var : set.descriptor_vars) os << variable_names.at(var) << ',';
    os << "sign,cate,n11,n10,n01,n00\n";
    for (const Pattern& p : set.patterns) write_pattern_row(os, p);
}

void write_pattern_csv(const std::string& path, const PatternSet& set,
                       const std::vector<std::string>& variable_names) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    write_pattern_csv(out, set, variable_names);
    if (!out) throw DataError("failed while writing '" + path + "'");
}

namespace {

std::vector<std::string> split_comma(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(field);
            field.clear();
        } else if (c != '\r') {
            field.push_back(c);
        }
    }
    fields.push_back(field);
    return fields;
}

std::uint64_t parse_count(const std::string& s, const std::string& path, std::size_t row) {
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw DataError("'" + path + "' row " + std::to_string(row) + ": bad count '" + s + "'");
    return value;
}

}  // namespace

NamedPatternSet read_pattern_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw DataError("'" + path + "' is empty");
    const std::vector<std::string> header = split_comma(line);
    static const std::vector<std::string> tail = {"sign", "cate", "n11", "n10", "n01", "n00"};
    if (header.size() < tail.size())
        throw DataError("'" + path + "': not a pattern file (missing fixed columns)");
    const std::size_t k = header.size() - tail.size();
    for (std::size_t i = 0; i < tail.size(); ++i) {
        if (header[k + i] != tail[i])
            throw DataError("'" + path + "': expected column '" + tail[i] + "', got '" +
                            header[k + i] + "'");
    }

    NamedPatternSet out;
    out.descriptor_names.assign(header.begin(), header.begin() + static_cast<std::ptrdiff_t>(k));
    for (std::size_t i = 0; i < k; ++i) out.set.descriptor_vars.push_back(static_cast<int>(i));
    out.set.z_positions.resize(k, false);

    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_comma(line);
        if (fields.size() != header.size())
            throw DataError("'" + path + "' row " + std::to_string(row) + ": field count mismatch");
        Pattern p;
        for (std::size_t i = 0; i < k; ++i) {
            if (fields[i].size() != 1)
                throw DataError("'" + path + "' row " + std::to_string(row) +
                                ": bad descriptor cell '" + fields[i] + "'");
            p.values.push_back(descriptor_from_char(fields[i][0]));
        }
        if (fields[k].size() != 1)
            throw DataError("'" + path + "' row " + std::to_string(row) + ": bad sign");
        p.sign = sign_from_char(fields[k][0]);
        p.table.n11 = parse_count(fields[k + 2], path, row);
        p.table.n10 = parse_count(fields[k + 3], path, row);
        p.table.n01 = parse_count(fields[k + 4], path, row);
        p.table.n00 = parse_count(fields[k + 5], path, row);
        out.set.patterns.push_back(std::move(p));
    }
    return out;
}

}  // namespace deep
