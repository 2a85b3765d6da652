#include "deep/decision.hpp"

#include <fstream>
#include <sstream>

namespace deep {

std::string to_string(Advice a) {
    switch (a) {
        case Advice::treat: return "treat";
        case Advice::do_not_treat: return "do-not-treat";
        case Advice::no_recommendation: return "no-recommendation";
    }
    return "?";
}

std::string to_string(MatchSpecificity s) {
    switch (s) {
        case MatchSpecificity::exact: return "exact";
        case MatchSpecificity::star_match: return "star-match";
        case MatchSpecificity::cross_match: return "cross-match";
        case MatchSpecificity::unmatched: return "unmatched";
    }
    return "?";
}

namespace {

std::optional<MatchSpecificity> match_one(const std::vector<std::uint8_t>& individual,
                                          const Pattern& p) {
    bool saw_star = false, saw_cross = false;
    for (std::size_t i = 0; i < p.values.size(); ++i) {
        switch (p.values[i]) {
            case DescriptorValue::zero:
                if (individual[i] != 0) return std::nullopt;
                break;
            case DescriptorValue::one:
                if (individual[i] != 1) return std::nullopt;
                break;
            case DescriptorValue::star: saw_star = true; break;
            case DescriptorValue::cross: saw_cross = true; break;
        }
    }
    if (saw_cross) return MatchSpecificity::cross_match;
    if (saw_star) return MatchSpecificity::star_match;
    return MatchSpecificity::exact;
}

int specificity_rank(MatchSpecificity s) {
    switch (s) {
        case MatchSpecificity::exact: return 0;
        case MatchSpecificity::star_match: return 1;
        case MatchSpecificity::cross_match: return 2;
        case MatchSpecificity::unmatched: return 3;
    }
    return 3;
}

}  // namespace

Recommendation match(const std::vector<std::uint8_t>& individual, const PatternSet& set) {
    if (individual.size() != set.descriptor_vars.size())
        throw DataError("individual vector length does not match the descriptor");

    Recommendation best;
    for (std::size_t idx = 0; idx < set.patterns.size(); ++idx) {
        const auto spec = match_one(individual, set.patterns[idx]);
        if (!spec) continue;
        if (!best.pattern_index ||
            specificity_rank(*spec) < specificity_rank(best.specificity)) {
            best.pattern_index = idx;
            best.specificity = *spec;
            switch (set.patterns[idx].sign) {
                case Sign::positive: best.advice = Advice::treat; break;
                case Sign::negative: best.advice = Advice::do_not_treat; break;
                case Sign::uncertain: best.advice = Advice::no_recommendation; break;
            }
        }
    }
    return best;
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

}  // namespace

void batch_match(const std::string& individuals_csv, const NamedPatternSet& patterns,
                 const std::string& out_csv) {
    std::ifstream in(individuals_csv);
    if (!in) throw DataError("cannot open '" + individuals_csv + "'");
    std::string line;
    if (!std::getline(in, line)) throw DataError("'" + individuals_csv + "' is empty");
    const std::vector<std::string> header = split_comma(line);
    if (header != patterns.descriptor_names) {
        std::string want;
        for (const auto& name : patterns.descriptor_names) {
            if (!want.empty()) want += ',';
            want += name;
        }
        throw DataError("'" + individuals_csv + "' columns do not match the pattern descriptor (" +
                        want + ")");
    }

    std::ofstream out(out_csv);
    if (!out) throw DataError("cannot write '" + out_csv + "'");
    out << line << ",advice,specificity\n";

    std::size_t row = 1;
    std::vector<std::uint8_t> individual(header.size());
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_comma(line);
        if (fields.size() != header.size())
            throw DataError("'" + individuals_csv + "' row " + std::to_string(row) +
                            ": field count mismatch");
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (fields[i] == "0")
                individual[i] = 0;
            else if (fields[i] == "1")
                individual[i] = 1;
            else
                throw DataError("'" + individuals_csv + "' row " + std::to_string(row) +
                                ", column '" + header[i] + "': non-binary value '" + fields[i] +
                                "'");
        }
        const Recommendation rec = match(individual, patterns.set);
        for (std::size_t i = 0; i < fields.size(); ++i) out << fields[i] << ',';
        out << to_string(rec.advice) << ',' << to_string(rec.specificity) << '\n';
    }
    if (!out) throw DataError("failed while writing '" + out_csv + "'");
}

}  // namespace deep
