#include "deep/dataset.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <sstream>

namespace deep {

std::uint64_t BitColumn::count_ones() const {
    std::uint64_t total = 0;
    for (std::uint64_t w : words_) total += std::popcount(w);
    return total;
}

CrossTable operator+(CrossTable a, const CrossTable& b) {
    a += b;
    return a;
}

BinaryDataset BinaryDataset::from_columns(std::vector<std::string> names,
                                          std::vector<BitColumn> columns,
                                          const std::string& treatment,
                                          const std::string& outcome) {
    if (names.size() != columns.size())
        throw DataError("column count does not match name count");
    if (names.empty()) throw DataError("dataset needs at least one column");

    BinaryDataset d;
    d.names_ = std::move(names);
    d.columns_ = std::move(columns);
    d.n_ = d.columns_.front().size();
    if (d.n_ == 0) throw DataError("dataset needs at least one record");
    for (std::size_t i = 0; i < d.columns_.size(); ++i) {
        if (d.columns_[i].size() != d.n_)
            throw DataError("column '" + d.names_[i] + "' has inconsistent length");
    }
    for (std::size_t i = 0; i < d.names_.size(); ++i) {
        for (std::size_t j = i + 1; j < d.names_.size(); ++j) {
            if (d.names_[i] == d.names_[j])
                throw DataError("duplicate column name '" + d.names_[i] + "'");
        }
    }
    d.treatment_ = d.index_of(treatment);
    if (d.treatment_ < 0) throw DataError("treatment column '" + treatment + "' not found");
    d.outcome_ = d.index_of(outcome);
    if (d.outcome_ < 0) throw DataError("outcome column '" + outcome + "' not found");
    if (d.treatment_ == d.outcome_)
        throw DataError("treatment and outcome must be distinct columns");
    return d;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
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

BinaryDataset BinaryDataset::load_csv(const std::string& path, const std::string& treatment,
                                      const std::string& outcome) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw DataError("'" + path + "' is empty");
    const std::vector<std::string> header = split_csv_line(line);

    std::vector<std::vector<std::uint8_t>> raw(header.size());
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            throw DataError("'" + path + "' row " + std::to_string(row) + ": expected " +
                            std::to_string(header.size()) + " fields, got " +
                            std::to_string(fields.size()));
        }
        for (std::size_t c = 0; c < fields.size(); ++c) {
            if (fields[c] == "0")
                raw[c].push_back(0);
            else if (fields[c] == "1")
                raw[c].push_back(1);
            else
                throw DataError("'" + path + "' row " + std::to_string(row) + ", column '" +
                                header[c] + "': non-binary value '" + fields[c] + "'");
        }
    }
    if (raw.front().empty()) throw DataError("'" + path + "' has no data rows");

    std::vector<BitColumn> columns;
    columns.reserve(header.size());
    for (const auto& values : raw) {
        BitColumn col(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) col.set(i, values[i] != 0);
        columns.push_back(std::move(col));
    }
    return from_columns(header, std::move(columns), treatment, outcome);
}

void BinaryDataset::save_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    for (std::size_t c = 0; c < names_.size(); ++c) {
        if (c) out << ',';
        out << names_[c];
    }
    out << '\n';
    for (std::size_t r = 0; r < n_; ++r) {
        for (std::size_t c = 0; c < columns_.size(); ++c) {
            if (c) out << ',';
            out << (columns_[c].get(r) ? '1' : '0');
        }
        out << '\n';
    }
    if (!out) throw DataError("failed while writing '" + path + "'");
}

int BinaryDataset::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (names_[i] == name) return static_cast<int>(i);
    }
    return -1;
}

std::vector<int> BinaryDataset::covariate_indices() const {
    std::vector<int> out;
    out.reserve(names_.size());
    for (int i = 0; i < static_cast<int>(names_.size()); ++i) {
        if (i != treatment_ && i != outcome_) out.push_back(i);
    }
    return out;
}

std::vector<std::vector<std::uint8_t>> BinaryDataset::project(
    const std::vector<int>& vars) const {
    for (int v : vars) {
        if (v < 0 || v >= static_cast<int>(names_.size()))
            throw DataError("projection index " + std::to_string(v) + " out of range");
    }
    std::vector<std::vector<std::uint8_t>> out(n_);
    for (std::size_t r = 0; r < n_; ++r) {
        auto& key = out[r];
        key.resize(vars.size());
        for (std::size_t k = 0; k < vars.size(); ++k) key[k] = columns_[vars[k]].get(r);
    }
    return out;
}

std::map<std::vector<std::uint8_t>, CrossTable> BinaryDataset::group_cross_tables(
    const std::vector<int>& vars) const {
    for (int v : vars) {
        if (v == treatment_ || v == outcome_)
            throw DataError("grouping variables must exclude treatment and outcome");
        if (v < 0 || v >= static_cast<int>(names_.size()))
            throw DataError("grouping index " + std::to_string(v) + " out of range");
    }

    std::map<std::vector<std::uint8_t>, CrossTable> groups;
    std::vector<std::uint8_t> key(vars.size());
    for (std::size_t r = 0; r < n_; ++r) {
        for (std::size_t k = 0; k < vars.size(); ++k) key[k] = columns_[vars[k]].get(r);
        CrossTable& t = groups[key];
        const bool w = columns_[treatment_].get(r);
        const bool y = columns_[outcome_].get(r);
        if (w && y)
            ++t.n11;
        else if (w)
            ++t.n10;
        else if (y)
            ++t.n01;
        else
            ++t.n00;
    }
    return groups;
}

}  // namespace deep
