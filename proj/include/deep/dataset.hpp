#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace deep {

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Packed bit column; values are 0/1 only.
class BitColumn {
public:
    BitColumn() = default;
    explicit BitColumn(std::size_t n) : size_(n), words_((n + 63) / 64, 0) {}

    std::size_t size() const { return size_; }

    bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }

    void set(std::size_t i, bool v) {
        const std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (v)
            words_[i >> 6] |= mask;
        else
            words_[i >> 6] &= ~mask;
    }

    std::uint64_t count_ones() const;

    bool operator==(const BitColumn& other) const = default;

private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

// 2x2 counts of (W, Y) within a subgroup. n11 = count(W=1, Y=1), etc.
struct CrossTable {
    std::uint64_t n11 = 0, n10 = 0, n01 = 0, n00 = 0;

    std::uint64_t treated() const { return n11 + n10; }
    std::uint64_t control() const { return n01 + n00; }
    std::uint64_t total() const { return treated() + control(); }

    // Valid only when the corresponding denominator is positive.
    double p1() const { return static_cast<double>(n11) / static_cast<double>(treated()); }
    double p0() const { return static_cast<double>(n01) / static_cast<double>(control()); }
    double p_bar() const {
        return static_cast<double>(n11 + n01) / static_cast<double>(total());
    }

    CrossTable& operator+=(const CrossTable& o) {
        n11 += o.n11;
        n10 += o.n10;
        n01 += o.n01;
        n00 += o.n00;
        return *this;
    }

    bool operator==(const CrossTable&) const = default;
};

CrossTable operator+(CrossTable a, const CrossTable& b);

// Immutable columnar store of binary observational data. Columns are
// bit-vectors; W and Y are marked by index. Safe to share across threads
// after construction.
class BinaryDataset {
public:
    static BinaryDataset from_columns(std::vector<std::string> names,
                                      std::vector<BitColumn> columns,
                                      const std::string& treatment,
                                      const std::string& outcome);

    static BinaryDataset load_csv(const std::string& path, const std::string& treatment,
                                  const std::string& outcome);

    void save_csv(const std::string& path) const;

    std::size_t n() const { return n_; }
    std::size_t n_variables() const { return names_.size(); }
    const std::vector<std::string>& variable_names() const { return names_; }
    const std::string& name(int idx) const { return names_.at(idx); }
    int index_of(const std::string& name) const;  // -1 when absent
    int treatment_index() const { return treatment_; }
    int outcome_index() const { return outcome_; }

    bool value(std::size_t row, int var) const { return columns_[var].get(row); }
    const BitColumn& column(int var) const { return columns_.at(var); }

    // All variable indices except W and Y, ascending.
    std::vector<int> covariate_indices() const;

    // Per-record values restricted to `vars`, in record order.
    std::vector<std::vector<std::uint8_t>> project(const std::vector<int>& vars) const;

    // One cross table per distinct value-vector over `vars` (which must not
    // contain W or Y). Keys are in ascending lexicographic order.
    std::map<std::vector<std::uint8_t>, CrossTable> group_cross_tables(
        const std::vector<int>& vars) const;

private:
    std::size_t n_ = 0;
    std::vector<std::string> names_;
    std::vector<BitColumn> columns_;
    int treatment_ = -1;
    int outcome_ = -1;
};

}  // namespace deep
