#pragma once

// Shared fixtures: the worked-example pattern table and the synthetic DAGs
// used across unit and acceptance tests.

#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include "deep/dataset.hpp"
#include "deep/generalise.hpp"
#include "deep/patterns.hpp"
#include "deep/simgen.hpp"
#include "deep/structure.hpp"

namespace deep::testing {

// Eight most-specific subgroups over (X1,X2,X3,X4) with Z = {X1,X2}.
// Signs at gamma=0.95 are (+,+,+,-,-,-,?,?); the two '?' groups cross-merge
// over X3 into a '+' pattern. Treated shares are engineered so X1,X2 are
// W-dependent and X3,X4 exactly W-balanced.
struct WorkedExampleGroup {
    std::array<std::uint8_t, 4> key;
    CrossTable table;
};

inline std::vector<WorkedExampleGroup> worked_example_groups() {
    return {
        {{1, 1, 0, 0}, {64, 6, 12, 18}},
        {{1, 1, 1, 0}, {16, 44, 0, 40}},
        {{1, 0, 0, 1}, {59, 1, 33, 7}},
        {{0, 0, 1, 0}, {16, 19, 63, 2}},
        {{1, 0, 1, 1}, {29, 31, 35, 5}},
        {{1, 1, 1, 1}, {0, 60, 7, 33}},
        {{0, 0, 0, 1}, {1, 34, 0, 65}},
        {{0, 0, 1, 1}, {14, 46, 4, 36}},
    };
}

// 800-row dataset realising the groups; columns W,Y,X1,X2,X3,X4.
inline BinaryDataset worked_example_dataset() {
    std::vector<std::array<std::uint8_t, 6>> rows;
    for (const auto& g : worked_example_groups()) {
        auto push = [&](std::uint8_t w, std::uint8_t y, std::uint64_t count) {
            for (std::uint64_t i = 0; i < count; ++i)
                rows.push_back({w, y, g.key[0], g.key[1], g.key[2], g.key[3]});
        };
        push(1, 1, g.table.n11);
        push(1, 0, g.table.n10);
        push(0, 1, g.table.n01);
        push(0, 0, g.table.n00);
    }
    std::vector<BitColumn> columns(6, BitColumn(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < 6; ++c) columns[c].set(r, rows[r][c] != 0);
    }
    return BinaryDataset::from_columns({"W", "Y", "X1", "X2", "X3", "X4"}, std::move(columns),
                                       "W", "Y");
}

// Structure matching the dataset: descriptor X1..X4 (columns 2..5), Z={X1,X2}.
inline StructureResult worked_example_structure() {
    StructureResult s;
    s.parents_of_y = {2, 3, 4, 5};
    s.adjustment_set_z = {2, 3};
    s.y_parent_only_c = {4, 5};
    s.corr_with_y = {{2, 0.34}, {3, 0.29}, {4, 0.12}, {5, 0.22}};
    return s;
}

inline PatternSet worked_example_pattern_set() {
    PatternSet set;
    set.descriptor_vars = {2, 3, 4, 5};
    set.z_positions = {true, true, false, false};
    const SignTestConfig cfg = SignTestConfig::for_confidence(0.95);
    for (const auto& g : worked_example_groups()) {
        Pattern p;
        for (std::uint8_t v : g.key)
            p.values.push_back(v ? DescriptorValue::one : DescriptorValue::zero);
        p.table = g.table;
        p.sign = sign_of_cate(g.table, cfg);
        set.patterns.push_back(std::move(p));
    }
    set.sort_canonical();
    return set;
}

// The five expected merge results, canonically ordered.
inline std::vector<Pattern> worked_example_final_patterns() {
    using V = DescriptorValue;
    auto mk = [](std::vector<V> values, Sign sign, CrossTable t) {
        Pattern p;
        p.values = std::move(values);
        p.sign = sign;
        p.table = t;
        return p;
    };
    std::vector<Pattern> expect = {
        mk({V::zero, V::zero, V::one, V::zero}, Sign::negative, {16, 19, 63, 2}),   // c
        mk({V::zero, V::zero, V::cross, V::one}, Sign::positive, {15, 80, 4, 101}), // e
        mk({V::one, V::zero, V::zero, V::one}, Sign::positive, {59, 1, 33, 7}),     // b
        mk({V::one, V::one, V::star, V::zero}, Sign::positive, {80, 50, 12, 58}),   // a
        mk({V::one, V::star, V::one, V::one}, Sign::negative, {29, 91, 42, 38}),    // d
    };
    return expect;
}

// --- synthetic DAG builders ---------------------------------------------

inline int dag_add(CausalDag& dag, const std::string& name) {
    dag.names.push_back(name);
    dag.parents.emplace_back();
    dag.cpds.emplace_back();
    return dag.node_count() - 1;
}

// A -> B -> C chain with strong edges; useful for d-separation style checks.
inline CausalDag chain3_dag(double s = 0.8) {
    CausalDag dag;
    const int a = dag_add(dag, "A");
    const int b = dag_add(dag, "B");
    const int c = dag_add(dag, "C");
    dag.cpds[a] = {0.5};
    dag.parents[b] = {a};
    dag.cpds[b] = {1.0 - s, s};
    dag.parents[c] = {b};
    dag.cpds[c] = {1.0 - s, s};
    dag.treatment = a;
    dag.outcome = c;
    dag.validate();
    return dag;
}

// Pure confounding: X -> W, X -> Y, no W -> Y edge. Raw p1-p0 is biased away
// from zero while the true effect is exactly zero.
inline CausalDag canary_dag() {
    CausalDag dag;
    const int w = dag_add(dag, "W");
    const int y = dag_add(dag, "Y");
    const int x = dag_add(dag, "X1");
    dag.cpds[x] = {0.5};
    dag.parents[w] = {x};
    dag.cpds[w] = {0.2, 0.8};
    dag.parents[y] = {x};
    dag.cpds[y] = {0.2, 0.8};
    dag.treatment = w;
    dag.outcome = y;
    dag.validate();
    return dag;
}

// Planted interaction: P(Y=1 | W, X1) = 0.2 + 0.4 W X1 with X1 also driving
// treatment uptake, so Z = {X1}. exact_cate is 0.4 within X1=1 and 0 within
// X1=0.
inline CausalDag planted_dag() {
    CausalDag dag;
    const int w = dag_add(dag, "W");
    const int y = dag_add(dag, "Y");
    const int x1 = dag_add(dag, "X1");
    dag.cpds[x1] = {0.5};
    dag.parents[w] = {x1};
    dag.cpds[w] = {0.4, 0.6};
    dag.parents[y] = {w, x1};  // combo bit0 = W, bit1 = X1
    dag.cpds[y] = {0.2, 0.2, 0.2, 0.6};
    dag.treatment = w;
    dag.outcome = y;
    dag.validate();
    return dag;
}

// The cross-validation fixture: four parents with a parity-signed effect.
// P(Y=1 | W, x) = 0.30 + 0.095 (x1+x2+x3+x4) + e(x) W,
// e(x) = +0.30 when x1+x2+x3+x4 is even, else -0.30.
// X5, X6 are irrelevant coins; W is a fair coin (so Z is empty and every
// parent is Y-parent-only).
inline CausalDag interaction4_dag() {
    CausalDag dag;
    const int w = dag_add(dag, "W");
    const int y = dag_add(dag, "Y");
    std::vector<int> x(7);
    for (int i = 1; i <= 6; ++i) x[i] = dag_add(dag, "X" + std::to_string(i));
    dag.cpds[w] = {0.5};
    for (int i = 1; i <= 6; ++i) dag.cpds[x[i]] = {0.5};
    dag.parents[y] = {w, x[1], x[2], x[3], x[4]};  // combo bit i = parents[i]
    dag.cpds[y].resize(32);
    for (std::size_t combo = 0; combo < 32; ++combo) {
        const int vw = static_cast<int>(combo & 1u);
        int total = 0;
        for (int b = 1; b <= 4; ++b) total += static_cast<int>((combo >> b) & 1u);
        const double effect = (total % 2 == 0) ? 0.30 : -0.30;
        dag.cpds[y][combo] = 0.30 + 0.095 * total + effect * vw;
    }
    dag.treatment = w;
    dag.outcome = y;
    dag.validate();
    return dag;
}

// Nine-column variant used by the scalability runs: seven covariates, three
// of them parents of both W and Y, effects all positive.
inline CausalDag scale9_dag() {
    CausalDag dag;
    const int w = dag_add(dag, "W");
    const int y = dag_add(dag, "Y");
    std::vector<int> x(8);
    for (int i = 1; i <= 7; ++i) x[i] = dag_add(dag, "X" + std::to_string(i));
    for (int i = 1; i <= 7; ++i) dag.cpds[x[i]] = {0.5};
    dag.parents[w] = {x[1], x[2], x[3]};
    dag.cpds[w].resize(8);
    for (std::size_t combo = 0; combo < 8; ++combo) {
        int total = 0;
        for (int b = 0; b < 3; ++b) total += static_cast<int>((combo >> b) & 1u);
        dag.cpds[w][combo] = 0.2 + 0.2 * total;
    }
    dag.parents[y] = {w, x[1], x[2], x[3]};
    dag.cpds[y].resize(16);
    for (std::size_t combo = 0; combo < 16; ++combo) {
        const int vw = static_cast<int>(combo & 1u);
        int total = 0;
        for (int b = 1; b <= 3; ++b) total += static_cast<int>((combo >> b) & 1u);
        dag.cpds[y][combo] = 0.15 + 0.12 * total + 0.25 * vw;
    }
    dag.treatment = w;
    dag.outcome = y;
    dag.validate();
    return dag;
}

}  // namespace deep::testing
