#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "deep/dataset.hpp"

namespace deep {

struct DagError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Binary causal DAG with explicit Bernoulli CPDs. cpd[v] has one entry per
// parent-value combination; the combination index uses bit i for the value of
// parents[v][i] (parents stored ascending).
struct CausalDag {
    std::vector<std::string> names;
    std::vector<std::vector<int>> parents;
    std::vector<std::vector<double>> cpds;
    int treatment = -1;
    int outcome = -1;

    int node_count() const { return static_cast<int>(names.size()); }
    int index_of(const std::string& name) const;

    // Throws DagError on cycles, incomplete CPDs, out-of-range probabilities,
    // or outgoing edges from the outcome.
    void validate() const;
    std::vector<int> topological_order() const;
    std::vector<std::vector<int>> children() const;
};

CausalDag load_dag(const std::string& path);
void save_dag(const CausalDag& dag, const std::string& path);
CausalDag parse_dag(std::istream& is, const std::string& source_name);

// Ancestral sampling in topological order; reproducible under seed.
BinaryDataset sample(const CausalDag& dag, std::size_t n, std::uint64_t seed);

// P(Y=1 | do(W=1), subgroup) - P(Y=1 | do(W=0), subgroup) by truncated
// factorisation, exact by enumeration. Node count is capped at 20. Throws
// DagError when the subgroup has probability zero under either intervention.
double exact_cate(const CausalDag& dag, const std::map<int, int>& subgroup);

// Exact P(node = 1) by enumeration.
double exact_marginal(const CausalDag& dag, int node);

// d-separation of a and b given cond (moralised-ancestral-graph check).
bool d_separated(const CausalDag& dag, int a, int b, const std::vector<int>& cond);

// Backdoor criterion for (W, Y): no descendant of W in zset, and zset
// d-separates W and Y in the graph with W's outgoing edges removed.
bool satisfies_backdoor(const CausalDag& dag, const std::vector<int>& zset);

// The graph-side counterpart of the learned split: parents of Y (minus W)
// that are not marginally d-separated from W.
struct GraphStructure {
    std::vector<int> parents_of_y;
    std::vector<int> adjustment_set_z;
    std::vector<int> y_parent_only_c;
};
GraphStructure graphical_structure(const CausalDag& dag);

// The 11-node example graph: W <- X1 <- X2 <- X3 -> Y, W <- X4 -> Y,
// W <- X6 -> X7 <- X8 -> Y, X9 -> Y, W -> Y, X5 isolated.
// PA(Y) = {X3,X4,X8,X9}; {X3,X4} is the reduced adjustment set.
CausalDag figure1_dag(double edge_strength = 0.8);

}  // namespace deep
