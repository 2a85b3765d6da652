#include "deep/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <queue>
#include <sstream>

#include "deep/rng.hpp"

namespace deep {

int CausalDag::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) return static_cast<int>(i);
    }
    return -1;
}

std::vector<int> CausalDag::topological_order() const {
    const int n = node_count();
    std::vector<int> indegree(n, 0);
    std::vector<std::vector<int>> kids(n);
    for (int v = 0; v < n; ++v) {
        for (int p : parents[v]) {
            kids[p].push_back(v);
            ++indegree[v];
        }
    }
    // Min-index first for a deterministic order.
    std::priority_queue<int, std::vector<int>, std::greater<int>> ready;
    for (int v = 0; v < n; ++v) {
        if (indegree[v] == 0) ready.push(v);
    }
    std::vector<int> order;
    order.reserve(n);
    while (!ready.empty()) {
        const int v = ready.top();
        ready.pop();
        order.push_back(v);
        for (int c : kids[v]) {
            if (--indegree[c] == 0) ready.push(c);
        }
    }
    if (static_cast<int>(order.size()) != n) throw DagError("graph contains a directed cycle");
    return order;
}

std::vector<std::vector<int>> CausalDag::children() const {
    std::vector<std::vector<int>> kids(node_count());
    for (int v = 0; v < node_count(); ++v) {
        for (int p : parents[v]) kids[p].push_back(v);
    }
    return kids;
}

void CausalDag::validate() const {
    const int n = node_count();
    if (n == 0) throw DagError("graph has no nodes");
    if (parents.size() != names.size() || cpds.size() != names.size())
        throw DagError("inconsistent node table");
    if (treatment < 0 || treatment >= n) throw DagError("treatment node missing");
    if (outcome < 0 || outcome >= n) throw DagError("outcome node missing");
    if (treatment == outcome) throw DagError("treatment and outcome must differ");

    for (int v = 0; v < n; ++v) {
        for (int p : parents[v]) {
            if (p < 0 || p >= n) throw DagError("parent index out of range");
            if (p == v) throw DagError("self-loop on " + names[v]);
            if (p == outcome)
                throw DagError("outcome '" + names[outcome] + "' cannot have outgoing edges");
        }
        const std::size_t expected = std::size_t{1} << parents[v].size();
        if (cpds[v].size() != expected)
            throw DagError("node '" + names[v] + "': cpd covers " +
                           std::to_string(cpds[v].size()) + " of " + std::to_string(expected) +
                           " parent combinations");
        for (double p : cpds[v]) {
            if (!(p >= 0.0 && p <= 1.0))
                throw DagError("node '" + names[v] + "': probability outside [0,1]");
        }
    }
    topological_order();  // throws on cycles
}

BinaryDataset sample(const CausalDag& dag, std::size_t n, std::uint64_t seed) {
    dag.validate();
    if (n == 0) throw DagError("sample size must be positive");
    const std::vector<int> order = dag.topological_order();
    const int k = dag.node_count();

    std::vector<BitColumn> columns(k);
    for (auto& c : columns) c = BitColumn(n);

    Rng rng(seed);
    std::vector<std::uint8_t> values(k);
    for (std::size_t r = 0; r < n; ++r) {
        for (int v : order) {
            std::size_t combo = 0;
            const auto& ps = dag.parents[v];
            for (std::size_t i = 0; i < ps.size(); ++i) {
                combo |= static_cast<std::size_t>(values[ps[i]]) << i;
            }
            values[v] = rng.next_bernoulli(dag.cpds[v][combo]) ? 1 : 0;
        }
        for (int v = 0; v < k; ++v) columns[v].set(r, values[v] != 0);
    }
    return BinaryDataset::from_columns(dag.names, std::move(columns), dag.names[dag.treatment],
                                       dag.names[dag.outcome]);
}

namespace {

double node_probability(const CausalDag& dag, int v, std::uint32_t assignment) {
    std::size_t combo = 0;
    const auto& ps = dag.parents[v];
    for (std::size_t i = 0; i < ps.size(); ++i) {
        combo |= static_cast<std::size_t>((assignment >> ps[i]) & 1u) << i;
    }
    const double p1 = dag.cpds[v][combo];
    return ((assignment >> v) & 1u) ? p1 : 1.0 - p1;
}

// Joint probability under the intervention do(W = w): W's cpd is dropped and
// assignments with W != w have probability zero.
double truncated_joint(const CausalDag& dag, std::uint32_t assignment, int w_value) {
    if (static_cast<int>((assignment >> dag.treatment) & 1u) != w_value) return 0.0;
    double p = 1.0;
    for (int v = 0; v < dag.node_count(); ++v) {
        if (v == dag.treatment) continue;
        p *= node_probability(dag, v, assignment);
        if (p == 0.0) return 0.0;
    }
    return p;
}

}  // namespace

double exact_cate(const CausalDag& dag, const std::map<int, int>& subgroup) {
    dag.validate();
    const int k = dag.node_count();
    if (k > 20) throw DagError("exact inference capped at 20 nodes");
    for (const auto& [v, val] : subgroup) {
        if (v < 0 || v >= k) throw DagError("subgroup variable out of range");
        if (v == dag.treatment || v == dag.outcome)
            throw DagError("subgroup may assign covariates only");
        if (val != 0 && val != 1) throw DagError("subgroup values must be 0 or 1");
    }

    double result[2];
    for (int w = 0; w <= 1; ++w) {
        double joint_y1 = 0.0, joint = 0.0;
        const std::uint32_t limit = std::uint32_t{1} << k;
        for (std::uint32_t a = 0; a < limit; ++a) {
            bool in_subgroup = true;
            for (const auto& [v, val] : subgroup) {
                if (static_cast<int>((a >> v) & 1u) != val) {
                    in_subgroup = false;
                    break;
                }
            }
            if (!in_subgroup) continue;
            const double p = truncated_joint(dag, a, w);
            joint += p;
            if ((a >> dag.outcome) & 1u) joint_y1 += p;
        }
        if (joint <= 0.0)
            throw DagError("subgroup has probability zero under do(W=" + std::to_string(w) + ")");
        result[w] = joint_y1 / joint;
    }
    return result[1] - result[0];
}

double exact_marginal(const CausalDag& dag, int node) {
    dag.validate();
    const int k = dag.node_count();
    if (k > 20) throw DagError("exact inference capped at 20 nodes");
    if (node < 0 || node >= k) throw DagError("node out of range");
    double total = 0.0;
    const std::uint32_t limit = std::uint32_t{1} << k;
    for (std::uint32_t a = 0; a < limit; ++a) {
        if (!((a >> node) & 1u)) continue;
        double p = 1.0;
        for (int v = 0; v < k && p > 0.0; ++v) p *= node_probability(dag, v, a);
        total += p;
    }
    return total;
}

bool d_separated(const CausalDag& dag, int a, int b, const std::vector<int>& cond) {
    const int n = dag.node_count();
    // Ancestral subgraph of {a, b} + cond.
    std::vector<bool> keep(n, false);
    std::vector<int> stack = {a, b};
    for (int c : cond) stack.push_back(c);
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        if (keep[v]) continue;
        keep[v] = true;
        for (int p : dag.parents[v]) stack.push_back(p);
    }
    // Moralise: connect co-parents, drop directions.
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    for (int v = 0; v < n; ++v) {
        if (!keep[v]) continue;
        const auto& ps = dag.parents[v];
        for (std::size_t i = 0; i < ps.size(); ++i) {
            if (!keep[ps[i]]) continue;
            adj[v][ps[i]] = adj[ps[i]][v] = true;
            for (std::size_t j = i + 1; j < ps.size(); ++j) {
                if (!keep[ps[j]]) continue;
                adj[ps[i]][ps[j]] = adj[ps[j]][ps[i]] = true;
            }
        }
    }
    // Remove conditioning nodes, then test connectivity a -> b.
    std::vector<bool> blocked(n, false);
    for (int c : cond) blocked[c] = true;
    if (blocked[a] || blocked[b]) throw DagError("conditioning set overlaps the tested pair");
    std::vector<bool> visited(n, false);
    stack = {a};
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        if (visited[v]) continue;
        visited[v] = true;
        if (v == b) return false;
        for (int u = 0; u < n; ++u) {
            if (adj[v][u] && keep[u] && !blocked[u] && !visited[u]) stack.push_back(u);
        }
    }
    return true;
}

bool satisfies_backdoor(const CausalDag& dag, const std::vector<int>& zset) {
    const int w = dag.treatment;
    const int y = dag.outcome;
    // Condition 1: no descendant of W.
    const auto kids = dag.children();
    std::vector<bool> descendant(dag.node_count(), false);
    std::vector<int> stack = {w};
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int c : kids[v]) {
            if (!descendant[c]) {
                descendant[c] = true;
                stack.push_back(c);
            }
        }
    }
    for (int z : zset) {
        if (descendant[z]) return false;
    }
    // Condition 2: Z d-separates W and Y in the graph without W's outgoing edges.
    CausalDag reduced = dag;
    for (int v = 0; v < reduced.node_count(); ++v) {
        auto& ps = reduced.parents[v];
        const auto it = std::find(ps.begin(), ps.end(), w);
        if (it != ps.end()) {
            const std::size_t pos = static_cast<std::size_t>(it - ps.begin());
            ps.erase(it);
            // Collapse the cpd over the removed parent (values are irrelevant
            // for reachability; keep the table shape consistent).
            std::vector<double> collapsed(std::size_t{1} << ps.size(), 0.5);
            reduced.cpds[v] = std::move(collapsed);
            (void)pos;
        }
    }
    return d_separated(reduced, w, y, zset);
}

GraphStructure graphical_structure(const CausalDag& dag) {
    GraphStructure out;
    const int w = dag.treatment;
    for (int p : dag.parents[dag.outcome]) {
        if (p == w) continue;
        out.parents_of_y.push_back(p);
    }
    std::sort(out.parents_of_y.begin(), out.parents_of_y.end());
    for (int p : out.parents_of_y) {
        if (d_separated(dag, p, w, {})) {
            out.y_parent_only_c.push_back(p);
        } else {
            out.adjustment_set_z.push_back(p);
        }
    }
    return out;
}

namespace {

int add_node(CausalDag& dag, const std::string& name) {
    dag.names.push_back(name);
    dag.parents.emplace_back();
    dag.cpds.emplace_back();
    return dag.node_count() - 1;
}

void set_root(CausalDag& dag, int v, double p) { dag.cpds[v] = {p}; }

}  // namespace

CausalDag figure1_dag(double edge_strength) {
    if (!(edge_strength > 0.5 && edge_strength < 1.0))
        throw DagError("edge strength must be in (0.5, 1)");
    const double s = edge_strength;

    CausalDag dag;
    const int w = add_node(dag, "W");
    const int y = add_node(dag, "Y");
    std::vector<int> x(10);
    for (int i = 1; i <= 9; ++i) x[i] = add_node(dag, "X" + std::to_string(i));
    dag.treatment = w;
    dag.outcome = y;

    // Roots.
    for (int i : {3, 4, 5, 6, 8, 9}) set_root(dag, x[i], 0.5);

    // Chain X3 -> X2 -> X1 -> W.
    dag.parents[x[2]] = {x[3]};
    dag.cpds[x[2]] = {1.0 - s, s};
    dag.parents[x[1]] = {x[2]};
    dag.cpds[x[1]] = {1.0 - s, s};

    // W <- {X1, X4, X6}: p = 0.1 + 0.3 X1 + 0.3 X4 + 0.2 X6.
    dag.parents[w] = {x[1], x[4], x[6]};
    dag.cpds[w].resize(8);
    for (std::size_t combo = 0; combo < 8; ++combo) {
        const double x1 = static_cast<double>(combo & 1u);
        const double x4 = static_cast<double>((combo >> 1) & 1u);
        const double x6 = static_cast<double>((combo >> 2) & 1u);
        dag.cpds[w][combo] = 0.1 + 0.3 * x1 + 0.3 * x4 + 0.2 * x6;
    }

    // Collider X6 -> X7 <- X8.
    dag.parents[x[7]] = {x[6], x[8]};
    dag.cpds[x[7]] = {1.0 - s, 0.5, 0.5, s};

    // Y <- {W, X3, X4, X8, X9}: p = 0.04 + 0.18 (X3+X4+X8) + 0.14 X9 + 0.20 W.
    dag.parents[y] = {w, x[3], x[4], x[8], x[9]};
    dag.cpds[y].resize(32);
    for (std::size_t combo = 0; combo < 32; ++combo) {
        const double vw = static_cast<double>(combo & 1u);
        const double v3 = static_cast<double>((combo >> 1) & 1u);
        const double v4 = static_cast<double>((combo >> 2) & 1u);
        const double v8 = static_cast<double>((combo >> 3) & 1u);
        const double v9 = static_cast<double>((combo >> 4) & 1u);
        dag.cpds[y][combo] = 0.04 + 0.18 * (v3 + v4 + v8) + 0.14 * v9 + 0.20 * vw;
    }

    dag.validate();
    return dag;
}

namespace {

struct Line {
    std::size_t number;
    std::vector<std::string> tokens;
};

[[noreturn]] void fail(const std::string& source, std::size_t line, const std::string& msg) {
    throw DagError(source + ":" + std::to_string(line) + ": " + msg);
}

}  // namespace

CausalDag parse_dag(std::istream& is, const std::string& source_name) {
    CausalDag dag;
    std::string treatment_name = "W";
    std::string outcome_name = "Y";

    std::vector<Line> edges, cpds;
    std::string raw;
    std::size_t number = 0;
    while (std::getline(is, raw)) {
        ++number;
        const std::size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        std::istringstream ls(raw);
        std::vector<std::string> tokens;
        std::string tok;
        while (ls >> tok) tokens.push_back(tok);
        if (tokens.empty()) continue;

        const std::string& kind = tokens[0];
        if (kind == "node") {
            if (tokens.size() != 2) fail(source_name, number, "expected: node <name>");
            if (dag.index_of(tokens[1]) >= 0)
                fail(source_name, number, "duplicate node '" + tokens[1] + "'");
            add_node(dag, tokens[1]);
        } else if (kind == "edge") {
            if (tokens.size() != 3) fail(source_name, number, "expected: edge <parent> <child>");
            edges.push_back({number, tokens});
        } else if (kind == "cpd") {
            if (tokens.size() != 4)
                fail(source_name, number, "expected: cpd <node> <parent-bits|-> <p>");
            cpds.push_back({number, tokens});
        } else if (kind == "treatment") {
            if (tokens.size() != 2) fail(source_name, number, "expected: treatment <name>");
            treatment_name = tokens[1];
        } else if (kind == "outcome") {
            if (tokens.size() != 2) fail(source_name, number, "expected: outcome <name>");
            outcome_name = tokens[1];
        } else {
            fail(source_name, number, "unknown directive '" + kind + "'");
        }
    }

    for (const Line& e : edges) {
        const int parent = dag.index_of(e.tokens[1]);
        const int child = dag.index_of(e.tokens[2]);
        if (parent < 0) fail(source_name, e.number, "unknown node '" + e.tokens[1] + "'");
        if (child < 0) fail(source_name, e.number, "unknown node '" + e.tokens[2] + "'");
        auto& ps = dag.parents[child];
        if (std::find(ps.begin(), ps.end(), parent) != ps.end())
            fail(source_name, e.number, "duplicate edge");
        ps.push_back(parent);
    }
    for (auto& ps : dag.parents) std::sort(ps.begin(), ps.end());
    for (auto& cpd : dag.cpds) cpd.clear();
    for (std::size_t v = 0; v < dag.cpds.size(); ++v) {
        dag.cpds[v].assign(std::size_t{1} << dag.parents[v].size(),
                           std::numeric_limits<double>::quiet_NaN());
    }

    for (const Line& c : cpds) {
        const int v = dag.index_of(c.tokens[1]);
        if (v < 0) fail(source_name, c.number, "unknown node '" + c.tokens[1] + "'");
        const std::string& bits = c.tokens[2];
        std::size_t combo = 0;
        if (bits != "-") {
            if (bits.size() != dag.parents[v].size())
                fail(source_name, c.number,
                     "node '" + c.tokens[1] + "' has " + std::to_string(dag.parents[v].size()) +
                         " parents but key '" + bits + "' has " + std::to_string(bits.size()) +
                         " bits");
            for (std::size_t i = 0; i < bits.size(); ++i) {
                if (bits[i] == '1')
                    combo |= std::size_t{1} << i;
                else if (bits[i] != '0')
                    fail(source_name, c.number, "cpd key must be bits or '-'");
            }
        } else if (!dag.parents[v].empty()) {
            fail(source_name, c.number, "node '" + c.tokens[1] + "' has parents; key required");
        }
        double p = 0.0;
        try {
            p = std::stod(c.tokens[3]);
        } catch (const std::exception&) {
            fail(source_name, c.number, "bad probability '" + c.tokens[3] + "'");
        }
        if (!(p >= 0.0 && p <= 1.0)) fail(source_name, c.number, "probability outside [0,1]");
        dag.cpds[v][combo] = p;
    }
    for (std::size_t v = 0; v < dag.cpds.size(); ++v) {
        for (std::size_t combo = 0; combo < dag.cpds[v].size(); ++combo) {
            if (std::isnan(dag.cpds[v][combo]))
                throw DagError(source_name + ": node '" + dag.names[v] +
                               "' is missing a cpd entry for combination " +
                               std::to_string(combo));
        }
    }

    dag.treatment = dag.index_of(treatment_name);
    if (dag.treatment < 0)
        throw DagError(source_name + ": treatment node '" + treatment_name + "' not declared");
    dag.outcome = dag.index_of(outcome_name);
    if (dag.outcome < 0)
        throw DagError(source_name + ": outcome node '" + outcome_name + "' not declared");
    dag.validate();
    return dag;
}

CausalDag load_dag(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DagError("cannot open '" + path + "'");
    return parse_dag(in, path);
}

void save_dag(const CausalDag& dag, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DagError("cannot write '" + path + "'");
    for (const auto& name : dag.names) out << "node " << name << '\n';
    out << "treatment " << dag.names[dag.treatment] << '\n';
    out << "outcome " << dag.names[dag.outcome] << '\n';
    for (int v = 0; v < dag.node_count(); ++v) {
        for (int p : dag.parents[v]) out << "edge " << dag.names[p] << ' ' << dag.names[v] << '\n';
    }
    out << std::setprecision(12);
    for (int v = 0; v < dag.node_count(); ++v) {
        const std::size_t combos = dag.cpds[v].size();
        for (std::size_t combo = 0; combo < combos; ++combo) {
            out << "cpd " << dag.names[v] << ' ';
            if (dag.parents[v].empty()) {
                out << '-';
            } else {
                for (std::size_t i = 0; i < dag.parents[v].size(); ++i)
                    out << (((combo >> i) & 1u) ? '1' : '0');
            }
            out << ' ' << dag.cpds[v][combo] << '\n';
        }
    }
    if (!out) throw DagError("failed while writing '" + path + "'");
}

}  // namespace deep
