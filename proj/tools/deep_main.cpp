#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "deep/decision.hpp"
#include "deep/eval.hpp"
#include "deep/pipeline.hpp"
#include "deep/simgen.hpp"

namespace fs = std::filesystem;
using namespace deep;

namespace {

constexpr int kExitDataError = 2;
constexpr int kExitDagError = 3;

struct CommonOptions {
    std::string input;
    std::string treatment = "W";
    std::string outcome = "Y";
    std::string out_dir = ".";
    DiscoveryConfig discovery;
    std::uint64_t seed = 0;
    int jobs = 1;
    int max_merges = 0;  // 0 = unlimited
};

void add_common(CLI::App* cmd, CommonOptions& opt, bool needs_input) {
    auto* in = cmd->add_option("--input", opt.input, "input CSV file");
    if (needs_input) in->required();
    cmd->add_option("--treatment", opt.treatment, "treatment column name");
    cmd->add_option("--outcome", opt.outcome, "outcome column name");
    cmd->add_option("--alpha", opt.discovery.alpha, "p-value threshold for CI tests");
    cmd->add_option("--gamma", opt.discovery.gamma, "confidence level for sign tests");
    cmd->add_option("--theta", opt.discovery.theta, "correlation stop threshold");
    cmd->add_option("--max-merges", opt.max_merges, "stop after this many merges (0 = unlimited)");
    cmd->add_option("--max-cond-size", opt.discovery.max_condition_size,
                    "conditioning set size cap for structure learning");
    cmd->add_flag("--bonferroni", opt.discovery.bonferroni,
                  "divide the sign-test significance level by the number of sign tests");
    cmd->add_option("--seed", opt.seed, "random seed");
    cmd->add_option("--jobs", opt.jobs, "worker threads for cross-validation repetitions");
    cmd->add_option("--out-dir", opt.out_dir, "output directory");
}

DiscoveryConfig finish_config(CommonOptions& opt) {
    if (opt.max_merges > 0) opt.discovery.max_merges = opt.max_merges;
    return opt.discovery;
}

void write_structure_report(const std::string& path, const BinaryDataset& d,
                            const DiscoveryResult& r) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    auto name_list = [&](const std::vector<int>& vars) {
        std::string s;
        for (int v : vars) {
            if (!s.empty()) s += ' ';
            s += d.name(v);
        }
        return s.empty() ? "(empty)" : s;
    };
    out << "parents_of_y: " << name_list(r.structure.parents_of_y) << "\n";
    out << "adjustment_set_z: " << name_list(r.structure.adjustment_set_z) << "\n";
    out << "y_parent_only_c: " << name_list(r.structure.y_parent_only_c) << "\n";
    out << "corr_with_y:\n";
    out << std::setprecision(6);
    for (const auto& [v, corr] : r.structure.corr_with_y) {
        out << "  " << d.name(v) << ": " << corr << "\n";
    }
}

void write_run_log(const std::string& path, const DiscoveryResult& r) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << std::setprecision(6);
    out << "phase_structure_seconds: " << r.timings.structure_seconds << "\n";
    out << "phase_initialise_seconds: " << r.timings.initialise_seconds << "\n";
    out << "phase_generalise_seconds: " << r.timings.generalise_seconds << "\n";
    out << "total_seconds: " << r.timings.total_seconds << "\n";
    out << "initial_patterns: " << r.initial.patterns.size() << "\n";
    out << "final_patterns: " << r.patterns.patterns.size() << "\n";
    out << "z_critical: " << r.sign_test.z_critical << "\n";
}

int cmd_discover(CommonOptions& opt) {
    const DiscoveryConfig cfg = finish_config(opt);
    const BinaryDataset d = BinaryDataset::load_csv(opt.input, opt.treatment, opt.outcome);
    const DiscoveryResult result = discover(d, cfg);

    fs::create_directories(opt.out_dir);
    write_pattern_csv((fs::path(opt.out_dir) / "patterns.csv").string(), result.patterns,
                      d.variable_names());
    write_structure_report((fs::path(opt.out_dir) / "structure_report.txt").string(), d, result);
    write_run_log((fs::path(opt.out_dir) / "run_log.txt").string(), result);

    if (result.patterns.whole_population) {
        std::cerr << "warning: no parents of " << opt.outcome
                  << " found; emitted the whole-population pattern\n";
    }
    std::size_t signed_count = 0;
    for (const auto& p : result.patterns.patterns) signed_count += p.sign != Sign::uncertain;
    if (signed_count == 0) {
        std::cerr << "warning: no significant treatment effect patterns found\n";
    }
    std::cout << "patterns: " << result.patterns.patterns.size() << " (" << signed_count
              << " signed) -> " << (fs::path(opt.out_dir) / "patterns.csv").string() << "\n";
    return 0;
}

int cmd_validate(CommonOptions& opt, int runs, const std::vector<double>& sweep_alphas,
                 const std::vector<double>& sweep_gammas) {
    const DiscoveryConfig cfg = finish_config(opt);
    const BinaryDataset d = BinaryDataset::load_csv(opt.input, opt.treatment, opt.outcome);

    CvConfig cv;
    cv.runs = runs;
    cv.seed = opt.seed;
    cv.jobs = opt.jobs;
    cv.discovery = cfg;
    const CvReport report = cross_validate(d, cv);

    const DiscoveryResult full = discover(d, cfg);
    const HomogeneityReport homo = homogeneity(full.patterns, d, full.sign_test);
    const double cover = coverage(full.patterns, d);

    fs::create_directories(opt.out_dir);
    {
        std::ofstream out(fs::path(opt.out_dir) / "cv_report.txt");
        write_cv_report(out, report);
    }
    {
        std::ofstream out(fs::path(opt.out_dir) / "homogeneity.csv");
        out << "pattern,label\n";
        for (std::size_t i = 0; i < homo.labels.size(); ++i) {
            const Pattern& p = full.patterns.patterns[i];
            for (DescriptorValue v : p.values) out << to_char(v);
            out << ',' << to_string(homo.labels[i]) << '\n';
        }
    }
    {
        std::ofstream out(fs::path(opt.out_dir) / "summary.txt");
        out << std::setprecision(6);
        out << "seed: " << opt.seed << "\n";
        if (report.accuracy_mean) {
            out << "cv_accuracy_mean: " << *report.accuracy_mean << "\n";
            out << "cv_accuracy_sd: " << *report.accuracy_sd << "\n";
        } else {
            out << "cv_accuracy_mean: -\n";
            out << "cv_accuracy_sd: -\n";
        }
        out << "coverage: " << cover << "\n";
        try {
            out << "stratified_ate: " << stratified_ate(d, full.structure.parents_of_y) << "\n";
        } catch (const DataError&) {
            out << "stratified_ate: -\n";
        }
        out << "homogeneity_consistent: " << homo.fraction_consistent << "\n";
        out << "homogeneity_inconsistent: " << homo.fraction_inconsistent << "\n";
        out << "homogeneity_uncertain: " << homo.fraction_uncertain << "\n";
    }
    if (!sweep_alphas.empty() && !sweep_gammas.empty()) {
        const auto cells = parameter_sweep(d, sweep_alphas, sweep_gammas, cv);
        std::ofstream out(fs::path(opt.out_dir) / "sweep.csv");
        write_sweep_csv(out, cells);
    }
    if (report.accuracy_mean) {
        std::cout << "cv accuracy " << std::setprecision(6) << *report.accuracy_mean << " (sd "
                  << *report.accuracy_sd << "), coverage " << cover << "\n";
    } else {
        std::cout << "cv accuracy - (no signed patterns validated), coverage " << cover << "\n";
    }
    return 0;
}

int cmd_match(const std::string& patterns_path, const std::string& individuals_path,
              const std::string& out_dir) {
    const NamedPatternSet patterns = read_pattern_csv(patterns_path);
    fs::create_directories(out_dir);
    const std::string out = (fs::path(out_dir) / "recommendations.csv").string();
    batch_match(individuals_path, patterns, out);
    std::cout << "recommendations -> " << out << "\n";
    return 0;
}

int cmd_simulate(const std::string& dag_path, std::size_t n, std::uint64_t seed,
                 const std::string& out_dir) {
    const CausalDag dag = load_dag(dag_path);
    const BinaryDataset d = sample(dag, n, seed);
    fs::create_directories(out_dir);
    d.save_csv((fs::path(out_dir) / "data.csv").string());

    const GraphStructure gs = graphical_structure(dag);
    std::ofstream out(fs::path(out_dir) / "oracle_cate.csv");
    if (!out) throw DataError("cannot write oracle_cate.csv");
    for (int z : gs.adjustment_set_z) out << dag.names[z] << ',';
    out << "exact_cate\n";
    const std::size_t combos = std::size_t{1} << gs.adjustment_set_z.size();
    out << std::setprecision(10);
    for (std::size_t c = 0; c < combos; ++c) {
        std::map<int, int> subgroup;
        for (std::size_t i = 0; i < gs.adjustment_set_z.size(); ++i) {
            subgroup[gs.adjustment_set_z[i]] = static_cast<int>((c >> i) & 1u);
        }
        for (std::size_t i = 0; i < gs.adjustment_set_z.size(); ++i) {
            out << subgroup[gs.adjustment_set_z[i]] << ',';
        }
        out << exact_cate(dag, subgroup) << '\n';
    }
    std::cout << "data -> " << (fs::path(out_dir) / "data.csv").string() << " (" << n
              << " rows), oracle -> " << (fs::path(out_dir) / "oracle_cate.csv").string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"deep: treatment effect pattern discovery"};
    app.require_subcommand(1);
    app.set_config("--config");

    CommonOptions opt;
    int runs = 20;

    auto* discover_cmd = app.add_subcommand("discover", "discover treatment effect patterns");
    add_common(discover_cmd, opt, true);

    auto* validate_cmd =
        app.add_subcommand("validate", "cross-validate, homogeneity and coverage reports");
    add_common(validate_cmd, opt, true);
    validate_cmd->add_option("--runs", runs, "cross-validation repetitions");
    std::vector<double> sweep_alphas, sweep_gammas;
    validate_cmd->add_option("--sweep-alphas", sweep_alphas,
                             "alpha grid; with --sweep-gammas also writes sweep.csv");
    validate_cmd->add_option("--sweep-gammas", sweep_gammas, "gamma grid for the sweep");

    auto* match_cmd = app.add_subcommand("match", "score individuals against a pattern file");
    std::string patterns_path, individuals_path;
    match_cmd->add_option("--patterns", patterns_path, "pattern CSV from discover")->required();
    match_cmd->add_option("--individuals", individuals_path, "individuals CSV")->required();
    match_cmd->add_option("--out-dir", opt.out_dir, "output directory");

    auto* simulate_cmd = app.add_subcommand("simulate", "sample a dataset from a causal DAG");
    std::string dag_path;
    std::size_t sim_n = 10000;
    simulate_cmd->add_option("--dag", dag_path, "DAG specification file")->required();
    simulate_cmd->add_option("--n", sim_n, "number of records");
    simulate_cmd->add_option("--seed", opt.seed, "random seed");
    simulate_cmd->add_option("--out-dir", opt.out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (discover_cmd->parsed()) return cmd_discover(opt);
        if (validate_cmd->parsed()) return cmd_validate(opt, runs, sweep_alphas, sweep_gammas);
        if (match_cmd->parsed()) return cmd_match(patterns_path, individuals_path, opt.out_dir);
        if (simulate_cmd->parsed()) return cmd_simulate(dag_path, sim_n, opt.seed, opt.out_dir);
    } catch (const DagError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDagError;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDataError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
