#include "deep/pipeline.hpp"

#include <chrono>

namespace deep {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

DiscoveryResult discover(const BinaryDataset& d, const DiscoveryConfig& cfg) {
    DiscoveryResult result;
    const auto t0 = std::chrono::steady_clock::now();

    result.structure = learn_structure(d, cfg.ci_config());
    result.timings.structure_seconds = seconds_since(t0);

    const auto t1 = std::chrono::steady_clock::now();
    result.sign_test = SignTestConfig::for_confidence(cfg.gamma);
    result.initial = initialise_patterns(d, result.structure, result.sign_test);
    if (cfg.bonferroni && !result.initial.patterns.empty()) {
        result.sign_test = SignTestConfig::bonferroni(
            cfg.gamma, static_cast<int>(result.initial.patterns.size()));
        for (Pattern& p : result.initial.patterns) {
            p.sign = sign_of_cate(p.table, result.sign_test);
        }
    }
    result.timings.initialise_seconds = seconds_since(t1);

    const auto t2 = std::chrono::steady_clock::now();
    GeneraliseConfig gen;
    gen.theta = cfg.theta;
    gen.max_merges_k = cfg.max_merges;
    gen.sign_test = result.sign_test;
    result.patterns = run_generalisation(result.initial, result.structure, gen);
    result.timings.generalise_seconds = seconds_since(t2);
    result.timings.total_seconds = seconds_since(t0);
    return result;
}

}  // namespace deep
