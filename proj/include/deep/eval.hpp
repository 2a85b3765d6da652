#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "deep/dataset.hpp"
#include "deep/patterns.hpp"
#include "deep/pipeline.hpp"

namespace deep {

enum class HomogeneityLabel { consistent, inconsistent, uncertain };
std::string to_string(HomogeneityLabel l);

struct HomogeneityReport {
    std::vector<HomogeneityLabel> labels;  // one per pattern
    double fraction_consistent = 0.0;
    double fraction_inconsistent = 0.0;
    double fraction_uncertain = 0.0;
};

// Expand every wildcard of each pattern to literals, sign-test each expansion
// against d, and classify: inconsistent if any expansion has the opposite
// sign, else uncertain if any expansion is '?', else consistent. Expansions
// unobserved in d count as '?'.
HomogeneityReport homogeneity(const PatternSet& set, const BinaryDataset& d,
                              const SignTestConfig& cfg);

// Fraction of records matched by a final pattern with sign != '?'.
double coverage(const PatternSet& set, const BinaryDataset& d);

// Population effect as the stratified aggregate sum_z CATE(z) P(z) over the
// strata of `vars` (normally PA(Y)). Strata with an empty arm are excluded
// from both the sum and the normalising mass.
double stratified_ate(const BinaryDataset& d, const std::vector<int>& vars);

struct CvConfig {
    int runs = 20;
    int folds = 2;  // fixed at 2 in this implementation
    std::uint64_t seed = 0;
    int jobs = 1;
    DiscoveryConfig discovery;
};

struct CvReport {
    int runs = 0;
    int folds = 0;
    std::uint64_t seed = 0;
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t skipped = 0;  // signed patterns with an empty test arm
    std::vector<std::optional<double>> per_run_accuracy;
    // Absent when no repetition scored any signed pattern.
    std::optional<double> accuracy_mean;
    std::optional<double> accuracy_sd;
};

// True when the ground-truth difference confirms the claimed sign. A zero
// difference confirms nothing: a signed claim against it scores fp.
bool ground_truth_agrees(Sign sign, double difference);

// 20 independent repetitions of 2-fold cross validation. Folds are stratified
// on (W, Y). Per direction, patterns discovered on the training fold are
// scored on the test fold: the approximal ground truth of a signed pattern is
// the outcome-mean difference between treated and control test samples
// matching the pattern; agreement per ground_truth_agrees is a tp, anything
// else an fp.
CvReport cross_validate(const BinaryDataset& d, const CvConfig& cfg);

struct SweepCell {
    double alpha = 0.0;
    double gamma = 0.0;
    CvReport report;
};

std::vector<SweepCell> parameter_sweep(const BinaryDataset& d, const std::vector<double>& alphas,
                                       const std::vector<double>& gammas, const CvConfig& base);

void write_cv_report(std::ostream& os, const CvReport& report);
void write_sweep_csv(std::ostream& os, const std::vector<SweepCell>& cells);

}  // namespace deep
