#pragma once

#include <optional>
#include <vector>

#include "deep/dataset.hpp"

namespace deep {

enum class Sign : char { positive = '+', negative = '-', uncertain = '?' };

char to_char(Sign s);
Sign sign_from_char(char c);

// Inverse standard normal CDF (Acklam's rational approximation plus one
// Halley refinement; absolute error well below 1e-9).
double normal_quantile(double p);

// Upper tail of the chi-squared distribution with df degrees of freedom.
double chi_squared_survival(double x, int df);

// Critical value for confidence level gamma. The three levels used throughout
// the evaluation are pinned to their conventional two-decimal table values.
double z_critical_for(double gamma);

struct SignTestConfig {
    double gamma = 0.95;
    double z_critical = 1.96;

    static SignTestConfig for_confidence(double gamma);
    // Critical value after dividing the significance level (1 - gamma) by the
    // number of sign tests performed in a run.
    static SignTestConfig bonferroni(double gamma, int tests);
};

// Continuity-corrected critical ratio of |p1 - p0|. Empty when an arm is
// empty or the pooled rate is degenerate.
std::optional<double> critical_ratio(const CrossTable& t);

Sign sign_of_cate(const CrossTable& t, const SignTestConfig& cfg);

struct CITestConfig {
    double alpha = 0.01;
    int max_condition_size = 3;
    // Strata whose expected cell counts fall below this bound contribute
    // neither G^2 nor degrees of freedom. 0 disables the guard.
    double min_cell_expectation = 0.0;
};

struct CITestResult {
    bool independent = false;
    double p_value = 0.0;
    double g2 = 0.0;
    int df = 0;
    bool low_power = false;  // no stratum had all four margins positive
};

// G^2 (likelihood-ratio) test of a independent of b given the variables in
// cond, stratifying on every observed value-vector of cond. A stratum
// contributes one degree of freedom iff all four of its margins are positive.
CITestResult ci_test(const BinaryDataset& d, int a, int b, const std::vector<int>& cond,
                     const CITestConfig& cfg);

// Absolute phi coefficient of the 2x2 table of (x, y); 0 when a margin is 0.
double correlation_with(const BinaryDataset& d, int x, int y);

}  // namespace deep
