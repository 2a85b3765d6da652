#include <doctest.h>

#include <sstream>

#include "deep/eval.hpp"
#include "deep/simgen.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace deep;
using V = DescriptorValue;

namespace {

PatternSet worked_example_final_set() {
    PatternSet set;
    set.descriptor_vars = {2, 3, 4, 5};
    set.z_positions = {true, true, false, false};
    set.patterns = testing::worked_example_final_patterns();
    return set;
}

}  // namespace

TEST_CASE("homogeneity of the worked example: star merges consistent, cross uncertain") {
    const auto d = testing::worked_example_dataset();
    const auto set = worked_example_final_set();
    const auto report = homogeneity(set, d, SignTestConfig::for_confidence(0.95));
    REQUIRE(report.labels.size() == 5);
    // Canonical order: c, e, b, a, d.
    CHECK(report.labels[0] == HomogeneityLabel::consistent);   // c: no wildcard
    CHECK(report.labels[1] == HomogeneityLabel::uncertain);    // e: '?' expansions
    CHECK(report.labels[2] == HomogeneityLabel::consistent);   // b: no wildcard
    CHECK(report.labels[3] == HomogeneityLabel::consistent);   // a: both expansions '+'
    CHECK(report.labels[4] == HomogeneityLabel::consistent);   // d: both expansions '-'
    CHECK(report.fraction_inconsistent == 0.0);
    CHECK(report.fraction_consistent == doctest::Approx(0.8));
    CHECK(report.fraction_uncertain == doctest::Approx(0.2));
}

TEST_CASE("a wildcard-free pattern is trivially consistent, whatever its sign") {
    const auto d = testing::worked_example_dataset();
    PatternSet set;
    set.descriptor_vars = {2, 3, 4, 5};
    set.z_positions = {true, true, false, false};
    Pattern p;
    p.values = {V::one, V::zero, V::zero, V::one};
    p.sign = Sign::positive;
    Pattern q;  // the '?'-signed group (0,0,0,1)
    q.values = {V::zero, V::zero, V::zero, V::one};
    q.sign = Sign::uncertain;
    set.patterns = {p, q};
    set.sort_canonical();
    const auto report = homogeneity(set, d, SignTestConfig::for_confidence(0.95));
    CHECK(report.labels[0] == HomogeneityLabel::consistent);
    CHECK(report.labels[1] == HomogeneityLabel::consistent);
}

TEST_CASE("an opposite-signed expansion is inconsistent") {
    const auto d = testing::worked_example_dataset();
    PatternSet set;
    set.descriptor_vars = {2, 3, 4, 5};
    set.z_positions = {true, true, false, false};
    // Hand-built illegal pattern spanning a '+' group (1,1,0,0) and a '-'
    // group via a star on X2: (1,*,
    // 0,0) covers (1,1,0,0)='+' and (1,0,0,0)=unobserved '?'.
    Pattern p;
    p.values = {V::one, V::star, V::zero, V::zero};
    p.sign = Sign::negative;
    set.patterns = {p};
    const auto report = homogeneity(set, d, SignTestConfig::for_confidence(0.95));
    CHECK(report.labels[0] == HomogeneityLabel::inconsistent);
}

TEST_CASE("coverage counts only signed-pattern matches") {
    const auto d = testing::worked_example_dataset();

    PatternSet all_uncertain;
    all_uncertain.descriptor_vars = {2, 3, 4, 5};
    all_uncertain.z_positions = {true, true, false, false};
    Pattern q;
    q.values = {V::star, V::star, V::star, V::star};
    q.sign = Sign::uncertain;
    all_uncertain.patterns = {q};
    CHECK(coverage(all_uncertain, d) == 0.0);

    PatternSet catch_all = all_uncertain;
    catch_all.patterns[0].sign = Sign::positive;
    CHECK(coverage(catch_all, d) == 1.0);

    // The worked-example final set covers every record (all 8 groups merge
    // into signed patterns).
    CHECK(coverage(worked_example_final_set(), d) == doctest::Approx(1.0));
}

TEST_CASE("coverage of a partial pattern set is the covered-group share") {
    const auto d = testing::worked_example_dataset();
    PatternSet set;
    set.descriptor_vars = {2, 3, 4, 5};
    set.z_positions = {true, true, false, false};
    Pattern b;
    b.values = {V::one, V::zero, V::zero, V::one};
    b.sign = Sign::positive;
    set.patterns = {b};
    // Group (1,0,0,1) holds 100 of 800 records.
    CHECK(coverage(set, d) == doctest::Approx(100.0 / 800.0));
}

TEST_CASE("cross validation on the planted effect is perfect and reproducible") {
    const auto dag = testing::planted_dag();
    const auto d = sample(dag, 20000, 314);
    CvConfig cfg;
    cfg.runs = 5;  // trimmed for unit-test speed; acceptance runs the full 20
    cfg.seed = 11;
    const auto report = cross_validate(d, cfg);
    REQUIRE(report.accuracy_mean.has_value());
    CHECK(*report.accuracy_mean == doctest::Approx(1.0));
    CHECK(*report.accuracy_sd == doctest::Approx(0.0));
    CHECK(report.fp == 0);

    const auto again = cross_validate(d, cfg);
    CHECK(again.tp == report.tp);
    CHECK(again.per_run_accuracy == report.per_run_accuracy);
}

TEST_CASE("parallel repetitions produce the single-thread result") {
    const auto dag = testing::planted_dag();
    const auto d = sample(dag, 6000, 15);
    CvConfig cfg;
    cfg.runs = 6;
    cfg.seed = 3;
    const auto serial = cross_validate(d, cfg);
    cfg.jobs = 4;
    const auto parallel = cross_validate(d, cfg);
    CHECK(serial.tp == parallel.tp);
    CHECK(serial.fp == parallel.fp);
    CHECK(serial.per_run_accuracy == parallel.per_run_accuracy);
}

TEST_CASE("pure-noise outcome reports absent accuracy") {
    const auto d = testing::coin_dataset(2000, 3, 404);
    CvConfig cfg;
    cfg.runs = 4;
    cfg.seed = 1;
    const auto report = cross_validate(d, cfg);
    CHECK_FALSE(report.accuracy_mean.has_value());
    CHECK(report.tp + report.fp == 0);

    std::ostringstream os;
    write_cv_report(os, report);
    CHECK(os.str().find("accuracy_mean: -") != std::string::npos);
}

TEST_CASE("single-cell sweep equals a direct cross_validate call") {
    const auto dag = testing::planted_dag();
    const auto d = sample(dag, 4000, 8);
    CvConfig cfg;
    cfg.runs = 3;
    cfg.seed = 21;
    cfg.discovery.alpha = 0.01;
    cfg.discovery.gamma = 0.95;
    const auto cells = parameter_sweep(d, {0.01}, {0.95}, cfg);
    REQUIRE(cells.size() == 1);
    const auto direct = cross_validate(d, cfg);
    CHECK(cells[0].report.tp == direct.tp);
    CHECK(cells[0].report.fp == direct.fp);
    CHECK(cells[0].alpha == 0.01);
    CHECK(cells[0].gamma == 0.95);

    CHECK_THROWS_AS(parameter_sweep(d, {}, {0.95}, cfg), DataError);
}

TEST_CASE("sweep csv renders absent cells as dashes") {
    SweepCell cell;
    cell.alpha = 0.01;
    cell.gamma = 0.99;
    cell.report.runs = 20;
    cell.report.seed = 5;
    std::vector<SweepCell> cells = {cell};
    std::ostringstream os;
    write_sweep_csv(os, cells);
    CHECK(os.str().find("0.01,0.99,-,-,0,0,0,5") != std::string::npos);
}

TEST_CASE("a zero ground-truth difference contradicts any signed claim") {
    CHECK_FALSE(ground_truth_agrees(Sign::positive, 0.0));
    CHECK_FALSE(ground_truth_agrees(Sign::negative, 0.0));
    CHECK(ground_truth_agrees(Sign::positive, 0.25));
    CHECK(ground_truth_agrees(Sign::negative, -0.25));
    CHECK_FALSE(ground_truth_agrees(Sign::positive, -0.25));
    CHECK_FALSE(ground_truth_agrees(Sign::negative, 0.25));
    CHECK_FALSE(ground_truth_agrees(Sign::uncertain, 0.25));  // never scored
}

TEST_CASE("stratified ATE removes confounding bias") {
    const auto dag = testing::canary_dag();
    const auto d = sample(dag, 50000, 63);
    const auto pop = d.group_cross_tables({});
    CHECK(std::abs(pop.at({}).p1() - pop.at({}).p0()) > 0.2);  // raw is biased
    CHECK(std::abs(stratified_ate(d, {2})) < 0.03);            // adjusted is near zero
}

TEST_CASE("stratified ATE aggregates subgroup effects by their mass") {
    const auto dag = testing::planted_dag();
    const auto d = sample(dag, 100000, 64);
    // Half the population carries effect 0.4, the other half 0.
    CHECK(stratified_ate(d, {2}) == doctest::Approx(0.2).epsilon(0.08));
}
