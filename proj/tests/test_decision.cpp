#include <doctest.h>

#include <fstream>

#include "deep/decision.hpp"
#include "deep/generalise.hpp"
#include "fixtures.hpp"

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

TEST_CASE("individual matching the star pattern gets a positive recommendation") {
    const auto set = worked_example_final_set();
    const auto rec = match({1, 1, 0, 0}, set);
    REQUIRE(rec.pattern_index.has_value());
    CHECK(set.patterns[*rec.pattern_index].values ==
          std::vector<V>{V::one, V::one, V::star, V::zero});
    CHECK(rec.advice == Advice::treat);
    CHECK(rec.specificity == MatchSpecificity::star_match);
}

TEST_CASE("unmatched individual gets no recommendation") {
    const auto set = worked_example_final_set();
    const auto rec = match({0, 1, 0, 0}, set);
    CHECK_FALSE(rec.pattern_index.has_value());
    CHECK(rec.advice == Advice::no_recommendation);
    CHECK(rec.specificity == MatchSpecificity::unmatched);
}

TEST_CASE("literal-only match is exact; cross dominates star in the label") {
    const auto set = worked_example_final_set();
    const auto exact = match({1, 0, 0, 1}, set);  // pattern b
    CHECK(exact.specificity == MatchSpecificity::exact);
    CHECK(exact.advice == Advice::treat);

    const auto crossed = match({0, 0, 0, 1}, set);  // pattern e via its x position
    CHECK(crossed.specificity == MatchSpecificity::cross_match);
    CHECK(crossed.advice == Advice::treat);

    const auto negative = match({1, 0, 1, 1}, set);  // pattern d via its star
    CHECK(negative.advice == Advice::do_not_treat);
    CHECK(negative.specificity == MatchSpecificity::star_match);
}

TEST_CASE("at most one final pattern matches any individual vector") {
    const auto set = worked_example_final_set();
    for (int bits = 0; bits < 16; ++bits) {
        std::vector<std::uint8_t> ind = {
            static_cast<std::uint8_t>((bits >> 3) & 1), static_cast<std::uint8_t>((bits >> 2) & 1),
            static_cast<std::uint8_t>((bits >> 1) & 1), static_cast<std::uint8_t>(bits & 1)};
        int matches = 0;
        for (const auto& p : set.patterns) {
            bool ok = true;
            for (std::size_t i = 0; i < p.values.size(); ++i) {
                if (p.values[i] == V::star || p.values[i] == V::cross) continue;
                if ((p.values[i] == V::one) != (ind[i] != 0)) {
                    ok = false;
                    break;
                }
            }
            matches += ok;
        }
        CHECK(matches <= 1);
        const auto rec = match(ind, set);
        CHECK((matches == 1) == rec.pattern_index.has_value());
    }
}

TEST_CASE("matching a '?' pattern yields no recommendation") {
    PatternSet set;
    set.descriptor_vars = {2};
    set.z_positions = {false};
    Pattern p;
    p.values = {V::zero};
    p.sign = Sign::uncertain;
    set.patterns = {p};
    const auto rec = match({0}, set);
    REQUIRE(rec.pattern_index.has_value());
    CHECK(rec.advice == Advice::no_recommendation);
}

TEST_CASE("misaligned vectors are rejected") {
    const auto set = worked_example_final_set();
    CHECK_THROWS_AS(match({1, 0}, set), DataError);
}

TEST_CASE("batch matching appends advice and specificity columns") {
    const auto d = testing::worked_example_dataset();
    auto set = worked_example_final_set();
    const std::string pat_path = "/tmp/deep_test_batch_patterns.csv";
    write_pattern_csv(pat_path, set, d.variable_names());
    const auto named = read_pattern_csv(pat_path);

    const std::string ind_path = "/tmp/deep_test_individuals.csv";
    {
        std::ofstream out(ind_path);
        out << "X1,X2,X3,X4\n1,1,0,0\n0,1,0,0\n1,0,0,1\n";
    }
    const std::string out_path = "/tmp/deep_test_recommendations.csv";
    batch_match(ind_path, named, out_path);

    std::ifstream in(out_path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "X1,X2,X3,X4,advice,specificity");
    std::getline(in, line);
    CHECK(line == "1,1,0,0,treat,star-match");
    std::getline(in, line);
    CHECK(line == "0,1,0,0,no-recommendation,unmatched");
    std::getline(in, line);
    CHECK(line == "1,0,0,1,treat,exact");

    std::remove(pat_path.c_str());
    std::remove(ind_path.c_str());
    std::remove(out_path.c_str());
}

TEST_CASE("batch matching rejects a schema mismatch") {
    const auto d = testing::worked_example_dataset();
    auto set = worked_example_final_set();
    const std::string pat_path = "/tmp/deep_test_batch_patterns2.csv";
    write_pattern_csv(pat_path, set, d.variable_names());
    const auto named = read_pattern_csv(pat_path);

    const std::string ind_path = "/tmp/deep_test_individuals2.csv";
    {
        std::ofstream out(ind_path);
        out << "X1,X2,X3\n1,1,0\n";
    }
    CHECK_THROWS_AS(batch_match(ind_path, named, "/tmp/deep_test_should_not_exist.csv"),
                    DataError);
    std::remove(pat_path.c_str());
    std::remove(ind_path.c_str());
}
