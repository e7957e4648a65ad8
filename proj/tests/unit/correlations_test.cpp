#include <gtest/gtest.h>

#include <random>

#include "qcorr/correlations.hpp"

using namespace qcorr;

namespace {

Scenario small() { return {{"0", "1"}, {"0", "1"}, {"0", "1"}, {"0", "1"}}; }

}  // namespace

TEST(Correlations, Validate) {
    const auto det = deterministic_correlation<CyclotomicNumber>(small(), {0, 1}, {0, 1});
    EXPECT_TRUE(validate(det).ok);
    const ExactCorrelation zero(small());
    const auto r = validate(zero);
    EXPECT_FALSE(r.ok);
    EXPECT_DOUBLE_EQ(r.max_normalization_defect, 1.0);
    auto neg = det;
    neg.at(0, 0, 0, 0) = CyclotomicNumber(2L);
    neg.at(0, 0, 1, 1) = CyclotomicNumber(-1L);
    EXPECT_FALSE(validate(neg).ok);
    EXPECT_DOUBLE_EQ(validate(neg).max_negativity, 1.0);
}

TEST(Correlations, Nonsignalling) {
    const auto det = deterministic_correlation<double>(small(), {0, 1}, {1, 0});
    EXPECT_TRUE(is_nonsignalling(det).ok);
    EXPECT_EQ(is_nonsignalling(det).max_defect, 0.0);
    // Alice's answer depends on Bob's question
    FloatCorrelation c(small());
    for (std::size_t x = 0; x < 2; ++x) {
        c.at(x, 0, 0, 0) = 1;
        c.at(x, 1, 1, 1) = 1;
    }
    EXPECT_FALSE(is_nonsignalling(c).ok);
    EXPECT_GT(is_nonsignalling(c).max_defect, 0.5);
}

TEST(Correlations, Synchronous) {
    EXPECT_TRUE(is_synchronous(deterministic_correlation<double>(small(), {1, 0}, {1, 0})));
    EXPECT_FALSE(is_synchronous(deterministic_correlation<double>(small(), {1, 0}, {0, 0})));
    std::mt19937_64 rng(3);
    FloatCorrelation c(small());
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t y = 0; y < 2; ++y) {
            double s = 0;
            for (std::size_t a = 0; a < 2; ++a)
                for (std::size_t b = 0; b < 2; ++b) s += c.at(x, y, a, b) = std::uniform_real_distribution<double>(0.1, 1)(rng);
            for (std::size_t a = 0; a < 2; ++a)
                for (std::size_t b = 0; b < 2; ++b) c.at(x, y, a, b) /= s;
        }
    EXPECT_FALSE(is_synchronous(c));
    EXPECT_THROW(is_synchronous(ExactCorrelation(Scenario{{"0"}, {"1"}, {"0"}, {"0"}})), ScenarioMismatch);
}

TEST(Correlations, CheckPerfect) {
    const BinaryLinearSystem A(3, {{0, 1, 2}});
    const auto sc = linear_system_scenario(A);
    for (const auto& sol : std::vector<std::vector<int>>{{0, 0, 0}, {1, 1, 0}, {0, 1, 1}}) {
        const auto ans = solution_answers(A, sol);
        const auto c = deterministic_correlation<CyclotomicNumber>(sc, ans, ans);
        EXPECT_TRUE(check_perfect(c, A).pass());
        EXPECT_TRUE(is_synchronous(c));
    }
    // Alice answers 100 on x0 while Bob answers 000
    auto ans = solution_answers(A, {0, 0, 0});
    auto alice = ans;
    alice[label_index(sc.X, "x0")] = label_index(sc.A, "100");
    const auto bad = deterministic_correlation<CyclotomicNumber>(sc, alice, ans);
    const auto rep = check_perfect(bad, A);
    EXPECT_FALSE(rep.pass());
    EXPECT_FALSE(rep.violations[1].empty());
    // an inconsistent assignment fails too
    const auto wrong = solution_answers(A, {1, 0, 0});
    EXPECT_FALSE(check_perfect(deterministic_correlation<CyclotomicNumber>(sc, wrong, wrong), A).pass());
}

TEST(Correlations, StrategyCorrelation) {
    // maximally entangled qubit pair, both measure Z: perfectly correlated
    FloatStrategy s;
    s.mode = StrategyMode::Tensor;
    s.dim_a = s.dim_b = 2;
    s.scenario = {{"z"}, {"z"}, {"0", "1"}, {"0", "1"}};
    s.state = {1 / std::sqrt(2.0), 0, 0, 1 / std::sqrt(2.0)};
    FloatMatrix p0(2, 2), p1(2, 2);
    p0(0, 0) = 1;
    p1(1, 1) = 1;
    s.alice = {{p0, p1}};
    s.bob = {{p0, p1}};
    EXPECT_NO_THROW(check_strategy(s));
    const auto c = correlation_from_strategy(s);
    EXPECT_NEAR(c.at(0, 0, 0, 0), 0.5, 1e-15);
    EXPECT_NEAR(c.at(0, 0, 0, 1), 0.0, 1e-15);
    EXPECT_TRUE(is_synchronous(c));
    EXPECT_TRUE(is_good(s));
    EXPECT_LT(synchronous_consistency(s).max_defect, 1e-15);
    // incomplete family is rejected
    s.alice = {{p0, p0}};
    EXPECT_THROW(check_strategy(s), InvariantViolation);
}

TEST(Correlations, JsonRoundTrip) {
    const BinaryLinearSystem A(3, {{0, 1, 2}});
    const auto ans = solution_answers(A, {1, 0, 1});
    const auto c = deterministic_correlation<CyclotomicNumber>(linear_system_scenario(A), ans, ans);
    EXPECT_TRUE(correlation_from_json<CyclotomicNumber>(correlation_to_json(c)) == c);
    const auto f = to_float(c);
    EXPECT_TRUE(correlation_from_json<double>(correlation_to_json(f)) == f);
    EXPECT_EQ(scenario_from_json(scenario_to_json(small())), small());
}
