#include <gtest/gtest.h>

#include "qcorr/presentations.hpp"

using namespace qcorr;

namespace {

// Brute-force solutions of the homogeneous system restricted to the first n0 columns.
std::set<std::vector<int>> brute(const BinaryLinearSystem& A, int n0) {
    std::set<std::vector<int>> out;
    for (unsigned long mask = 0; mask < (1ul << A.n()); ++mask) {
        bool ok = true;
        for (const auto& r : A.rows()) {
            int par = 0;
            for (int j : r) par ^= (mask >> j) & 1;
            ok = ok && par == 0;
        }
        if (!ok) continue;
        std::vector<int> v;
        for (int j = 0; j < n0; ++j) v.push_back((mask >> j) & 1);
        out.insert(v);
    }
    return out;
}

std::vector<int> iota_vec(int n) {
    std::vector<int> v(n);
    for (int i = 0; i < n; ++i) v[i] = i;
    return v;
}

}  // namespace

TEST(Presentations, SolutionGroupCounts) {
    EXPECT_EQ(solution_group(BinaryLinearSystem(3, {{0, 1, 2}})).relators.size(), 7u);
    const auto empty = solution_group(BinaryLinearSystem(4, {}));
    EXPECT_EQ(empty.relators.size(), 4u);
    for (int j = 0; j < 4; ++j) EXPECT_EQ(empty.relators[j], gen_word(j, 2));
    const BinaryLinearSystem two(4, {{0, 1, 2}, {1, 2, 3}});
    EXPECT_EQ(row_commuting_pairs(two), (std::set<std::pair<int, int>>{{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}}));
    EXPECT_EQ(solution_group(two).relators.size(), 4u + 2u + 5u);
}

TEST(Presentations, Ehlpc) {
    EhlpcPresentation E;
    E.A = BinaryLinearSystem(3, {{0, 1, 2}});
    EXPECT_EQ(ehlpc_presentation(E).relators, solution_group(E.A).relators);
    E.add_y();
    const auto base = ehlpc_presentation(E).relators.size();
    auto E1 = add_conjugacy(E, 0, 1, 2);
    EXPECT_EQ(ehlpc_presentation(E1).relators.size(), base + 1);
    EXPECT_GE(ehlpc_presentation(E1).relators.back().size(), 4u);

    auto E2 = add_conjugacy(E, 0, 1, 1);
    EXPECT_EQ(ehlpc_presentation(E2).relators.back(), concat({gen_word(3, -1), gen_word(1), gen_word(3), gen_word(1, -1)}));

    EhlpcPresentation F;
    F.ell = 2;
    F = add_power_conjugacy(F, 1, 0, 2);
    EXPECT_EQ(ehlpc_presentation(F).relators.back(), concat({gen_word(1, -1), gen_word(0), gen_word(1), gen_word(0, -2)}));
    EXPECT_THROW(add_power_conjugacy(F, 0, 1, 2), TriangularityViolation);
    EXPECT_THROW(add_conjugacy(F, 5, 0, 0), std::out_of_range);
}

TEST(Presentations, NormalizeRows) {
    const BinaryLinearSystem three(3, {{0, 1, 2}});
    EXPECT_EQ(normalize_rows_to_three(three).system.rows(), three.rows());

    const auto one = normalize_rows_to_three(BinaryLinearSystem(1, {{0}}));
    EXPECT_EQ(one.system.n(), 4);
    EXPECT_EQ(one.system.m(), 4);
    EXPECT_EQ(one.system.kappa(), 3);

    const auto four = normalize_rows_to_three(BinaryLinearSystem(4, {{0, 1, 2, 3}}));
    EXPECT_EQ(four.system.n(), 9);
    EXPECT_EQ(four.system.m(), 6);
    EXPECT_EQ(four.system.kappa(), 3);
}

TEST(Presentations, NormalizationPreservesSolutions) {
    const std::vector<BinaryLinearSystem> cases{
        BinaryLinearSystem(3, {{0, 1, 2}}), BinaryLinearSystem(1, {{0}}), BinaryLinearSystem(4, {{0, 1, 2, 3}}),
        BinaryLinearSystem(5, {{0, 1}, {1, 2, 3, 4}, {}}), BinaryLinearSystem(5, {{0, 1, 2, 3, 4}, {2}})};
    for (const auto& A : cases) {
        const auto N = normalize_rows_to_three(A);
        EXPECT_TRUE(restricted_solution_sets_equal(A, N.system, N.var_map));
        EXPECT_EQ(restricted_solutions(N.system, iota_vec(A.n())), brute(A, A.n()));
        if (N.system.n() <= 20) {
            EXPECT_EQ(brute(N.system, A.n()), brute(A, A.n()));
        }
    }
    // a size-one row forces the variable to zero
    EXPECT_EQ(restricted_solutions(normalize_rows_to_three(BinaryLinearSystem(1, {{0}})).system, {0}),
              (std::set<std::vector<int>>{{0}}));
}

TEST(Presentations, JsonRoundTrip) {
    const BinaryLinearSystem A(4, {{0, 1, 2}, {1, 2, 3}});
    EXPECT_EQ(linsys_from_json(linsys_to_json(A)).rows(), A.rows());
    EhlpcPresentation E;
    E.A = A;
    E.ell = 2;
    E = add_conjugacy(E, 1, 0, 3);
    E = add_power_conjugacy(E, 1, 0, 3);
    const auto back = ehlpc_from_json(ehlpc_to_json(E));
    EXPECT_EQ(back.C1, E.C1);
    EXPECT_EQ(back.L, E.L);
    EXPECT_EQ(back.ell, E.ell);
}

TEST(Presentations, RejectsMalformed) {
    EXPECT_THROW(BinaryLinearSystem(2, {{0, 2}}), std::out_of_range);
    EXPECT_THROW(BinaryLinearSystem(2, {{1, 1}}), std::invalid_argument);
}
