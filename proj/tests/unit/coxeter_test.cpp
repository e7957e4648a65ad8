#include <gtest/gtest.h>

#include <random>

#include "qcorr/coxeter.hpp"

using namespace qcorr;

namespace {

// generators 0 = t1, 1 = t2, 2, 3; 2 and 3 commute, 2 commutes with t1
CoxeterContext ctx_p(int p) { return CoxeterContext(4, {{2, 3}, {0, 2}}, 0, 1, p); }

}  // namespace

TEST(Coxeter, Neighbors) {
    const auto ctx = ctx_p(3);
    EXPECT_TRUE(neighbors(ctx, {2, 2}).count(CoxWord{}));
    EXPECT_TRUE(neighbors(ctx, {0, 1, 0}).count(CoxWord{1, 0, 1}));
    EXPECT_TRUE(neighbors(ctx, {3, 2}).count(CoxWord{2, 3}));
    for (const auto& w : neighbors(ctx, {1, 3})) EXPECT_NE(w, (CoxWord{3, 1}));
}

TEST(Coxeter, NormalForm) {
    const auto ctx = ctx_p(3);
    EXPECT_TRUE(normal_form(ctx, {3, 3}).empty());
    EXPECT_EQ(normal_form(ctx, {3, 2}), (CoxWord{2, 3}));
    const auto nf = normal_form(ctx, {0, 1, 0, 1});
    EXPECT_EQ(nf.size(), 2u);
    const FiniteQuotientOracle dih(ctx, dihedral_quotient_images(ctx));
    EXPECT_TRUE(dih.equal(nf, {0, 1, 0, 1}));
}

TEST(Coxeter, Equality) {
    const auto p5 = ctx_p(5);
    EXPECT_TRUE(equal(p5, {0, 1, 3}, {0, 1, 3}));
    EXPECT_FALSE(equal(p5, {0, 1}, {1, 0}));
    const FiniteQuotientOracle dih(p5, dihedral_quotient_images(p5));
    EXPECT_FALSE(dih.equal({0, 1}, {1, 0}));
    EXPECT_TRUE(equal(p5, {2, 3}, {3, 2}));
    EXPECT_TRUE(equal(p5, {0, 1, 0, 1, 0}, {1, 0, 1, 0, 1}));
}

TEST(Coxeter, TitsSearchMatchesFullClosure) {
    std::mt19937_64 rng(7);
    for (int p : {3, 5}) {
        const auto ctx = ctx_p(p);
        for (int t = 0; t < 300; ++t) {
            CoxWord w(std::uniform_int_distribution<int>(0, 7)(rng));
            for (auto& x : w) x = std::uniform_int_distribution<int>(0, 3)(rng);
            EXPECT_EQ(normal_form(ctx, w), normal_form_full_closure(ctx, w));
        }
    }
}

TEST(Coxeter, Oracles) {
    const auto ctx = ctx_p(3);
    const FiniteQuotientOracle trivial(ctx, std::vector<Permutation>(4, perm_identity(1)));
    EXPECT_TRUE(trivial.equal({0, 1, 2}, {3}));
    const FiniteQuotientOracle sign(ctx, sign_quotient_images(ctx, {true, true, true, true}));
    EXPECT_FALSE(sign.equal({0}, {0, 1}));
    EXPECT_TRUE(sign.equal({0, 2}, {1, 3}));
    // a t1 = t2 sign pattern with odd p violates the braid relator
    EXPECT_THROW(FiniteQuotientOracle(ctx, sign_quotient_images(ctx, {true, false, false, false})), RelatorViolation);
}

TEST(Coxeter, NodeCap) {
    std::set<std::pair<int, int>> all;
    for (int a = 2; a < 10; ++a)
        for (int b = a + 1; b < 10; ++b) all.insert({a, b});
    const CoxeterContext ctx(10, all, 0, 1, 3, 50);
    CoxWord w;
    for (int g = 9; g >= 2; --g) w.push_back(g);
    EXPECT_THROW(normal_form_full_closure(ctx, w), CoxeterCapExceeded);
}

TEST(Coxeter, RejectsMalformed) {
    EXPECT_THROW(CoxeterContext(3, {{0, 1}}, 0, 1, 3), std::invalid_argument);
    EXPECT_THROW(CoxeterContext(3, {}, 0, 0, 3), std::invalid_argument);
    EXPECT_THROW(ctx_p(3).check_word({4}), std::exception);
}

TEST(Coxeter, JsonRoundTrip) {
    const auto ctx = ctx_p(5);
    const auto back = coxeter_context_from_json(coxeter_context_to_json(ctx));
    EXPECT_EQ(back.commuting_pairs(), ctx.commuting_pairs());
    EXPECT_EQ(back.p(), 5);
}
