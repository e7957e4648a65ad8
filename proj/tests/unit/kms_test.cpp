#include <gtest/gtest.h>

#include "qcorr/kms.hpp"

using namespace qcorr;

namespace {

const KmsGenerator A1 = KmsGenerator::bottom(1);
const KmsGenerator a1 = KmsGenerator::coin(1);

// Length of f (*) a applied to an arbitrary word before reduction.
std::size_t unreduced_len_a(std::size_t f) { return 4 * f + 6; }

}  // namespace

TEST(Kms, GeneratorSets) {
    EXPECT_EQ(generator_sets(1, 1).L0.size(), 8u);
    EXPECT_EQ(generator_sets(4, 1).L2.size(), 16u);
    EXPECT_EQ(generator_sets(3, 1).L1.size(), 4u);
}

TEST(Kms, CircledastShapes) {
    const KmsWord x = state_letter(2);
    const KmsWord c = circledast(x, A1);
    ASSERT_EQ(c.size(), 4u);
    EXPECT_EQ(c, kms_concat({kms_inverse(x), kms_letter(A1, -1), x, kms_letter(A1)}));
    EXPECT_TRUE(circledast(KmsWord{}, A1).empty());
    EXPECT_EQ(circledast(x, a1).size(), 10u);
    EXPECT_EQ(circledast(x, a1, false).size(), unreduced_len_a(1));
    EXPECT_THROW(circledast(x, KmsGenerator::coin_prime(1)), std::invalid_argument);
}

TEST(Kms, IteratedCircledast) {
    const KmsWord x = state_letter(1);
    EXPECT_EQ(iterated_circledast(x, {}), x);
    const auto twice = iterated_circledast(x, {a1, a1}, false);
    EXPECT_EQ(twice.size(), unreduced_len_a(unreduced_len_a(1)));
    EXPECT_TRUE(kms_is_reduced(iterated_circledast(x, {a1, a1})));
}

TEST(Kms, CommandRelators) {
    const int k = 2;
    const auto stop = command_relator(make_command(CommandKind::Stop, 3, 0), k);
    EXPECT_EQ(stop, kms_concat({state_letter(3), kms_inverse(state_letter(0))}));
    const auto ec = command_relator(make_command(CommandKind::EmptyCheck, 1, 2, {1}), k);
    EXPECT_EQ(ec, kms_reduce(kms_concat({circledast(state_letter(1), A1), kms_inverse(circledast(state_letter(2), A1))})));
    const auto add = command_relator(make_command(CommandKind::Add, 1, 2, {1}), k);
    int coins = 0;
    for (const auto& l : add) coins += l.gen.kind == KmsGenerator::Kind::a;
    EXPECT_EQ(coins, 4);  // one expansion contributes four a_1 letters
    EXPECT_THROW(command_relator(make_command(CommandKind::Add, 1, 2, {3}), k), std::invalid_argument);
}

TEST(Kms, InputWords) {
    ASSERT_EQ(input_word_zero_alias(2).size(), 1u);
    EXPECT_EQ(input_word_zero_alias(2)[0].gen, KmsGenerator::x(1, {0, 1, 2}));
    EXPECT_EQ(accept_word(2)[0].gen, KmsGenerator::x(0, {0, 1, 2}));
    // n = 1, k = 1: one a-step then one A-step
    EXPECT_EQ(input_word(1, 1, false).size(), 2 * unreduced_len_a(1) + 2);
    EXPECT_EQ(input_word(0, 1, false).size(), 4u);
}

TEST(Kms, ExtensionAndQuotientRelators) {
    const auto ext = extension_relators(1);
    ASSERT_EQ(ext.size(), 3u);
    const KmsWord t = kms_letter(KmsGenerator::extension_t());
    EXPECT_EQ(ext[0], kms_concat({kms_inverse(t), kms_letter(a1, -1), t, kms_letter(a1)}));
    const auto tail = kms_inverse(circledast(state_letter(1), a1));
    ASSERT_GE(ext[2].size(), tail.size());
    EXPECT_TRUE(std::equal(tail.begin(), tail.end(), ext[2].end() - static_cast<long>(tail.size())));

    const auto pq = pn_quotient_relators(2, 1);
    ASSERT_EQ(pq.size(), 2u);
    EXPECT_EQ(pq[1], kms_concat({t, t}));
    EXPECT_EQ(pq[0], kms_reduce(kms_concat({iterated_circledast(state_letter(1), {a1, a1}), kms_inverse(state_letter(1))})));
}

TEST(Kms, PresentationFromMachine) {
    const MinskyMachine m(1, 3,
                          {make_command(CommandKind::Sub, 1, 1, {1}), make_command(CommandKind::EmptyCheck, 1, 2, {1}),
                           make_command(CommandKind::Stop, 2, 0)});
    const auto kp = kms_presentation(m);
    EXPECT_TRUE(kp.common_relations_partial);
    EXPECT_NO_THROW(kp.presentation.check());
    const auto s = generator_sets(1, 2);
    EXPECT_EQ(kp.presentation.generators, static_cast<int>(s.L0.size() + s.L1.size() + s.L2.size()));
}
