#include <gtest/gtest.h>

#include "qcorr/minsky.hpp"

using namespace qcorr;

namespace {

MinskyMachine drain(int glasses = 3) {
    return MinskyMachine(glasses, 3,
                         {make_command(CommandKind::Sub, 1, 1, {1}), make_command(CommandKind::EmptyCheck, 1, 2, {1}),
                          make_command(CommandKind::Stop, 2, 0)});
}

Configuration cfg(int state, std::vector<long> coins) {
    Configuration c;
    c.state = state;
    for (long v : coins) c.coins.push_back(v);
    return c;
}

}  // namespace

TEST(Minsky, ApplicableCommands) {
    const auto m = drain();
    EXPECT_TRUE(applicable_commands(m, cfg(0, {0, 0, 0})).empty());
    auto a = applicable_commands(m, cfg(1, {3, 0, 0}));
    ASSERT_EQ(a.size(), 1u);
    EXPECT_EQ(a[0].kind, CommandKind::Sub);
    a = applicable_commands(m, cfg(1, {0, 0, 0}));
    ASSERT_EQ(a.size(), 1u);
    EXPECT_EQ(a[0].kind, CommandKind::EmptyCheck);
}

TEST(Minsky, Determinism) {
    EXPECT_TRUE(is_deterministic(drain()));
    EXPECT_FALSE(is_deterministic(
        MinskyMachine(1, 2, {make_command(CommandKind::Stop, 1, 0), make_command(CommandKind::Stop, 1, 0)})));
    EXPECT_FALSE(is_deterministic(MinskyMachine(
        1, 4, {make_command(CommandKind::Add, 1, 2, {1}), make_command(CommandKind::Sub, 1, 3, {1})})));
}

TEST(Minsky, Run) {
    const auto m = drain();
    auto r = run(m, 5, 1000);
    ASSERT_TRUE(std::holds_alternative<RunAccepted>(r));
    EXPECT_EQ(std::get<RunAccepted>(r).steps, 7);
    r = run(m, 0, 1000);
    ASSERT_TRUE(std::holds_alternative<RunAccepted>(r));
    EXPECT_EQ(std::get<RunAccepted>(r).steps, 2);
    EXPECT_TRUE(std::holds_alternative<RunTimeout>(run(m, 50, 10)));
    const MinskyMachine stuck(1, 3, {make_command(CommandKind::Stop, 2, 0)});
    EXPECT_TRUE(std::holds_alternative<RunStuck>(run(stuck, 0, 100)));
}

TEST(Minsky, EquivalenceClosure) {
    const auto m = drain();
    const auto c = cfg(1, {1, 0, 0});
    EXPECT_EQ(equivalence_closure(m, c, 0), std::set<Configuration>{c});
    const auto cl = equivalence_closure(m, c, 3);
    for (const auto& d : {cfg(1, {0, 0, 0}), cfg(2, {0, 0, 0}), cfg(0, {0, 0, 0}), cfg(1, {2, 0, 0})})
        EXPECT_TRUE(cl.count(d)) << d.state;
    for (const auto& d : cl) {
        int dist = 0;
        for (int b = 0; b <= 3; ++b)
            if (equivalence_closure(m, c, b).count(d)) {
                dist = b;
                break;
            }
        EXPECT_TRUE(equivalence_closure(m, d, dist).count(c));
    }
}

TEST(Minsky, GlassExtension) {
    const auto m = drain();
    const auto e = add_glass_extension(m);
    EXPECT_EQ(e.glasses(), m.glasses() + 1);
    EXPECT_EQ(e.states(), m.states() + 7);
    EXPECT_EQ(e.commands().size(), m.commands().size() + 10);
    EXPECT_TRUE(is_deterministic(e));
    for (long n : {0L, 1L, 3L, 6L}) EXPECT_TRUE(std::holds_alternative<RunAccepted>(run(e, n, 10000))) << n;
    EXPECT_THROW(add_glass_extension(drain(1)), std::invalid_argument);
}

TEST(Minsky, PCycleExtension) {
    const auto m = drain();
    for (int p : {2, 3, 5}) {
        const auto e = p_cycle_extension(m, p);
        EXPECT_EQ(e.states(), m.states() + p - 1);
        EXPECT_EQ(e.commands().size(), m.commands().size() + p);
        EXPECT_EQ(applicable_commands(e, cfg(1, {2, 0, 0})).size(), 2u);
        // follow only the added commands from (1;0,...)
        Configuration c = cfg(1, {0, 0, 0});
        const auto& cmds = e.commands();
        c = apply_command(cmds[m.commands().size()], c);
        for (int step = 1; step < p; ++step) {
            auto app = applicable_commands(e, c);
            ASSERT_EQ(app.size(), 1u);
            c = apply_command(app[0], c);
        }
        EXPECT_EQ(c.state, 1);
        EXPECT_EQ(c.coins[0], p);
    }
}

TEST(Minsky, JsonRoundTrip) {
    const auto m = drain();
    const auto back = machine_from_json(machine_to_json(m));
    EXPECT_EQ(back.glasses(), m.glasses());
    EXPECT_EQ(back.states(), m.states());
    EXPECT_EQ(back.commands(), m.commands());
}

TEST(Minsky, RejectsMalformed) {
    EXPECT_THROW(MinskyMachine(1, 2, {make_command(CommandKind::Stop, 0, 1)}), std::invalid_argument);
    EXPECT_THROW(MinskyMachine(1, 2, {make_command(CommandKind::Sub, 1, 0, {2})}), std::invalid_argument);
    EXPECT_THROW(MinskyMachine(0, 2, {}), std::invalid_argument);
}
