#include <gtest/gtest.h>

#include "qcorr/fnfamily.hpp"

using namespace qcorr;

namespace {

CyclotomicNumber q(long a, long b) { return CyclotomicNumber(Rational(a, b)); }

// One row {0,1,2}; t1 = 3 and t2 = 4 lie outside it.
FnContext open_ctx(int p) { return FnContext(BinaryLinearSystem(5, {{0, 1, 2}}), 0, 3, 4, p); }

// Rows {0,1,2},{1,2,3}; t1 = 0 and t2 = 3 are forced equal in the solution group.
FnContext toy_ctx(int p) { return FnContext(BinaryLinearSystem(4, {{0, 1, 2}, {1, 2, 3}}), 1, 0, 3, p); }

std::size_t qidx(const FnContext& ctx, const std::string& l) { return label_index(ctx.questions(), l); }

TraceFunction minimal_f(const FnContext& ctx, const WnData& wn) {
    TraceFunction f{std::vector<std::uint8_t>(wn.words.size(), 0)};
    for (auto i : trace_constraints(ctx, wn).forced1) f.values[i] = 1;
    return f;
}

}  // namespace

TEST(FnFamily, ContextValidation) {
    EXPECT_THROW(FnContext(BinaryLinearSystem(4, {{0, 1, 2, 3}}), 0, 1, 2, 5), std::invalid_argument);
    EXPECT_THROW(FnContext(BinaryLinearSystem(5, {{0, 1, 2}}), 0, 0, 4, 5), std::invalid_argument);
    EXPECT_THROW(FnContext(BinaryLinearSystem(5, {{0, 1, 2}}), 3, 0, 1, 5), std::invalid_argument);
    EXPECT_THROW(FnContext(BinaryLinearSystem(5, {{0, 1, 2}}), 0, 3, 4, 9), std::invalid_argument);
    EXPECT_EQ(open_ctx(5).question_count(), 5u + 1u + 5u);
}

TEST(FnFamily, Sigma) {
    const auto ctx = open_ctx(5);
    const auto s = sigma(ctx, qidx(ctx, "x1"), 0);
    ASSERT_EQ(s.size(), 2u);
    EXPECT_TRUE(s.at(NormalWord{}) == q(1, 2));
    EXPECT_TRUE(s.at(NormalWord{1}) == q(1, 2));
    EXPECT_TRUE(sigma(ctx, qidx(ctx, "x1"), 4).empty());
    for (unsigned a = 0; a < 8; ++a) {
        const auto r = sigma(ctx, qidx(ctx, "r0"), a);
        EXPECT_EQ(r.size(), 8u);
        for (const auto& [w, c] : r) EXPECT_TRUE(c == q(1, 8) || c == q(-1, 8));
    }
}

TEST(FnFamily, WnBasics) {
    for (int p : {3, 5}) {
        const auto ctx = open_ctx(p);
        const auto wn = compute_Wn(ctx);
        EXPECT_TRUE(wn.index.count(NormalWord{}));
        for (int j = 1; j < p; ++j) EXPECT_TRUE(wn.index.count(embed_dihedral(ctx, DihedralElement{0, j}))) << j;
        for (std::size_t i = 1; i < wn.words.size(); ++i) EXPECT_TRUE(length_lex_less(wn.words[i - 1], wn.words[i]));
        const auto t = trace_constraints(ctx, wn);
        EXPECT_EQ(t.forced1.size(), 1u);
        EXPECT_EQ(t.forced1.size() + t.forced0.size() + t.free.size(), wn.words.size());
        EXPECT_TRUE(std::count(t.forced0.begin(), t.forced0.end(), wn.index.at(NormalWord{ctx.x0()})));
    }
}

TEST(FnFamily, CorrelationFromMinimalF) {
    const int p = 5;
    const auto ctx = open_ctx(p);
    const auto wn = compute_Wn(ctx);
    const auto f = minimal_f(ctx, wn);
    const auto c = correlation_from_f(ctx, wn, f);
    EXPECT_TRUE(c.get("m", "m", "000", "000") == q(1, p));
    // f(x_i) = 0 gives 1/2 on the variable diagonal
    EXPECT_TRUE(c.get("x1", "x1", "000", "000") == q(1, 2));
    EXPECT_TRUE(c.get("x1", "x1", "000", "001").is_zero());
    EXPECT_TRUE(is_nonsignalling(c).ok);
    TraceFunction bad = f;
    bad.values[wn.index.at(NormalWord{ctx.x0()})] = 1;
    EXPECT_THROW(correlation_from_f(ctx, wn, bad), ConstraintViolation);
}

TEST(FnFamily, DihedralBlockIgnoresFreeChoices) {
    const auto ctx = open_ctx(5);
    const auto wn = compute_Wn(ctx);
    FnEnumerator en(ctx, wn);
    const auto base = correlation_from_f(ctx, wn, en.candidate(0));
    std::vector<std::string> dq;
    for (const auto& [fx, dx] : fn_alpha_map(ctx)) dq.push_back(fx);
    for (long k : {1L, 17L, 123L, 4095L}) {
        const auto c = correlation_from_f(ctx, wn, en.candidate(BigInt(k)));
        EXPECT_TRUE(c.restrict_to(dq, dq) == base.restrict_to(dq, dq));
    }
}

TEST(FnFamily, Membership) {
    const int p = 5;
    const auto ctx = open_ctx(p);
    const auto wn = compute_Wn(ctx);
    // an abelian image solving Ax = 0 together with a faithful D_p image
    const double c = std::cos(2 * std::acos(-1.0) / p), s = std::sin(2 * std::acos(-1.0) / p);
    FloatMatrix t2 = FloatMatrix::identity(2), t1(2, 2), neg = Complex(-1) * FloatMatrix::identity(2);
    t2(1, 1) = -1;
    t1(0, 0) = c, t1(0, 1) = s, t1(1, 0) = s, t1(1, 1) = -c;
    const auto f = f_from_finite_image(ctx, wn, {neg, neg, FloatMatrix::identity(2), t1, t2});
    EXPECT_TRUE(is_in_Fn(ctx, wn, f));
    EXPECT_TRUE(validate(correlation_from_f(ctx, wn, f)).ok);
    // rows are not relators of the Coxeter group: a non-solution image is a
    // legal trace function that fails the perfect check
    const auto g = f_from_finite_image(ctx, wn, {neg, neg, neg, t1, t2});
    EXPECT_FALSE(is_in_Fn(ctx, wn, g));
    EXPECT_FALSE(fn_perfect_report(ctx, wn, g).violations[0].empty());
    EXPECT_THROW(f_from_finite_image(ctx, wn, {neg, neg, neg, t1 * t2, t2}), RelatorViolation);

    FnEnumerator en(ctx, wn);
    std::size_t nonmembers = 0;
    for (long k = 0; k < 64; ++k) {
        const auto g = en.candidate(BigInt(k));
        const auto rep = fn_perfect_report(ctx, wn, g);
        EXPECT_EQ(en.member(BigInt(k)), rep.pass());
        nonmembers += !rep.pass();
    }
    EXPECT_GT(nonmembers, 0u);
}

TEST(FnFamily, Enumeration) {
    const auto ctx = open_ctx(3);
    const auto wn = compute_Wn(ctx);
    FnEnumerator en(ctx, wn);
    std::size_t calls = 0;
    en.enumerate(0, 0, [&](const BigInt&, const TraceFunction&) { ++calls; });
    EXPECT_EQ(calls, 0u);
    std::vector<BigInt> first;
    const auto next = en.enumerate(0, 6, [&](const BigInt& k, const TraceFunction& f) {
        first.push_back(k);
        EXPECT_TRUE(is_in_Fn(ctx, wn, f));
        EXPECT_TRUE(is_synchronous(correlation_from_f(ctx, wn, f)));
    });
    ASSERT_EQ(first.size(), 6u);
    ASSERT_TRUE(next.has_value());
    // restarting from a yielded index reproduces the tail
    std::vector<BigInt> again;
    en.enumerate(first[3], 3, [&](const BigInt& k, const TraceFunction&) { again.push_back(k); });
    EXPECT_EQ(again, std::vector<BigInt>(first.begin() + 3, first.end()));
}

TEST(FnFamily, ToySystemHasNoMembers) {
    const auto ctx = toy_ctx(3);
    const auto wn = compute_Wn(ctx);
    FnEnumerator en(ctx, wn);
    std::size_t calls = 0;
    const auto next = en.enumerate(0, 4, [&](const BigInt&, const TraceFunction&) { ++calls; });
    EXPECT_EQ(calls, 0u);
    EXPECT_FALSE(next.has_value());
    // perfectness would force f(t1 t2) = 1, contradicting the constraint on <t1, t2>
    EXPECT_FALSE(is_in_Fn(ctx, wn, minimal_f(ctx, wn)));
}

TEST(FnFamily, JsonRoundTrip) {
    const auto ctx = open_ctx(5);
    const auto back = fn_context_from_json(fn_context_to_json(ctx));
    EXPECT_EQ(back.system().rows(), ctx.system().rows());
    EXPECT_EQ(back.t2(), 4);
    const auto wn = compute_Wn(ctx);
    FnEnumerator en(ctx, wn);
    const auto f = en.candidate(BigInt(77));
    EXPECT_EQ(trace_function_from_json(ctx, wn, trace_function_to_json(wn, f)).values, f.values);
}
