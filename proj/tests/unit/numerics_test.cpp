#include <gtest/gtest.h>

#include <random>

#include "qcorr/numerics.hpp"

using namespace qcorr;

namespace {

Eigen::MatrixXcd random_unitary(std::mt19937_64& rng, int d) {
    std::normal_distribution<double> g;
    Eigen::MatrixXcd m(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = {g(rng), g(rng)};
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
    return qr.householderQ();
}

std::vector<FloatMatrix> random_pvm(std::mt19937_64& rng, int d, int n) {
    const auto U = random_unitary(rng, d);
    std::vector<Eigen::MatrixXcd> P(n, Eigen::MatrixXcd::Zero(d, d));
    for (int i = 0; i < d; ++i) P[rng() % n] += U.col(i) * U.col(i).adjoint();
    std::vector<FloatMatrix> out;
    for (const auto& m : P) out.push_back(from_eigen(m));
    return out;
}

}  // namespace

TEST(Numerics, NormsAndTraces) {
    EXPECT_NEAR(hs_norm(FloatMatrix::identity(5)), 1.0, 1e-15);
    EXPECT_NEAR(normalized_trace(FloatMatrix::identity(5)).real(), 1.0, 1e-15);
    FloatMatrix z(2, 2);
    z(0, 0) = 1;
    z(1, 1) = -1;
    EXPECT_NEAR(hs_norm(z), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(normalized_trace(z)), 0.0, 1e-15);
    std::mt19937_64 rng(5);
    for (int t = 0; t < 10; ++t) {
        const int d = 1 + static_cast<int>(rng() % 12);
        const auto U = from_eigen(random_unitary(rng, d)), V = from_eigen(random_unitary(rng, d));
        EXPECT_NEAR(hs_norm(U), 1.0, 1e-12);
        EXPECT_TRUE(is_unitary(U));
        const auto M = from_eigen(Eigen::MatrixXcd::Random(d, d));
        EXPECT_NEAR(hs_norm(U * M * V), hs_norm(M), 1e-12);
    }
}

TEST(Numerics, ApproxDefect) {
    // Z_2 x Z_2 on C^2 through Pauli X and Z: the commutator relator fails
    Presentation pres;
    pres.generators = 2;
    pres.relators = {gen_word(0, 2), gen_word(1, 2), commutator(gen_word(0), gen_word(1))};
    FloatMatrix X(2, 2), Z(2, 2);
    X(0, 1) = X(1, 0) = 1;
    Z(0, 0) = 1;
    Z(1, 1) = -1;
    auto rep = approx_defect(pres, {Z, Z});
    EXPECT_LT(rep.epsilon, 1e-12);
    rep = approx_defect(pres, {X, Z});
    EXPECT_NEAR(rep.relator_defects[2], 2.0, 1e-12);
    Presentation single;
    single.generators = 1;
    single.relators = {gen_word(0)};
    EXPECT_EQ(approx_defect(single, {FloatMatrix::identity(3)}).epsilon, 0.0);
    // a small perturbation moves the defect by O(delta)
    for (double delta : {1e-3, 1e-4}) {
        // exp(i delta X) = cos(delta) + i sin(delta) X
        const FloatMatrix W = Complex(std::cos(delta)) * FloatMatrix::identity(2) + Complex(0, std::sin(delta)) * X;
        const auto d = approx_defect(pres, {Z * W, Z}).epsilon;
        EXPECT_LT(d, 10 * delta);
        EXPECT_GT(d, delta / 10);
    }
    EXPECT_THROW(approx_defect(single, {FloatMatrix::identity(2) + FloatMatrix::identity(2)}), NotUnitary);
}

TEST(Numerics, DeltaValues) {
    EXPECT_NEAR(delta_pos(1), 2 * std::sqrt(2.0), 1e-14);
    EXPECT_NEAR(delta_pos(2), 43 * 2 * std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(delta(1, 2), delta_pos(2) * 14 * 2 + 6, 1e-9);
    EXPECT_THROW(delta(0.5, 2), std::invalid_argument);
}

TEST(Numerics, RoundExactPvmIsIdentity) {
    std::mt19937_64 rng(8);
    const auto P = random_pvm(rng, 10, 4);
    const auto res = round_to_pvm(P, 1.0);
    for (std::size_t i = 0; i < P.size(); ++i) EXPECT_LT(max_abs_diff(res.pvm[i], P[i]), 1e-10);
    for (double d : res.distances) EXPECT_LT(d, 1e-10);
}

TEST(Numerics, RoundPerturbedPvmWithinBound) {
    std::mt19937_64 rng(16);
    std::normal_distribution<double> g;
    const int d = 16, n = 8;
    auto P = random_pvm(rng, d, n);
    for (auto& m : P) {
        FloatMatrix E(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) E(i, j) = {g(rng), g(rng)};
        m = m + Complex(1e-4 / hs_norm(E)) * E;
    }
    const auto def = near_pvm_defects(P);
    ASSERT_LE(def.epsilon, 1e-3);
    const auto res = round_to_pvm(P, def.c);
    EXPECT_LE(res.pvm_defect, 1e-12);
    for (double dist : res.distances) EXPECT_LE(dist, delta(def.c, n) * def.epsilon);
}

TEST(Numerics, RoundGrossInputDoesNotCrash) {
    std::vector<FloatMatrix> P(3, Complex(0.9) * FloatMatrix::identity(4));
    const auto res = round_to_pvm(P, 1.0);
    EXPECT_LE(res.pvm_defect, 1e-12);
    double worst = 0;
    for (double dd : res.distances) worst = std::max(worst, dd);
    EXPECT_GT(worst, 0.5);
}

TEST(Numerics, StrategyFromRepresentation) {
    const BinaryLinearSystem A(3, {{0, 1, 2}});
    const auto sc = linear_system_scenario(A);
    const auto meas = linear_system_measurements(A, abelian_regular_observables(A));
    const auto S = strategy_from_rep(sc, meas);
    const auto c = correlation_from_strategy(S);
    EXPECT_TRUE(check_perfect(c, A).pass());
    EXPECT_TRUE(is_synchronous(c));
    const auto t = correlation_via_trace(sc, meas);
    for (std::size_t i = 0; i < c.table().size(); ++i) EXPECT_NEAR(c.table()[i], t.table()[i], 1e-12);

    // d = 1: the trivial observables give the deterministic zero-solution correlation
    const std::vector<FloatMatrix> ones(3, FloatMatrix::identity(1));
    const auto c1 = correlation_from_strategy(strategy_from_rep(sc, linear_system_measurements(A, ones)));
    const auto ans = solution_answers(A, {0, 0, 0});
    const auto det = deterministic_correlation<double>(sc, ans, ans);
    for (std::size_t i = 0; i < c1.table().size(); ++i) EXPECT_NEAR(c1.table()[i], det.table()[i], 1e-15);
}
