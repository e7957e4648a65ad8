#include <gtest/gtest.h>

#include <cmath>

#include "qcorr/dihedral.hpp"

using namespace qcorr;

namespace {

CyclotomicNumber q(long a, long b) { return CyclotomicNumber(Rational(a, b)); }

// Left multiplication as a permutation of 2p points, reflections as s = 1.
// Elements act on Z_p x {+1,-1}: rotation r^j (i,e) = (i + j, e), reflection
// t2 (i, e) = (-i, -e). Used as an oracle for dihedral_mul.
std::vector<int> action(const DihedralElement& g, int p) {
    std::vector<int> img(2 * p);
    for (int i = 0; i < p; ++i)
        for (int e = 0; e < 2; ++e) {
            int ii = i, ee = e;
            // t1 t2 = rotation by +1 in this action
            ii = static_cast<int>(mod_floor(ii + g.j, p));
            if (g.s) ii = static_cast<int>(mod_floor(-ii, p)), ee ^= 1;
            img[e * p + i] = ee * p + ii;
        }
    return img;
}

}  // namespace

TEST(Dihedral, Multiplication) {
    for (int p : {3, 5, 7}) {
        EXPECT_EQ(dihedral_mul({0, 1}, {0, 2}, p), dihedral_rotation(3, p));
        EXPECT_EQ(dihedral_mul(dihedral_t2(), dihedral_t2(), p), dihedral_identity());
        EXPECT_EQ(dihedral_mul(dihedral_t1(p), dihedral_t1(p), p), dihedral_identity());
        EXPECT_EQ(dihedral_mul(dihedral_t1(p), dihedral_t2(), p), dihedral_rotation(1, p));
        EXPECT_EQ(dihedral_mul({0, 1}, {1, 0}, p), (DihedralElement{1, p - 1}));
        for (std::size_t a = 0; a < 2u * p; ++a)
            for (std::size_t b = 0; b < 2u * p; ++b) {
                const auto g = dihedral_from_index(a, p), h = dihedral_from_index(b, p);
                const auto ag = action(g, p), ah = action(h, p), agh = action(dihedral_mul(g, h, p), p);
                for (int x = 0; x < 2 * p; ++x) EXPECT_EQ(agh[x], ag[ah[x]]);
            }
    }
}

TEST(Dihedral, Idempotents) {
    for (int p : {3, 5, 7}) {
        const auto pi = idempotents(p);
        const auto e = DihedralAlgebraElement::basis(dihedral_identity(), p);
        EXPECT_TRUE(pi[0][0].coefficient(dihedral_identity()) == q(1, p));
        EXPECT_TRUE(pi[0][0] + pi[0][1] + pi[0][2] == e);
        EXPECT_TRUE(pi[1][0] * pi[1][0] == pi[1][0]);
        EXPECT_TRUE(pi[2][0] * pi[2][1] == DihedralAlgebraElement(p));
    }
    EXPECT_THROW(idempotents(9), std::invalid_argument);
}

TEST(Dihedral, RegularRepresentation) {
    const int p = 5;
    const auto e = DihedralAlgebraElement::basis(dihedral_identity(), p);
    EXPECT_TRUE(regular_rep(e, Side::Left) == ExactMatrix::identity(2 * p));
    for (std::size_t a = 0; a < 2u * p; a += 3)
        for (std::size_t b = 0; b < 2u * p; b += 2) {
            const auto L = regular_rep(DihedralAlgebraElement::basis(dihedral_from_index(a, p), p), Side::Left);
            const auto R = regular_rep(DihedralAlgebraElement::basis(dihedral_from_index(b, p), p), Side::Right);
            EXPECT_TRUE(L * R == R * L);
        }
    const auto M = regular_rep(idempotents(p)[0][1], Side::Left);
    CyclotomicNumber tr;
    for (std::size_t i = 0; i < M.rows(); ++i) tr += M(i, i);
    EXPECT_TRUE(tr == CyclotomicNumber(4L));
}

TEST(Dihedral, BuildCpEntries) {
    for (int p : {5, 7}) {
        const auto C = build_cp(p);
        const auto& A = cp_answers();
        EXPECT_TRUE(C.get("0", "0", A[cp_answer_index(0, 0)], A[cp_answer_index(0, 0)]) == q(1, p));
        EXPECT_TRUE(C.get("0", "0", A[cp_answer_index(1, 0)], A[cp_answer_index(1, 0)]) == q(2, p));
        const double cos2 = std::pow(std::cos(std::acos(-1.0) / (2 * p)), 2) / p;
        EXPECT_NEAR(to_float(C.get("t1", "1", A[0], A[0])).real(), cos2, 1e-14);
        EXPECT_TRUE(validate(C).ok);
        EXPECT_TRUE(is_nonsignalling(C).ok);
        EXPECT_TRUE(is_synchronous(C));
    }
    EXPECT_THROW(build_cp(3), std::invalid_argument);
}

TEST(Dihedral, CanonicalStrategy) {
    const int p = 5;
    const auto S = canonical_strategy(p);
    EXPECT_NO_THROW(check_strategy(S));
    const auto e = DihedralAlgebraElement::basis(dihedral_identity(), p);
    const auto t1 = DihedralAlgebraElement::basis(dihedral_t1(p), p);
    const auto want = regular_rep(q(1, 2) * (e + t1), Side::Left);
    const std::size_t x = label_index(S.scenario.X, "t1");
    EXPECT_TRUE(full_alice(S, x, cp_answer_index(0, 0)) == want);
    EXPECT_TRUE(is_synchronous(correlation_from_strategy(S)));
}

TEST(Dihedral, CpPrime) {
    for (int p : {5, 7}) {
        const auto built = build_cp_prime_with_norm(p);
        EXPECT_TRUE(built.norm_squared == q(p - 1, p));
        EXPECT_TRUE(validate(built.correlation).ok);
        const auto ex = extract_cp_prime_strategy(canonical_strategy(p));
        EXPECT_TRUE(ex.norm_squared == q(p - 1, p));
        // P_0^(2) vanishes
        const std::size_t x0 = label_index(ex.strategy.scenario.X, ex.strategy.scenario.X.front());
        EXPECT_TRUE(detail::near_zero(ex.strategy.alice[x0].back(), 1e-12));
    }
}

TEST(Dihedral, AutomorphismUnitary) {
    const int p = 5;
    const auto U = automorphism_unitary(p, 2, Side::Left);
    EXPECT_TRUE(U(dihedral_index({0, 2}, p), dihedral_index({0, 1}, p)) == CyclotomicNumber(1L));
    for (std::size_t i = 0; i < U.rows(); ++i) {
        int row = 0, col = 0;
        for (std::size_t j = 0; j < U.cols(); ++j) {
            row += U(i, j) == CyclotomicNumber(1L);
            col += U(j, i) == CyclotomicNumber(1L);
        }
        EXPECT_EQ(row, 1);
        EXPECT_EQ(col, 1);
    }
    EXPECT_THROW(automorphism_unitary(7, 2, Side::Left), NotPrimitiveRoot);
}

TEST(Dihedral, VerifyFcpOnLift) {
    const int p = 5;
    const auto lift = holomorph_lift(p, 2);
    EXPECT_TRUE(correlation_from_strategy(lift.strategy) == build_cp(p));
    const auto rep = verify_fcp(to_float(lift.strategy), to_float(lift.U_A), to_float(lift.U_B), 2, p);
    for (double d : rep.hypotheses) EXPECT_LT(d, 1e-10);
    EXPECT_LT(rep.conclusion, 1e-10);
    EXPECT_NEAR(rep.psi_norms_squared[1], 1.0 / p, 1e-10);
    EXPECT_NEAR(rep.psi1_overlap, 1.0 / p, 1e-10);
    EXPECT_LT(rep.eigen_defects[1], 1e-9);
    // conclusion alone on the canonical strategy
    const auto bare = verify_fcp(to_float(canonical_strategy(p)), to_float(automorphism_unitary(p, 2, Side::Left)),
                                 to_float(automorphism_unitary(p, 2, Side::Right)), 2, p);
    EXPECT_LT(bare.conclusion, 1e-12);
}
