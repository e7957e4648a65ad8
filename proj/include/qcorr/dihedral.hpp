#pragma once
// The dihedral group D_p, its group algebra, the nine idempotents, the
// correlations built from the regular representations, and the checks that
// analyse strategies for them.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qcorr/correlations.hpp"
#include "qcorr/cyclotomic.hpp"
#include "qcorr/linalg.hpp"

namespace qcorr {

struct NotPrimitiveRoot : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// t2^s (t1 t2)^j
struct DihedralElement {
    int s = 0;
    int j = 0;
    friend bool operator==(const DihedralElement&, const DihedralElement&) = default;
    friend auto operator<=>(const DihedralElement&, const DihedralElement&) = default;
};

inline DihedralElement dihedral_identity() { return {0, 0}; }
inline DihedralElement dihedral_t1(int p) { return {1, p - 1}; }
inline DihedralElement dihedral_t2() { return {1, 0}; }
inline DihedralElement dihedral_rotation(int j, int p) { return {0, static_cast<int>(mod_floor(j, p))}; }

// (t1 t2)^j t2 = t2 (t1 t2)^-j
inline DihedralElement dihedral_mul(const DihedralElement& a, const DihedralElement& b, int p) {
    const int j = b.s ? -a.j + b.j : a.j + b.j;
    return {a.s ^ b.s, static_cast<int>(mod_floor(j, p))};
}

inline DihedralElement dihedral_inverse(const DihedralElement& a, int p) {
    return a.s ? a : DihedralElement{0, static_cast<int>(mod_floor(-a.j, p))};
}

inline std::size_t dihedral_index(const DihedralElement& g, int p) { return static_cast<std::size_t>(g.s * p + g.j); }
inline DihedralElement dihedral_from_index(std::size_t i, int p) {
    return {static_cast<int>(i) / p, static_cast<int>(i) % p};
}

inline std::string dihedral_to_string(const DihedralElement& g) {
    std::string r = g.s ? "t2" : "";
    if (g.j) r += std::string(g.s ? " " : "") + "(t1t2)^" + std::to_string(g.j);
    return r.empty() ? "e" : r;
}

class DihedralAlgebraElement {
public:
    explicit DihedralAlgebraElement(int p = 3) : p_(p) {}
    static DihedralAlgebraElement basis(const DihedralElement& g, int p, const CyclotomicNumber& c = CyclotomicNumber(1L)) {
        DihedralAlgebraElement r(p);
        r.add(g, c);
        return r;
    }

    int p() const { return p_; }
    const std::map<DihedralElement, CyclotomicNumber>& support() const { return support_; }

    CyclotomicNumber coefficient(const DihedralElement& g) const {
        auto it = support_.find(g);
        return it == support_.end() ? CyclotomicNumber() : it->second;
    }

    void add(const DihedralElement& g, const CyclotomicNumber& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = support_.emplace(g, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) support_.erase(it);
        }
    }

    friend DihedralAlgebraElement operator+(DihedralAlgebraElement a, const DihedralAlgebraElement& b) {
        a.check_same(b);
        for (const auto& [g, c] : b.support_) a.add(g, c);
        return a;
    }
    friend DihedralAlgebraElement operator-(DihedralAlgebraElement a, const DihedralAlgebraElement& b) {
        a.check_same(b);
        for (const auto& [g, c] : b.support_) a.add(g, -c);
        return a;
    }
    friend DihedralAlgebraElement operator*(const CyclotomicNumber& s, const DihedralAlgebraElement& a) {
        DihedralAlgebraElement r(a.p_);
        for (const auto& [g, c] : a.support_) r.add(g, s * c);
        return r;
    }
    friend DihedralAlgebraElement operator*(const DihedralAlgebraElement& a, const DihedralAlgebraElement& b) {
        a.check_same(b);
        DihedralAlgebraElement r(a.p_);
        for (const auto& [g, c] : a.support_)
            for (const auto& [h, d] : b.support_) r.add(dihedral_mul(g, h, a.p_), c * d);
        return r;
    }
    friend bool operator==(const DihedralAlgebraElement& a, const DihedralAlgebraElement& b) {
        return a.p_ == b.p_ && a.support_ == b.support_;
    }

    // g -> g^-1, coefficients unchanged
    DihedralAlgebraElement iota() const {
        DihedralAlgebraElement r(p_);
        for (const auto& [g, c] : support_) r.add(dihedral_inverse(g, p_), c);
        return r;
    }

    // g -> g^-1, coefficients conjugated
    DihedralAlgebraElement star() const {
        DihedralAlgebraElement r(p_);
        for (const auto& [g, c] : support_) r.add(dihedral_inverse(g, p_), c.conjugate());
        return r;
    }

    bool is_zero() const { return support_.empty(); }

private:
    int p_;
    std::map<DihedralElement, CyclotomicNumber> support_;

    void check_same(const DihedralAlgebraElement& b) const {
        if (p_ != b.p_) throw std::invalid_argument("group algebra elements over different D_p");
    }
};

// pi[i][a] for i, a in [3]
using IdempotentTable = std::array<std::array<DihedralAlgebraElement, 3>, 3>;

inline IdempotentTable idempotents(int p) {
    require_odd_prime(p, "idempotents");
    const Rational inv_p(1, p);
    const auto e = DihedralAlgebraElement::basis(dihedral_identity(), p);
    IdempotentTable pi;
    for (auto& row : pi) row.fill(DihedralAlgebraElement(p));
    DihedralAlgebraElement refl_cos(p), refl_sin(p);
    for (int j = 0; j < p; ++j) {
        pi[0][0].add({0, j}, CyclotomicNumber(inv_p));
        pi[0][1].add({0, j}, cos_2pi(j, p) * CyclotomicNumber(Rational(2, p)));
        refl_cos.add({1, j}, cos_2pi(2 * j + 1, 2 * p) * CyclotomicNumber(inv_p));
        refl_sin.add({1, j}, sin_2pi(2 * j + 1, 2 * p) * CyclotomicNumber(inv_p));
    }
    const CyclotomicNumber half(Rational(1, 2));
    pi[0][2] = e - pi[0][0] - pi[0][1];
    pi[1][0] = half * pi[0][1] + refl_cos;
    pi[1][1] = pi[0][1] - pi[1][0];
    pi[1][2] = e - pi[0][1];
    pi[2][0] = half * pi[0][1] + refl_sin;
    pi[2][1] = pi[0][1] - pi[2][0];
    pi[2][2] = e - pi[0][1];
    return pi;
}

enum class Side { Left, Right };

// L(x)|h> = |g h>, R(x)|h> = |h g^-1>, basis index s*p + j.
inline ExactMatrix regular_rep(const DihedralAlgebraElement& x, Side side) {
    const int p = x.p();
    const std::size_t n = 2 * static_cast<std::size_t>(p);
    ExactMatrix m(n, n);
    for (std::size_t col = 0; col < n; ++col) {
        const DihedralElement h = dihedral_from_index(col, p);
        for (const auto& [g, c] : x.support()) {
            const DihedralElement img =
                side == Side::Left ? dihedral_mul(g, h, p) : dihedral_mul(h, dihedral_inverse(g, p), p);
            m(dihedral_index(img, p), col) += c;
        }
    }
    return m;
}

// ---- the correlation on questions I with answers [3] x [2] ----

inline const std::vector<std::string>& cp_questions() {
    static const std::vector<std::string> q{"0", "1", "2", "t1", "t2", "(0,t1)", "(0,t2)"};
    return q;
}

// Answer (a0, a1) has index 2*a0 + a1 and label "a0a1".
inline const std::vector<std::string>& cp_answers() {
    static const std::vector<std::string> a{"00", "01", "10", "11", "20", "21"};
    return a;
}

inline constexpr std::size_t cp_answer_index(int a0, int a1) { return static_cast<std::size_t>(2 * a0 + a1); }

inline Scenario cp_scenario() { return {cp_questions(), cp_questions(), cp_answers(), cp_answers()}; }

// Group algebra element behind the measurement operator for question q and
// answer (a0, a1); the same element serves Alice (via L) and Bob (via R).
inline std::vector<std::vector<DihedralAlgebraElement>> cp_elements(int p) {
    const IdempotentTable pi = idempotents(p);
    const CyclotomicNumber half(Rational(1, 2));
    const auto e = DihedralAlgebraElement::basis(dihedral_identity(), p);
    const std::array<DihedralAlgebraElement, 2> t{DihedralAlgebraElement::basis(dihedral_t1(p), p),
                                                   DihedralAlgebraElement::basis(dihedral_t2(), p)};
    auto t_proj = [&](int which, int a1) { return half * (a1 == 0 ? e + t[which] : e - t[which]); };
    std::vector<std::vector<DihedralAlgebraElement>> out(7, std::vector<DihedralAlgebraElement>(6, DihedralAlgebraElement(p)));
    for (int a0 = 0; a0 < 3; ++a0)
        for (int a1 = 0; a1 < 2; ++a1) {
            const std::size_t a = cp_answer_index(a0, a1);
            for (int x = 0; x < 3; ++x)
                if (a1 == 0) out[x][a] = pi[x][a0];
            for (int w = 0; w < 2; ++w) {
                if (a0 == 0) out[3 + w][a] = t_proj(w, a1);
                out[5 + w][a] = pi[0][a0] * t_proj(w, a1);
            }
        }
    return out;
}

// <e| L(alpha) R(beta) |e> = sum_g alpha_g beta_g
inline CyclotomicNumber regular_pairing(const DihedralAlgebraElement& alpha, const DihedralAlgebraElement& beta) {
    CyclotomicNumber s;
    for (const auto& [g, c] : alpha.support()) {
        const auto d = beta.coefficient(g);
        if (!d.is_zero()) s += c * d;
    }
    return s;
}

inline ExactCorrelation build_cp(int p) {
    require_odd_prime(p, "build_cp");
    if (p < 5) throw std::invalid_argument("build_cp: p must be >= 5");
    const auto el = cp_elements(p);
    ExactCorrelation c(cp_scenario());
    for (std::size_t x = 0; x < 7; ++x)
        for (std::size_t y = 0; y < 7; ++y)
            for (std::size_t a = 0; a < 6; ++a)
                for (std::size_t b = 0; b < 6; ++b) c.at(x, y, a, b) = regular_pairing(el[x][a], el[y][b]);
    return c;
}

inline ExactStrategy canonical_strategy(int p) {
    require_odd_prime(p, "canonical_strategy");
    if (p < 5) throw std::invalid_argument("canonical_strategy: p must be >= 5");
    const auto el = cp_elements(p);
    ExactStrategy s;
    s.mode = StrategyMode::Commuting;
    s.dim_a = s.dim_b = 2 * static_cast<std::size_t>(p);
    s.state.assign(s.dim_a, CyclotomicNumber());
    s.state[0] = CyclotomicNumber(1L);
    s.scenario = cp_scenario();
    for (std::size_t x = 0; x < 7; ++x) {
        s.alice.emplace_back();
        s.bob.emplace_back();
        for (std::size_t a = 0; a < 6; ++a) {
            s.alice.back().push_back(regular_rep(el[x][a], Side::Left));
            s.bob.back().push_back(regular_rep(el[x][a], Side::Right));
        }
    }
    return s;
}

// ---- the five-question correlation ----

inline Scenario cp_prime_scenario() {
    std::vector<std::string> q{"0", "1", "2", "3", "4"}, a{"0", "1", "2"};
    return {q, q, a, a};
}

inline std::vector<std::vector<DihedralAlgebraElement>> cp_prime_elements(int p) {
    const IdempotentTable pi = idempotents(p);
    const CyclotomicNumber half(Rational(1, 2));
    const auto e = DihedralAlgebraElement::basis(dihedral_identity(), p);
    const std::array<DihedralAlgebraElement, 2> t{DihedralAlgebraElement::basis(dihedral_t1(p), p),
                                                   DihedralAlgebraElement::basis(dihedral_t2(), p)};
    std::vector<std::vector<DihedralAlgebraElement>> out(5, std::vector<DihedralAlgebraElement>(3, DihedralAlgebraElement(p)));
    for (int a = 0; a < 2; ++a) {
        out[0][a] = pi[0][a + 1];
        for (int w = 0; w < 2; ++w) out[1 + w][a] = half * (a == 0 ? e + t[w] : e - t[w]);
    }
    for (int a = 0; a < 3; ++a) {
        out[3][a] = pi[1][a];
        out[4][a] = pi[2][a];
    }
    return out;
}

struct CpPrime {
    ExactCorrelation correlation;
    CyclotomicNumber norm_squared;  // |L(e - pi_0^(0)) e|^2
};

inline CpPrime build_cp_prime_with_norm(int p) {
    require_odd_prime(p, "build_cp_prime");
    if (p < 5) throw std::invalid_argument("build_cp_prime: p must be >= 5");
    const auto el = cp_prime_elements(p);
    const auto v = DihedralAlgebraElement::basis(dihedral_identity(), p) - idempotents(p)[0][0];
    const CyclotomicNumber nrm = regular_pairing(v.star().iota(), v);  // sum_g conj(v_g) v_g
    // <v| L(alpha) R(beta) |v> = <alpha* v, v iota(beta)>
    std::vector<std::vector<DihedralAlgebraElement>> left(5), right(5);
    for (int x = 0; x < 5; ++x)
        for (int a = 0; a < 3; ++a) {
            left[x].push_back(el[x][a].star() * v);
            right[x].push_back(v * el[x][a].iota());
        }
    auto inner_alg = [](const DihedralAlgebraElement& u, const DihedralAlgebraElement& w) {
        CyclotomicNumber s;
        for (const auto& [g, c] : u.support()) {
            const auto d = w.coefficient(g);
            if (!d.is_zero()) s += c.conjugate() * d;
        }
        return s;
    };
    CpPrime out{ExactCorrelation(cp_prime_scenario()), nrm};
    const Rational inv = 1 / nrm.rational_value();
    for (std::size_t x = 0; x < 5; ++x)
        for (std::size_t y = 0; y < 5; ++y)
            for (std::size_t a = 0; a < 3; ++a)
                for (std::size_t b = 0; b < 3; ++b)
                    out.correlation.at(x, y, a, b) = inner_alg(left[x][a], right[y][b]) * CyclotomicNumber(inv);
    return out;
}

inline ExactCorrelation build_cp_prime(int p) { return build_cp_prime_with_norm(p).correlation; }

// ---- strategy extraction ----

template <class T>
struct CpPrimeExtraction {
    FloatStrategy strategy;
    T norm_squared;  // |(1 - M_0^(0,0)) psi|^2
};

// The extracted measurement for question 0 omits M_0^(0,0), which kills the
// new state; the result is therefore evaluated without completeness checks.
template <class T>
CpPrimeExtraction<T> extract_cp_prime_strategy(const Strategy<T>& S, double tol = kDefaultTolerance) {
    if (!is_good(S, tol)) throw NotGoodStrategy("extract_cp_prime_strategy needs a good strategy");
    auto qa = [&](const std::string& l) { return label_index(S.scenario.X, l); };
    auto qb = [&](const std::string& l) { return label_index(S.scenario.Y, l); };
    auto aa = [&](const std::string& l) { return label_index(S.scenario.A, l); };
    auto ab = [&](const std::string& l) { return label_index(S.scenario.B, l); };

    const auto m00 = detail::apply_alice(S, S.alice.at(qa("0")).at(aa("00")));
    std::vector<T> v = S.state;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= m00[i];
    const T nrm = inner(S.state, v);

    FloatStrategy F;
    F.mode = S.mode;
    F.dim_a = S.dim_a;
    F.dim_b = S.dim_b;
    F.scenario = cp_prime_scenario();
    const double scale = 1.0 / std::sqrt(ScalarTraits<T>::to_complex(nrm).real());
    for (const auto& c : v) F.state.push_back(scale * ScalarTraits<T>::to_complex(c));

    auto build = [&](bool alice) {
        const auto& fam = alice ? S.alice : S.bob;
        auto q = [&](const std::string& l) { return alice ? qa(l) : qb(l); };
        auto a = [&](const std::string& l) { return alice ? aa(l) : ab(l); };
        auto op = [&](const std::string& ql, const std::string& al) { return to_float(fam.at(q(ql)).at(a(al))); };
        const std::size_t d = alice ? S.dim_a : S.dim_b;
        const FloatMatrix zero(d, d);
        std::vector<std::vector<FloatMatrix>> out(5);
        out[0] = {op("0", "10"), op("0", "20"), zero};
        out[1] = {op("t1", "00"), op("t1", "01"), zero};
        out[2] = {op("t2", "00"), op("t2", "01"), zero};
        out[3] = {op("1", "00"), op("1", "10"), op("1", "20")};
        out[4] = {op("2", "00"), op("2", "10"), op("2", "20")};
        return out;
    };
    F.alice = build(true);
    F.bob = build(false);
    return {F, nrm};
}

// ---- automorphisms and the holomorph lift ----

inline DihedralElement dihedral_automorphism(const DihedralElement& g, long long r, int p) {
    return {g.s, static_cast<int>(mod_floor(static_cast<long long>(g.j) * r, p))};
}

inline void require_primitive_root(long long r, int p) {
    if (r < 1 || r >= p || !is_primitive_root(r, p)) throw NotPrimitiveRoot(std::to_string(r) + " is not a primitive root of " + std::to_string(p));
}

// |h> -> |phi_r(h)> with phi_r(t1 t2) = (t1 t2)^r, phi_r(t2) = t2. The
// permutation is the same for both sides.
inline ExactMatrix automorphism_unitary(int p, long long r, Side /*side*/) {
    require_odd_prime(p, "automorphism_unitary");
    require_primitive_root(r, p);
    const std::size_t n = 2 * static_cast<std::size_t>(p);
    ExactMatrix u(n, n);
    for (std::size_t col = 0; col < n; ++col)
        u(dihedral_index(dihedral_automorphism(dihedral_from_index(col, p), r, p), p), col) = CyclotomicNumber(1L);
    return u;
}

// Canonical strategy moved to l^2(K), K = D_p x| <u> with u^-1 h u = phi_r(h)
// and u of order p - 1. Elements h u^k have index k * 2p + index(h).
struct HolomorphLift {
    ExactStrategy strategy;
    ExactMatrix U_A;  // L(u)
    ExactMatrix U_B;  // R(u)
};

inline HolomorphLift holomorph_lift(int p, long long r) {
    require_odd_prime(p, "holomorph_lift");
    if (p < 5) throw std::invalid_argument("holomorph_lift: p must be >= 5");
    require_primitive_root(r, p);
    const int order = p - 1;
    const std::size_t block = 2 * static_cast<std::size_t>(p), n = block * order;
    std::vector<long long> rpow(order);  // phi^-k acts on rotations by r^-k
    long long rinv = 1;
    for (long long c = 1; c < p; ++c)
        if (c * r % p == 1) rinv = c;
    rpow[0] = 1;
    for (int k = 1; k < order; ++k) rpow[k] = rpow[k - 1] * rinv % p;

    struct K {
        DihedralElement h;
        int k;
    };
    auto idx = [&](const K& g) { return static_cast<std::size_t>(g.k) * block + dihedral_index(g.h, p); };
    auto from = [&](std::size_t i) { return K{dihedral_from_index(i % block, p), static_cast<int>(i / block)}; };
    auto mul = [&](const K& a, const K& b) {
        const DihedralElement moved = dihedral_automorphism(b.h, rpow[a.k], p);
        return K{dihedral_mul(a.h, moved, p), (a.k + b.k) % order};
    };
    auto inv = [&](const K& a) {
        const int k = (order - a.k) % order;
        return K{dihedral_automorphism(dihedral_inverse(a.h, p), rpow[k], p), k};
    };
    auto lift_rep = [&](const std::map<DihedralElement, CyclotomicNumber>& supp, const std::vector<K>& extra, Side side) {
        ExactMatrix m(n, n);
        for (std::size_t col = 0; col < n; ++col) {
            const K x = from(col);
            auto put = [&](const K& g, const CyclotomicNumber& c) {
                const K img = side == Side::Left ? mul(g, x) : mul(x, inv(g));
                m(idx(img), col) += c;
            };
            for (const auto& [h, c] : supp) put(K{h, 0}, c);
            for (const auto& g : extra) put(g, CyclotomicNumber(1L));
        }
        return m;
    };

    const auto el = cp_elements(p);
    HolomorphLift out;
    auto& s = out.strategy;
    s.mode = StrategyMode::Commuting;
    s.dim_a = s.dim_b = n;
    s.state.assign(n, CyclotomicNumber());
    s.state[0] = CyclotomicNumber(1L);
    s.scenario = cp_scenario();
    for (std::size_t x = 0; x < 7; ++x) {
        s.alice.emplace_back();
        s.bob.emplace_back();
        for (std::size_t a = 0; a < 6; ++a) {
            s.alice.back().push_back(lift_rep(el[x][a].support(), {}, Side::Left));
            s.bob.back().push_back(lift_rep(el[x][a].support(), {}, Side::Right));
        }
    }
    const K u{dihedral_identity(), 1};
    out.U_A = lift_rep({}, {u}, Side::Left);
    out.U_B = lift_rep({}, {u}, Side::Right);
    return out;
}

// ---- psi vectors and the theorem check ----

inline long long discrete_log(long long j, long long r, int p) {
    long long x = 1;
    for (long long a = 0; a < p - 1; ++a) {
        if (x == mod_floor(j, p)) return a;
        x = x * r % p;
    }
    throw NotPrimitiveRoot("discrete log undefined");
}

namespace detail {

inline FloatMatrix fam_op(const FloatStrategy& s, bool alice, const std::string& q, const std::string& a) {
    return alice ? full_alice(s, label_index(s.scenario.X, q), label_index(s.scenario.A, a))
                 : full_bob(s, label_index(s.scenario.Y, q), label_index(s.scenario.B, a));
}

// M_t = M_t^(0,0) - M_t^(0,1)
inline FloatMatrix binary_t(const FloatStrategy& s, bool alice, const std::string& t) {
    return fam_op(s, alice, t, "00") - fam_op(s, alice, t, "01");
}

inline FloatMatrix mat_pow(const FloatMatrix& m, long long k) {
    FloatMatrix r = FloatMatrix::identity(m.rows());
    for (long long i = 0; i < k; ++i) r = r * m;
    return r;
}

}  // namespace detail

// psi_1 uses the sign pattern that makes it an omega_p eigenvector of
// M_t1 M_t2.
inline std::vector<std::vector<Complex>> psi_vectors(const FloatStrategy& S, const FloatMatrix& U_A, const FloatMatrix& U_B,
                                                     long long r, int p, double tol = kDefaultTolerance) {
    require_odd_prime(p, "psi_vectors");
    require_primitive_root(r, p);
    if (!is_good(S, tol)) throw NotGoodStrategy("psi_vectors needs a good strategy");
    using detail::fam_op;
    const auto& psi = S.state;
    const FloatMatrix M0 = fam_op(S, true, "0", "00");
    const auto m0psi = M0.apply(psi);
    std::vector<std::vector<Complex>> out(static_cast<std::size_t>(p) + 1);
    out[0] = fam_op(S, true, "t1", "00").apply(m0psi);
    out[p] = fam_op(S, true, "t1", "01").apply(m0psi);
    const FloatMatrix M1_0 = fam_op(S, true, "1", "00"), M1_1 = fam_op(S, true, "1", "10");
    const FloatMatrix M2 = fam_op(S, true, "2", "00") - fam_op(S, true, "2", "10");
    const Complex i(0, 1);
    const FloatMatrix X = Complex(0.5) * (M1_0 - i * (M2 * M1_1) + i * (M2 * M1_0) + M1_1);
    out[1] = X.apply(psi);
    const FloatMatrix UU = U_A * U_B;
    for (int j = 2; j < p; ++j) out[j] = detail::mat_pow(UU, discrete_log(j, r, p)).apply(out[1]);
    return out;
}

struct FcpReport {
    std::array<double, 6> hypotheses{};  // defects of the six hypothesis equations
    double conclusion = 0;               // |(M_t1 M_t2)^p psi - psi|
    bool hypotheses_pass = false;
    bool conclusion_checked = false;
    // psi machinery
    std::vector<double> psi_norms_squared;
    std::vector<double> eigen_defects;  // |M_t1 M_t2 psi_j - omega_p^j psi_j|
    double sum_defect = 0;              // |sum_j psi_j - psi|
    double max_overlap = 0;             // max |<psi_j, psi_k>|, j != k
    double psi1_overlap = 0;            // <psi, psi_1>
};

inline FcpReport verify_fcp(const FloatStrategy& S, const FloatMatrix& U_A, const FloatMatrix& U_B, long long r, int p,
                            double tol = 1e-9) {
    require_odd_prime(p, "verify_fcp");
    require_primitive_root(r, p);
    FcpReport rep;
    const auto& psi = S.state;
    const FloatMatrix Mt = detail::binary_t(S, true, "t1") * detail::binary_t(S, true, "t2");
    const FloatMatrix Nt = detail::binary_t(S, false, "t1") * detail::binary_t(S, false, "t2");
    const auto uab = (U_A * U_B).apply(psi);
    rep.hypotheses[0] = norm(uab - (U_B * U_A).apply(psi));
    for (std::size_t y = 0; y < S.bob.size(); ++y)
        for (std::size_t b = 0; b < S.bob[y].size(); ++b) {
            const FloatMatrix N = full_bob(S, y, b);
            rep.hypotheses[1] = std::max(rep.hypotheses[1], norm((U_A * N).apply(psi) - (N * U_A).apply(psi)));
        }
    for (std::size_t x = 0; x < S.alice.size(); ++x)
        for (std::size_t a = 0; a < S.alice[x].size(); ++a) {
            const FloatMatrix M = full_alice(S, x, a);
            rep.hypotheses[2] = std::max(rep.hypotheses[2], norm((U_B * M).apply(psi) - (M * U_B).apply(psi)));
        }
    rep.hypotheses[3] = norm(uab - psi);
    rep.hypotheses[4] = norm((Nt * U_B).apply(psi) - (U_B * detail::mat_pow(Nt, r)).apply(psi));
    rep.hypotheses[5] = norm((Mt * U_A).apply(psi) - (U_A * detail::mat_pow(Mt, r)).apply(psi));
    rep.hypotheses_pass = std::all_of(rep.hypotheses.begin(), rep.hypotheses.end(), [&](double d) { return d < tol; });
    rep.conclusion = norm(detail::mat_pow(Mt, p).apply(psi) - psi);
    rep.conclusion_checked = rep.hypotheses_pass;

    if (is_good(S, tol)) {
        const auto vs = psi_vectors(S, U_A, U_B, r, p, tol);
        std::vector<Complex> sum(psi.size());
        for (std::size_t j = 0; j < vs.size(); ++j) {
            rep.psi_norms_squared.push_back(inner(vs[j], vs[j]).real());
            const Complex w = std::polar(1.0, 2 * std::numbers::pi * static_cast<double>(j) / p);
            rep.eigen_defects.push_back(norm(Mt.apply(vs[j]) - w * vs[j]));
            sum = sum + vs[j];
            for (std::size_t k = j + 1; k < vs.size(); ++k) rep.max_overlap = std::max(rep.max_overlap, std::abs(inner(vs[j], vs[k])));
        }
        rep.sum_defect = norm(sum - psi);
        rep.psi1_overlap = inner(psi, vs[1]).real();
    }
    return rep;
}

inline nlohmann::json fcp_report_to_json(const FcpReport& r) {
    nlohmann::json h = nlohmann::json::array();
    for (double d : r.hypotheses) h.push_back(format_double(d));
    auto arr = [](const std::vector<double>& v) {
        nlohmann::json j = nlohmann::json::array();
        for (double d : v) j.push_back(format_double(d));
        return j;
    };
    return {{"version", kVersion},
            {"hypothesis_defects", h},
            {"hypotheses_pass", r.hypotheses_pass},
            {"conclusion_defect", format_double(r.conclusion)},
            {"conclusion_checked", r.conclusion_checked},
            {"psi_norms_squared", arr(r.psi_norms_squared)},
            {"eigen_defects", arr(r.eigen_defects)},
            {"sum_defect", format_double(r.sum_defect)},
            {"max_overlap", format_double(r.max_overlap)}};
}

}  // namespace qcorr
