#pragma once
// Question-answer pairs mapped to projections in the group algebra of the
// Coxeter group G_n, the support set W_n, {0,1}-valued trace functions on it,
// the correlations C_f, and filtering by perfect restrictions.

#include <algorithm>
#include <array>
#include <set>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qcorr/correlations.hpp"
#include "qcorr/coxeter.hpp"
#include "qcorr/cyclotomic.hpp"
#include "qcorr/dihedral.hpp"
#include "qcorr/presentations.hpp"

namespace qcorr {

struct ConstraintViolation : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

class FnContext {
public:
    FnContext(BinaryLinearSystem A, int x0, int t1, int t2, int p, std::size_t node_cap = 1u << 20,
              std::optional<int> u1 = std::nullopt, std::optional<int> u2 = std::nullopt)
        : A_(std::move(A)), x0_(x0), t1_(t1), t2_(t2), p_(p), u1_(u1), u2_(u2),
          cox_(CoxeterContext::from_system(A_, t1, t2, p, node_cap)) {
        if (A_.kappa() != 3) throw std::invalid_argument("every row must have exactly three entries");
        require_odd_prime(p, "FnContext");
        for (int v : {x0, t1, t2})
            if (v < 0 || v >= A_.n()) throw std::out_of_range("designated index out of range");
        if (x0 == t1 || x0 == t2 || t1 == t2) throw std::invalid_argument("x0, t1, t2 must be distinct");
        if (A_.in_common_row(t1, t2)) throw std::invalid_argument("t1 and t2 must not share a row");
        pi_ = idempotents(p);
    }

    const BinaryLinearSystem& system() const { return A_; }
    int x0() const { return x0_; }
    int t1() const { return t1_; }
    int t2() const { return t2_; }
    int p() const { return p_; }
    std::optional<int> u1() const { return u1_; }
    std::optional<int> u2() const { return u2_; }
    const CoxeterContext& coxeter() const { return cox_; }
    const IdempotentTable& pi() const { return pi_; }

    // x<j> for variables, r<i> for rows, then the five dihedral questions
    std::vector<std::string> questions() const {
        std::vector<std::string> q;
        for (int j = 0; j < A_.n(); ++j) q.push_back(var_label(j));
        for (int i = 0; i < A_.m(); ++i) q.push_back(row_label(i));
        for (const char* s : {"m", "m+1", "m+2", "(m,t1)", "(m,t2)"}) q.push_back(s);
        return q;
    }
    std::size_t question_count() const { return static_cast<std::size_t>(A_.n() + A_.m() + 5); }
    Scenario scenario() const {
        auto q = questions();
        auto a = bit_labels(3);
        return {q, q, a, a};
    }

private:
    BinaryLinearSystem A_;
    int x0_, t1_, t2_, p_;
    std::optional<int> u1_, u2_;
    CoxeterContext cox_;
    IdempotentTable pi_;
};

// Finite linear combination of normal words.
using GroupAlgebraElement = std::map<NormalWord, CyclotomicNumber>;

inline void ga_add(GroupAlgebraElement& z, const NormalWord& w, const CyclotomicNumber& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = z.emplace(w, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) z.erase(it);
    }
}

inline GroupAlgebraElement ga_mul(const CoxeterContext& ctx, const GroupAlgebraElement& a, const GroupAlgebraElement& b) {
    GroupAlgebraElement r;
    for (const auto& [u, c] : a)
        for (const auto& [v, d] : b) ga_add(r, normal_form(ctx, cox_concat(u, v)), c * d);
    return r;
}

// t2^s (t1 t2)^j as a word in G_n
inline NormalWord embed_dihedral(const FnContext& ctx, const DihedralElement& g) {
    CoxWord w;
    if (g.s) w.push_back(ctx.t2());
    for (int k = 0; k < g.j; ++k) {
        w.push_back(ctx.t1());
        w.push_back(ctx.t2());
    }
    return normal_form(ctx.coxeter(), w);
}

inline GroupAlgebraElement embed_dihedral(const FnContext& ctx, const DihedralAlgebraElement& x) {
    GroupAlgebraElement r;
    for (const auto& [g, c] : x.support()) ga_add(r, embed_dihedral(ctx, g), c);
    return r;
}

// (e + (-1)^s x_g) / 2
inline GroupAlgebraElement half_projection(int g, int s) {
    const CyclotomicNumber h(Rational(1, 2));
    GroupAlgebraElement r;
    ga_add(r, {}, h);
    ga_add(r, {g}, s ? -h : h);
    return r;
}

// Answer a encodes bits (a0, a1, a2) with a0 the high bit; #(a0,a1) = a >> 1.
inline GroupAlgebraElement sigma(const FnContext& ctx, std::size_t q, unsigned a) {
    const auto& A = ctx.system();
    const std::size_t n = A.n(), m = A.m();
    if (a >= 8) throw std::out_of_range("answer out of range");
    if (q >= ctx.question_count()) throw std::out_of_range("question out of range");
    const unsigned hash = a >> 1, a2 = a & 1u;
    if (q < n) {
        if (hash != 0) return {};
        return half_projection(static_cast<int>(q), static_cast<int>(a2));
    }
    if (q < n + m) {
        const int i = static_cast<int>(q - n);
        GroupAlgebraElement r;
        ga_add(r, {}, CyclotomicNumber(1L));
        for (int k = 0; k < 3; ++k) r = ga_mul(ctx.coxeter(), r, half_projection(A.row(i)[k], (a >> (2 - k)) & 1u));
        return r;
    }
    const std::size_t s = q - n - m;
    if (hash > 2) return {};
    if (s < 3) {
        if (a2 != 0) return {};
        return embed_dihedral(ctx, ctx.pi()[s][hash]);
    }
    const int t = s == 3 ? ctx.t1() : ctx.t2();
    return ga_mul(ctx.coxeter(), embed_dihedral(ctx, ctx.pi()[0][hash]), half_projection(t, static_cast<int>(a2)));
}

// W_n and the sparse expansion of every product sigma(x,a) sigma(y,b) over it.
struct WnData {
    std::vector<NormalWord> words;  // length-lex order
    std::map<NormalWord, std::size_t> index;
    std::size_t questions = 0;
    // products[((x * Q + y) * 8 + a) * 8 + b] = (word index, coefficient) list
    std::vector<std::vector<std::pair<std::size_t, CyclotomicNumber>>> products;

    const std::vector<std::pair<std::size_t, CyclotomicNumber>>& product(std::size_t x, std::size_t y, unsigned a,
                                                                         unsigned b) const {
        return products[((x * questions + y) * 8 + a) * 8 + b];
    }
};

inline WnData compute_Wn(const FnContext& ctx) {
    const std::size_t Q = ctx.question_count();
    std::vector<std::vector<GroupAlgebraElement>> sig(Q, std::vector<GroupAlgebraElement>(8));
    for (std::size_t q = 0; q < Q; ++q)
        for (unsigned a = 0; a < 8; ++a) sig[q][a] = sigma(ctx, q, a);
    std::vector<GroupAlgebraElement> prods(Q * Q * 64);
    std::set<NormalWord, decltype(&length_lex_less)> support(&length_lex_less);
    for (std::size_t x = 0; x < Q; ++x)
        for (std::size_t y = 0; y < Q; ++y)
            for (unsigned a = 0; a < 8; ++a)
                for (unsigned b = 0; b < 8; ++b) {
                    if (sig[x][a].empty() || sig[y][b].empty()) continue;
                    auto& z = prods[((x * Q + y) * 8 + a) * 8 + b];
                    z = ga_mul(ctx.coxeter(), sig[x][a], sig[y][b]);
                    for (const auto& [w, c] : z) support.insert(w);
                }
    WnData d;
    d.questions = Q;
    d.words.assign(support.begin(), support.end());
    for (std::size_t i = 0; i < d.words.size(); ++i) d.index.emplace(d.words[i], i);
    d.products.resize(prods.size());
    for (std::size_t k = 0; k < prods.size(); ++k)
        for (const auto& [w, c] : prods[k]) d.products[k].emplace_back(d.index.at(w), c);
    return d;
}

struct TraceConstraints {
    std::vector<std::size_t> forced1, forced0, free;
};

inline TraceConstraints trace_constraints(const FnContext& ctx, const WnData& wn) {
    TraceConstraints t;
    const NormalWord x0{ctx.x0()};
    for (std::size_t i = 0; i < wn.words.size(); ++i) {
        const auto& w = wn.words[i];
        if (w.empty()) t.forced1.push_back(i);
        else if (w == x0 || in_braid_subgroup(ctx.coxeter(), w)) t.forced0.push_back(i);
        else t.free.push_back(i);
    }
    return t;
}

// Values on W_n, aligned with WnData::words.
struct TraceFunction {
    std::vector<std::uint8_t> values;
};

inline void check_trace_function(const FnContext& ctx, const WnData& wn, const TraceFunction& f) {
    if (f.values.size() != wn.words.size()) throw ConstraintViolation("trace function must cover W_n");
    const auto t = trace_constraints(ctx, wn);
    for (auto i : t.forced1)
        if (f.values[i] != 1) throw ConstraintViolation("f(e) must be 1");
    for (auto i : t.forced0)
        if (f.values[i] != 0) throw ConstraintViolation("f must vanish on x0 and on <t1,t2> minus e");
    for (auto v : f.values)
        if (v > 1) throw ConstraintViolation("f takes values in {0,1}");
}

inline ExactCorrelation correlation_from_f(const FnContext& ctx, const WnData& wn, const TraceFunction& f) {
    check_trace_function(ctx, wn, f);
    ExactCorrelation c(ctx.scenario());
    const std::size_t Q = wn.questions;
    for (std::size_t x = 0; x < Q; ++x)
        for (std::size_t y = 0; y < Q; ++y)
            for (unsigned a = 0; a < 8; ++a)
                for (unsigned b = 0; b < 8; ++b) {
                    CyclotomicNumber s;
                    for (const auto& [i, coef] : wn.product(x, y, a, b))
                        if (f.values[i]) s += coef;
                    c.at(x, y, a, b) = s;
                }
    return c;
}

inline std::vector<std::string> perfect_questions(const FnContext& ctx) {
    std::vector<std::string> q;
    for (int j = 0; j < ctx.system().n(); ++j) q.push_back(var_label(j));
    for (int i = 0; i < ctx.system().m(); ++i) q.push_back(row_label(i));
    return q;
}

// Perfect-correlation report of C_f restricted to variables and rows.
inline PerfectReport fn_perfect_report(const FnContext& ctx, const WnData& wn, const TraceFunction& f) {
    const auto q = perfect_questions(ctx);
    return check_perfect(correlation_from_f(ctx, wn, f).restrict_to(q, q), ctx.system());
}

inline bool is_in_Fn(const FnContext& ctx, const WnData& wn, const TraceFunction& f) {
    return fn_perfect_report(ctx, wn, f).pass();
}

// Pairs (question of C_f, question of the dihedral correlation) for the
// sub-correlation identity; answers below 6 carry the same index in both.
inline std::vector<std::pair<std::string, std::string>> fn_alpha_map(const FnContext& ctx) {
    return {{var_label(ctx.t1()), "t1"}, {var_label(ctx.t2()), "t2"}, {"m", "0"},        {"m+1", "1"},
            {"m+2", "2"},                {"(m,t1)", "(0,t1)"},       {"(m,t2)", "(0,t2)"}};
}

// Lazy enumeration of F_n. Candidate k sets the i-th free word to bit i of k.
// Free words that cannot influence the perfect restriction take the low bits,
// so membership depends only on k >> irrelevant_count() and a failing high
// part skips a whole block.
class FnEnumerator {
public:
    FnEnumerator(const FnContext& ctx, const WnData& wn) {
        const auto tc = trace_constraints(ctx, wn);
        base_.values.assign(wn.words.size(), 0);
        for (auto i : tc.forced1) base_.values[i] = 1;
        // Forbidden entries: every tuple check_perfect flags when nonzero.
        const auto q = perfect_questions(ctx);
        const Scenario sc{q, q, bit_labels(3), bit_labels(3)};
        ExactCorrelation ones(sc);
        for (std::size_t x = 0; x < q.size(); ++x)
            for (std::size_t y = 0; y < q.size(); ++y)
                for (std::size_t a = 0; a < 8; ++a)
                    for (std::size_t b = 0; b < 8; ++b) ones.at(x, y, a, b) = CyclotomicNumber(1L);
        const auto rep = check_perfect(ones, ctx.system());
        std::set<std::array<std::size_t, 4>> forbidden;
        for (const auto& list : rep.violations)
            for (const auto& v : list)
                forbidden.insert({label_index(q, v.x), label_index(q, v.y), label_index(sc.A, v.a), label_index(sc.B, v.b)});
        std::vector<bool> relevant(wn.words.size(), false);
        std::vector<const std::vector<std::pair<std::size_t, CyclotomicNumber>>*> prods;
        BigInt den = 1;
        for (const auto& [x, y, a, b] : forbidden) {
            const auto& prod = wn.product(x, y, static_cast<unsigned>(a), static_cast<unsigned>(b));
            if (prod.empty()) continue;
            for (const auto& [i, c] : prod) {
                if (!c.is_rational()) throw std::logic_error("variable and row products must have rational coefficients");
                relevant[i] = true;
                den = lcm(den, c.rational_value().get_den());
            }
            prods.push_back(&prod);
        }
        for (auto i : tc.free)
            if (!relevant[i]) free_.push_back(i);
        irrelevant_bits_ = free_.size();
        for (auto i : tc.free)
            if (relevant[i]) free_.push_back(i);
        for (const auto* prod : prods) {
            std::vector<std::pair<std::size_t, long>> row;
            for (const auto& [i, c] : *prod) {
                const BigInt v = Rational(c.rational_value() * den).get_num();
                if (!v.fits_slong_p()) throw TooLarge("coefficient denominators too large");
                row.emplace_back(i, v.get_si());
            }
            int_forbidden_.push_back(std::move(row));
        }
    }

    std::size_t free_count() const { return free_.size(); }
    std::size_t irrelevant_count() const { return irrelevant_bits_; }
    std::size_t relevant_count() const { return free_.size() - irrelevant_bits_; }
    const std::vector<std::size_t>& free_order() const { return free_; }

    BigInt candidate_count() const {
        BigInt n = 1;
        mpz_mul_2exp(n.get_mpz_t(), n.get_mpz_t(), free_.size());
        return n;
    }

    TraceFunction candidate(const BigInt& k) const {
        TraceFunction f = base_;
        for (std::size_t bit = 0; bit < free_.size(); ++bit)
            if (mpz_tstbit(k.get_mpz_t(), bit)) f.values[free_[bit]] = 1;
        return f;
    }

    // Membership through the forbidden entries, cached per relevant part.
    bool member(const BigInt& k) {
        const BigInt high = high_part(k);
        if (auto it = memo_.find(high); it != memo_.end()) return it->second;
        BigInt lowest = high;
        mpz_mul_2exp(lowest.get_mpz_t(), lowest.get_mpz_t(), irrelevant_bits_);
        const TraceFunction f = candidate(lowest);
        bool ok = true;
        for (const auto& row : int_forbidden_) {
            long s = 0;
            for (const auto& [i, c] : row)
                if (f.values[i]) s += c;
            if (s != 0) {
                ok = false;
                break;
            }
        }
        if (memo_.size() < (1u << 22)) memo_.emplace(high, ok);
        return ok;
    }

    // Calls visit(k, f) for members k >= start in increasing order, at most
    // `limit` times. Returns the cursor after the last visited member, or
    // nullopt once the candidates are exhausted.
    std::optional<BigInt> enumerate(BigInt start, std::size_t limit,
                                    const std::function<void(const BigInt&, const TraceFunction&)>& visit) {
        if (start < 0) throw std::invalid_argument("cursor must be nonnegative");
        if (limit == 0) return start;
        std::size_t yielded = 0;
        const BigInt end = candidate_count();
        for (BigInt k = start; k < end;) {
            if (!member(k)) {
                k = high_part(k) + 1;
                mpz_mul_2exp(k.get_mpz_t(), k.get_mpz_t(), irrelevant_bits_);
                continue;
            }
            visit(k, candidate(k));
            if (++yielded == limit) return BigInt(k + 1);
            ++k;
        }
        return std::nullopt;
    }

private:
    TraceFunction base_;
    std::vector<std::size_t> free_;
    std::size_t irrelevant_bits_ = 0;
    std::vector<std::vector<std::pair<std::size_t, long>>> int_forbidden_;
    std::map<BigInt, bool> memo_;

    BigInt high_part(const BigInt& k) const {
        BigInt h;
        mpz_fdiv_q_2exp(h.get_mpz_t(), k.get_mpz_t(), irrelevant_bits_);
        return h;
    }
};

// f(g) = 1 exactly when the image of g is the identity.
inline TraceFunction f_from_finite_image(const FnContext& ctx, const WnData& wn, const std::vector<FloatMatrix>& images,
                                         double tol = kDefaultTolerance) {
    const auto& cox = ctx.coxeter();
    if (static_cast<int>(images.size()) != cox.generators()) throw std::invalid_argument("one image per generator");
    const std::size_t d = images.front().rows();
    const FloatMatrix I = FloatMatrix::identity(d);
    auto is_id = [&](const FloatMatrix& m) { return max_abs_diff(m, I) <= tol; };
    for (const auto& g : images)
        if (g.rows() != d || g.cols() != d || !is_id(g * g)) throw RelatorViolation("generator image is not an involution");
    for (const auto& [a, b] : cox.commuting_pairs())
        if (max_abs_diff(images[a] * images[b], images[b] * images[a]) > tol)
            throw RelatorViolation("commuting generators have non-commuting images");
    FloatMatrix braid = I;
    const FloatMatrix t = images[ctx.t1()] * images[ctx.t2()];
    for (int k = 0; k < ctx.p(); ++k) braid = braid * t;
    if (!is_id(braid)) throw RelatorViolation("(t1 t2)^p does not map to the identity");
    TraceFunction f;
    for (const auto& w : wn.words) {
        FloatMatrix m = I;
        for (int g : w) m = m * images[g];
        f.values.push_back(is_id(m) ? 1 : 0);
    }
    check_trace_function(ctx, wn, f);
    return f;
}

// ---- JSON ----

inline FnContext fn_context_from_json(const nlohmann::json& j, std::size_t node_cap = 1u << 20) {
    std::optional<int> u1, u2;
    if (j.contains("u1")) u1 = j.at("u1").get<int>();
    if (j.contains("u2")) u2 = j.at("u2").get<int>();
    return FnContext(linsys_from_json(j), j.at("x0").get<int>(), j.at("t1").get<int>(), j.at("t2").get<int>(),
                     j.at("p").get<int>(), node_cap, u1, u2);
}

inline nlohmann::json fn_context_to_json(const FnContext& ctx) {
    nlohmann::json j = linsys_to_json(ctx.system());
    j["x0"] = ctx.x0();
    j["t1"] = ctx.t1();
    j["t2"] = ctx.t2();
    j["p"] = ctx.p();
    if (ctx.u1()) j["u1"] = *ctx.u1();
    if (ctx.u2()) j["u2"] = *ctx.u2();
    return j;
}

inline nlohmann::json trace_function_to_json(const WnData& wn, const TraceFunction& f) {
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t i = 0; i < wn.words.size(); ++i) arr.push_back({wn.words[i], f.values.at(i)});
    return {{"version", kVersion}, {"values", arr}};
}

inline TraceFunction trace_function_from_json(const FnContext& ctx, const WnData& wn, const nlohmann::json& j) {
    TraceFunction f;
    f.values.assign(wn.words.size(), 0);
    std::vector<bool> seen(wn.words.size(), false);
    for (const auto& e : j.at("values")) {
        const NormalWord w = normal_form(ctx.coxeter(), e.at(0).get<CoxWord>());
        auto it = wn.index.find(w);
        if (it == wn.index.end()) throw ConstraintViolation("word outside W_n");
        f.values[it->second] = static_cast<std::uint8_t>(e.at(1).get<int>());
        seen[it->second] = true;
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) throw ConstraintViolation("trace function must cover W_n");
    check_trace_function(ctx, wn, f);
    return f;
}

}  // namespace qcorr
