#pragma once
// Word rewriting in the Coxeter group generated by involutions x_0..x_{l-1}
// where row-mates commute and (t1 t2)^p = e.

#include <algorithm>
#include <deque>
#include <memory>
#include <mutex>
#include <set>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qcorr/cyclotomic.hpp"
#include "qcorr/presentations.hpp"

namespace qcorr {

using CoxWord = std::vector<int>;
using NormalWord = CoxWord;

struct CoxWordHash {
    std::size_t operator()(const CoxWord& w) const noexcept {
        std::size_t h = 1469598103934665603ull;
        for (int x : w) {
            h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull;
            h *= 1099511628211ull;
        }
        return h ^ w.size();
    }
};

struct CoxeterCapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline bool length_lex_less(const CoxWord& a, const CoxWord& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

class CoxeterContext {
public:
    CoxeterContext(int ell, const std::set<std::pair<int, int>>& commuting, int t1, int t2, int p,
                   std::size_t node_cap = 1u << 20)
        : ell_(ell), t1_(t1), t2_(t2), p_(p), node_cap_(node_cap), commute_(ell * ell, false),
          cache_(std::make_shared<Cache>()) {
        if (ell < 2) throw std::invalid_argument("need at least the two braid generators");
        if (t1 < 0 || t1 >= ell || t2 < 0 || t2 >= ell || t1 == t2) throw std::invalid_argument("bad braid generators");
        if (p < 2) throw std::invalid_argument("braid exponent must be >= 2");
        for (auto [a, b] : commuting) {
            if (a < 0 || a >= ell || b < 0 || b >= ell || a == b) throw std::invalid_argument("bad commuting pair");
            if ((a == t1 && b == t2) || (a == t2 && b == t1))
                throw std::invalid_argument("t1 and t2 cannot also commute (they would share a row)");
            commute_[a * ell + b] = commute_[b * ell + a] = true;
        }
    }

    static CoxeterContext from_system(const BinaryLinearSystem& A, int t1, int t2, int p,
                                      std::size_t node_cap = 1u << 20) {
        return CoxeterContext(A.n(), row_commuting_pairs(A), t1, t2, p, node_cap);
    }

    int generators() const { return ell_; }
    int t1() const { return t1_; }
    int t2() const { return t2_; }
    int p() const { return p_; }
    std::size_t node_cap() const { return node_cap_; }
    bool commute(int a, int b) const { return a != b && commute_[a * ell_ + b]; }
    bool braid_pair(int a, int b) const { return (a == t1_ && b == t2_) || (a == t2_ && b == t1_); }

    std::set<std::pair<int, int>> commuting_pairs() const {
        std::set<std::pair<int, int>> s;
        for (int a = 0; a < ell_; ++a)
            for (int b = a + 1; b < ell_; ++b)
                if (commute(a, b)) s.insert({a, b});
        return s;
    }

    void check_word(const CoxWord& w) const {
        for (int x : w)
            if (x < 0 || x >= ell_) throw std::out_of_range("generator index out of range");
    }

    // Memo for normal forms; shared by copies of the context.
    struct Cache {
        std::shared_mutex mu;
        std::unordered_map<CoxWord, NormalWord, CoxWordHash> table;
    };
    Cache& cache() const { return *cache_; }

private:
    int ell_, t1_, t2_, p_;
    std::size_t node_cap_;
    std::vector<bool> commute_;
    std::shared_ptr<Cache> cache_;
};

namespace detail {

// Start index of every alternating t1/t2 run of length p.
inline std::vector<std::size_t> braid_sites(const CoxeterContext& ctx, const CoxWord& w) {
    std::vector<std::size_t> out;
    const std::size_t p = static_cast<std::size_t>(ctx.p());
    if (w.size() < p) return out;
    for (std::size_t i = 0; i + p <= w.size(); ++i) {
        if (w[i] != ctx.t1() && w[i] != ctx.t2()) continue;
        bool ok = true;
        for (std::size_t k = 1; k < p && ok; ++k) ok = ctx.braid_pair(w[i + k - 1], w[i + k]);
        if (ok) out.push_back(i);
    }
    return out;
}

inline CoxWord apply_braid(const CoxeterContext& ctx, CoxWord w, std::size_t i) {
    for (std::size_t k = 0; k < static_cast<std::size_t>(ctx.p()); ++k)
        w[i + k] = (w[i + k] == ctx.t1()) ? ctx.t2() : ctx.t1();
    return w;
}

// Neighbors that keep the length: commuting swaps and braid replacements.
inline void same_length_neighbors(const CoxeterContext& ctx, const CoxWord& w, std::vector<CoxWord>& out) {
    for (std::size_t i = 0; i + 1 < w.size(); ++i)
        if (ctx.commute(w[i], w[i + 1])) {
            CoxWord v = w;
            std::swap(v[i], v[i + 1]);
            out.push_back(std::move(v));
        }
    for (std::size_t i : braid_sites(ctx, w)) out.push_back(apply_braid(ctx, w, i));
}

}  // namespace detail

inline std::set<CoxWord> neighbors(const CoxeterContext& ctx, const CoxWord& w) {
    ctx.check_word(w);
    std::set<CoxWord> out;
    for (std::size_t i = 0; i + 1 < w.size(); ++i)
        if (w[i] == w[i + 1]) {
            CoxWord v;
            v.insert(v.end(), w.begin(), w.begin() + i);
            v.insert(v.end(), w.begin() + i + 2, w.end());
            out.insert(std::move(v));
        }
    std::vector<CoxWord> same;
    detail::same_length_neighbors(ctx, w, same);
    out.insert(same.begin(), same.end());
    return out;
}

// Literal closure: every word reachable by any move, then the length-lex
// least one. Exponential; kept as a reference for tests.
inline NormalWord normal_form_full_closure(const CoxeterContext& ctx, const CoxWord& w) {
    ctx.check_word(w);
    std::unordered_set<CoxWord, CoxWordHash> seen{w};
    std::deque<CoxWord> queue{w};
    CoxWord best = w;
    while (!queue.empty()) {
        CoxWord cur = std::move(queue.front());
        queue.pop_front();
        if (length_lex_less(cur, best)) best = cur;
        for (const auto& nb : neighbors(ctx, cur))
            if (seen.insert(nb).second) {
                if (seen.size() > ctx.node_cap()) throw CoxeterCapExceeded("normal form closure exceeded the node cap");
                queue.push_back(nb);
            }
    }
    return best;
}

// Same result as the full closure, computed faster: explore the class of
// words reachable without shortening, and as soon as one contains a square,
// delete it and start over from the shorter word. When no word of the class
// has a square the word is reduced, the class holds every reduced word of the
// element, and its lexicographic minimum is returned.
inline NormalWord normal_form_uncached(const CoxeterContext& ctx, const CoxWord& w) {
    ctx.check_word(w);
    CoxWord cur = w;
    std::size_t nodes = 0;
    for (;;) {
        std::unordered_set<CoxWord, CoxWordHash> seen{cur};
        std::vector<CoxWord> stack{cur};
        CoxWord best = cur;
        bool shortened = false;
        std::vector<CoxWord> nbrs;
        while (!stack.empty() && !shortened) {
            CoxWord v = std::move(stack.back());
            stack.pop_back();
            for (std::size_t i = 0; i + 1 < v.size(); ++i)
                if (v[i] == v[i + 1]) {
                    CoxWord s;
                    s.insert(s.end(), v.begin(), v.begin() + i);
                    s.insert(s.end(), v.begin() + i + 2, v.end());
                    cur = std::move(s);
                    shortened = true;
                    break;
                }
            if (shortened) break;
            if (v < best) best = v;
            nbrs.clear();
            detail::same_length_neighbors(ctx, v, nbrs);
            for (auto& nb : nbrs)
                if (seen.insert(nb).second) {
                    if (++nodes > ctx.node_cap()) throw CoxeterCapExceeded("normal form search exceeded the node cap");
                    stack.push_back(std::move(nb));
                }
        }
        if (!shortened) return best;
    }
}

inline NormalWord normal_form(const CoxeterContext& ctx, const CoxWord& w) {
    auto& cache = ctx.cache();
    {
        std::shared_lock lock(cache.mu);
        auto it = cache.table.find(w);
        if (it != cache.table.end()) return it->second;
    }
    NormalWord nf = normal_form_uncached(ctx, w);
    std::unique_lock lock(cache.mu);
    cache.table.emplace(w, nf);
    return nf;
}

inline bool equal(const CoxeterContext& ctx, const CoxWord& a, const CoxWord& b) {
    return normal_form(ctx, a) == normal_form(ctx, b);
}

inline CoxWord cox_inverse(const CoxWord& w) { return CoxWord(w.rbegin(), w.rend()); }

inline CoxWord cox_concat(const CoxWord& a, const CoxWord& b) {
    CoxWord w = a;
    w.insert(w.end(), b.begin(), b.end());
    return w;
}

// True when a normal word lies in the subgroup generated by t1 and t2.
inline bool in_braid_subgroup(const CoxeterContext& ctx, const NormalWord& w) {
    return std::all_of(w.begin(), w.end(), [&](int x) { return x == ctx.t1() || x == ctx.t2(); });
}

// ---- finite quotient oracle ----

using Permutation = std::vector<int>;

inline Permutation perm_compose(const Permutation& a, const Permutation& b) {
    // (a * b)(i) = a(b(i)): apply b first
    Permutation r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[b[i]];
    return r;
}

inline Permutation perm_identity(std::size_t n) {
    Permutation r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = static_cast<int>(i);
    return r;
}

struct RelatorViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Maps generators into a permutation group and compares images of words.
class FiniteQuotientOracle {
public:
    FiniteQuotientOracle(const CoxeterContext& ctx, std::vector<Permutation> images) : images_(std::move(images)) {
        if (static_cast<int>(images_.size()) != ctx.generators()) throw std::invalid_argument("one image per generator");
        const std::size_t n = images_.front().size();
        const Permutation id = perm_identity(n);
        for (const auto& g : images_) {
            if (g.size() != n) throw std::invalid_argument("images must act on the same set");
            if (perm_compose(g, g) != id) throw RelatorViolation("generator image is not an involution");
        }
        for (const auto& [a, b] : ctx.commuting_pairs())
            if (perm_compose(images_[a], images_[b]) != perm_compose(images_[b], images_[a]))
                throw RelatorViolation("commuting pair images do not commute");
        Permutation r = id;
        const Permutation t = perm_compose(images_[ctx.t1()], images_[ctx.t2()]);
        for (int i = 0; i < ctx.p(); ++i) r = perm_compose(r, t);
        if (r != id) throw RelatorViolation("(t1 t2)^p is not the identity");
    }

    Permutation image(const CoxWord& w) const {
        Permutation r = perm_identity(images_.front().size());
        for (int x : w) r = perm_compose(r, images_.at(x));
        return r;
    }

    bool equal(const CoxWord& a, const CoxWord& b) const { return image(a) == image(b); }

private:
    std::vector<Permutation> images_;
};

// Reflections of a p-gon: t1 t2 is the rotation by one step. Other
// generators act trivially.
inline std::vector<Permutation> dihedral_quotient_images(const CoxeterContext& ctx) {
    const int p = ctx.p();
    Permutation t2(p), t1(p);
    for (int i = 0; i < p; ++i) {
        t2[i] = static_cast<int>(mod_floor(-i, p));
        t1[i] = static_cast<int>(mod_floor(1 - i, p));  // t1 t2 (i) = t1(-i) = 1 + i
    }
    std::vector<Permutation> imgs(ctx.generators(), perm_identity(p));
    imgs[ctx.t1()] = t1;
    imgs[ctx.t2()] = t2;
    return imgs;
}

// Each generator acts on {0,1} by the swap or trivially.
inline std::vector<Permutation> sign_quotient_images(const CoxeterContext& ctx, const std::vector<bool>& negative) {
    std::vector<Permutation> imgs;
    for (int g = 0; g < ctx.generators(); ++g) imgs.push_back(negative.at(g) ? Permutation{1, 0} : Permutation{0, 1});
    return imgs;
}

// Disjoint union of two actions: the product group acting on n1 + n2 points.
inline std::vector<Permutation> product_images(const std::vector<Permutation>& a, const std::vector<Permutation>& b) {
    std::vector<Permutation> out;
    for (std::size_t g = 0; g < a.size(); ++g) {
        Permutation r = a[g];
        const int off = static_cast<int>(a[g].size());
        for (int x : b[g]) r.push_back(x + off);
        out.push_back(r);
    }
    return out;
}

inline nlohmann::json coxeter_context_to_json(const CoxeterContext& ctx) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& [a, b] : ctx.commuting_pairs()) pairs.push_back({a, b});
    return {{"generators", ctx.generators()}, {"commuting", pairs}, {"t1", ctx.t1()}, {"t2", ctx.t2()}, {"p", ctx.p()}};
}

// Accepts either {"generators", "commuting"} or a linear system {"n", "rows"}.
inline CoxeterContext coxeter_context_from_json(const nlohmann::json& j, std::size_t node_cap = 1u << 20) {
    if (j.contains("node_cap")) node_cap = j.at("node_cap").get<std::size_t>();
    const int t1 = j.at("t1").get<int>(), t2 = j.at("t2").get<int>(), p = j.at("p").get<int>();
    if (j.contains("rows")) return CoxeterContext::from_system(linsys_from_json(j), t1, t2, p, node_cap);
    std::set<std::pair<int, int>> pairs;
    for (const auto& e : j.value("commuting", nlohmann::json::array())) pairs.insert({e.at(0).get<int>(), e.at(1).get<int>()});
    return CoxeterContext(j.at("generators").get<int>(), pairs, t1, t2, p, node_cap);
}

}  // namespace qcorr
