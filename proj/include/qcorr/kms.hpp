#pragma once
// Word calculus for the group presentation attached to a Minsky machine:
// generating sets, the circledast operation, command relators and the
// configuration words.

#include <algorithm>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "qcorr/minsky.hpp"
#include "qcorr/word.hpp"

namespace qcorr {

struct KmsGenerator {
    enum class Kind { X, A, a, a_prime, a_tilde, a_tilde_prime, t };
    Kind kind = Kind::X;
    int state = 0;            // X only
    std::vector<int> subset;  // X only: strictly increasing glass bottoms 0..k
    int index = 0;            // A_i (0..k) or a-family (1..k)

    static KmsGenerator x(int state, std::vector<int> subset) {
        if (!std::is_sorted(subset.begin(), subset.end()) ||
            std::adjacent_find(subset.begin(), subset.end()) != subset.end())
            throw std::invalid_argument("x(q A...) needs strictly increasing indices");
        return KmsGenerator{Kind::X, state, std::move(subset), 0};
    }
    static KmsGenerator bottom(int i) { return KmsGenerator{Kind::A, 0, {}, i}; }
    static KmsGenerator coin(int i) { return KmsGenerator{Kind::a, 0, {}, i}; }
    static KmsGenerator coin_prime(int i) { return KmsGenerator{Kind::a_prime, 0, {}, i}; }
    static KmsGenerator coin_tilde(int i) { return KmsGenerator{Kind::a_tilde, 0, {}, i}; }
    static KmsGenerator coin_tilde_prime(int i) { return KmsGenerator{Kind::a_tilde_prime, 0, {}, i}; }
    static KmsGenerator extension_t() { return KmsGenerator{Kind::t, 0, {}, 0}; }

    std::string name() const {
        switch (kind) {
            case Kind::X: {
                std::string s = "x(q" + std::to_string(state);
                for (int i : subset) s += " A" + std::to_string(i);
                return s + ")";
            }
            case Kind::A: return "A" + std::to_string(index);
            case Kind::a: return "a" + std::to_string(index);
            case Kind::a_prime: return "a" + std::to_string(index) + "'";
            case Kind::a_tilde: return "~a" + std::to_string(index);
            case Kind::a_tilde_prime: return "~a" + std::to_string(index) + "'";
            case Kind::t: return "t";
        }
        return "?";
    }

    friend bool operator==(const KmsGenerator& a, const KmsGenerator& b) {
        return std::tie(a.kind, a.state, a.subset, a.index) == std::tie(b.kind, b.state, b.subset, b.index);
    }
    friend bool operator<(const KmsGenerator& a, const KmsGenerator& b) {
        return std::tie(a.kind, a.state, a.subset, a.index) < std::tie(b.kind, b.state, b.subset, b.index);
    }
};

struct KmsLetter {
    KmsGenerator gen;
    int exp;  // +1 or -1
    friend bool operator==(const KmsLetter&, const KmsLetter&) = default;
};

using KmsWord = std::vector<KmsLetter>;

inline KmsWord kms_letter(const KmsGenerator& g, int exp = 1) { return KmsWord{KmsLetter{g, exp}}; }

inline KmsWord kms_reduce(const KmsWord& w) {
    KmsWord out;
    out.reserve(w.size());
    for (const auto& l : w) {
        if (!out.empty() && out.back().exp == -l.exp && out.back().gen == l.gen)
            out.pop_back();
        else
            out.push_back(l);
    }
    return out;
}

inline bool kms_is_reduced(const KmsWord& w) { return kms_reduce(w).size() == w.size(); }

inline KmsWord kms_inverse(const KmsWord& w) {
    KmsWord out(w.rbegin(), w.rend());
    for (auto& l : out) l.exp = -l.exp;
    return out;
}

inline KmsWord kms_concat(std::initializer_list<KmsWord> parts) {
    KmsWord out;
    for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

inline std::string kms_to_string(const KmsWord& w) {
    if (w.empty()) return "e";
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) s += " ";
        s += w[i].gen.name();
        if (w[i].exp < 0) s += "^-1";
    }
    return s;
}

inline nlohmann::json kms_to_json(const KmsWord& w) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& l : w) j.push_back({{"generator", l.gen.name()}, {"exponent", l.exp}});
    return j;
}

struct GeneratorSets {
    std::vector<KmsGenerator> L0, L1, L2;
};

// States are 0..N, glasses 1..k.
inline GeneratorSets generator_sets(int k, int N) {
    if (k < 1 || N < 1) throw std::invalid_argument("generator_sets needs k >= 1 and N >= 1");
    GeneratorSets s;
    for (int i = 0; i <= N; ++i)
        for (unsigned mask = 0; mask < (1u << (k + 1)); ++mask) {
            std::vector<int> sub;
            for (int b = 0; b <= k; ++b)
                if (mask & (1u << b)) sub.push_back(b);
            s.L0.push_back(KmsGenerator::x(i, sub));
        }
    for (int i = 0; i <= k; ++i) s.L1.push_back(KmsGenerator::bottom(i));
    for (int i = 1; i <= k; ++i) {
        s.L2.push_back(KmsGenerator::coin(i));
        s.L2.push_back(KmsGenerator::coin_prime(i));
        s.L2.push_back(KmsGenerator::coin_tilde(i));
        s.L2.push_back(KmsGenerator::coin_tilde_prime(i));
    }
    return s;
}

// f (*) a_j = f^-1 (a_j^-1 f a_j) (a_j f^-1 a_j^-1) (a_j' f a_j'^-1)
// f (*) A_j = [f, A_j] = f^-1 A_j^-1 f A_j
inline KmsWord circledast(const KmsWord& f, const KmsGenerator& g, bool reduce = true) {
    const KmsWord fi = kms_inverse(f);
    KmsWord out;
    if (g.kind == KmsGenerator::Kind::a) {
        const KmsGenerator gp = KmsGenerator::coin_prime(g.index);
        out = kms_concat({fi, kms_letter(g, -1), f, kms_letter(g), kms_letter(g), fi, kms_letter(g, -1), kms_letter(gp), f,
                          kms_letter(gp, -1)});
    } else if (g.kind == KmsGenerator::Kind::A) {
        out = kms_concat({fi, kms_letter(g, -1), f, kms_letter(g)});
    } else {
        throw std::invalid_argument("circledast needs an a_j or A_j generator");
    }
    return reduce ? kms_reduce(out) : out;
}

inline KmsWord iterated_circledast(KmsWord f, const std::vector<KmsGenerator>& gens, bool reduce = true) {
    for (const auto& g : gens) f = circledast(f, g, reduce);
    return f;
}

inline KmsWord state_letter(int state) { return kms_letter(KmsGenerator::x(state, {0})); }

inline KmsWord command_relator(const Command& cmd, int k) {
    for (int g : cmd.glasses)
        if (g < 1 || g > k) throw std::invalid_argument("command glass out of range");
    std::vector<KmsGenerator> coins, bottoms;
    for (int g : cmd.glasses) {
        coins.push_back(KmsGenerator::coin(g));
        bottoms.push_back(KmsGenerator::bottom(g));
    }
    const KmsWord xi = state_letter(cmd.input_state), xj = state_letter(cmd.output_state);
    KmsWord lhs, rhs;
    switch (cmd.kind) {
        case CommandKind::Add:
            lhs = xi;
            rhs = iterated_circledast(xj, coins);
            break;
        case CommandKind::Sub:
            lhs = iterated_circledast(xi, coins);
            rhs = xj;
            break;
        case CommandKind::EmptyCheck:
            lhs = iterated_circledast(xi, bottoms);
            rhs = iterated_circledast(xj, bottoms);
            break;
        case CommandKind::Stop:
            lhs = xi;
            rhs = xj;
            break;
    }
    return kms_reduce(kms_concat({lhs, kms_inverse(rhs)}));
}

inline std::vector<KmsGenerator> coin_sequence(int n) {
    return std::vector<KmsGenerator>(static_cast<std::size_t>(n), KmsGenerator::coin(1));
}

inline std::vector<KmsGenerator> bottoms_1_to_k(int k) {
    std::vector<KmsGenerator> v;
    for (int i = 1; i <= k; ++i) v.push_back(KmsGenerator::bottom(i));
    return v;
}

// w(n) = x(q1 A0) (*) a1^(*n) (*) A1 (*) ... (*) Ak
inline KmsWord input_word(int n, int k, bool reduce = true) {
    if (n < 0) throw std::invalid_argument("n must be >= 0");
    KmsWord w = iterated_circledast(state_letter(1), coin_sequence(n), reduce);
    return iterated_circledast(w, bottoms_1_to_k(k), reduce);
}

inline std::vector<int> all_bottoms(int k) {
    std::vector<int> v;
    for (int i = 0; i <= k; ++i) v.push_back(i);
    return v;
}

// Single-generator forms x(q1 A0 ... Ak) and x(q0 A0 ... Ak).
inline KmsWord input_word_zero_alias(int k) { return kms_letter(KmsGenerator::x(1, all_bottoms(k))); }
inline KmsWord accept_word(int k) { return kms_letter(KmsGenerator::x(0, all_bottoms(k))); }
inline KmsWord accept_word_unreduced(int k) { return iterated_circledast(state_letter(0), bottoms_1_to_k(k)); }

inline std::vector<KmsWord> extension_relators(int k) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    const KmsWord t = kms_letter(KmsGenerator::extension_t());
    const KmsWord a1 = kms_letter(KmsGenerator::coin(1));
    const KmsWord a1p = kms_letter(KmsGenerator::coin_prime(1));
    const KmsWord x1 = state_letter(1);
    auto comm = [](const KmsWord& a, const KmsWord& b) {
        return kms_reduce(kms_concat({kms_inverse(a), kms_inverse(b), a, b}));
    };
    return {comm(t, a1), comm(t, a1p),
            kms_reduce(kms_concat({kms_inverse(t), x1, t, kms_inverse(circledast(x1, KmsGenerator::coin(1)))}))};
}

inline std::vector<KmsWord> pn_quotient_relators(int p, int k) {
    if (p < 2) throw std::invalid_argument("p must be >= 2");
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    const KmsWord x1 = state_letter(1);
    KmsWord first = kms_reduce(kms_concat({iterated_circledast(x1, coin_sequence(p)), kms_inverse(x1)}));
    KmsWord tp;
    for (int i = 0; i < p; ++i) tp.push_back({KmsGenerator::extension_t(), 1});
    return {first, tp};
}

// Source of the machine-independent relations. The built-in source is
// partial; a fuller list can be plugged in here.
class CommonRelationSource {
public:
    virtual ~CommonRelationSource() = default;
    virtual std::vector<KmsWord> relations(int k, int N) const = 0;
    virtual bool partial() const = 0;
};

// Order two for L0 and L1, and pairwise commutation inside each L_i.
class StatedCommonRelations : public CommonRelationSource {
public:
    std::vector<KmsWord> relations(int k, int N) const override {
        const GeneratorSets s = generator_sets(k, N);
        std::vector<KmsWord> out;
        for (const auto* L : {&s.L0, &s.L1})
            for (const auto& g : *L) out.push_back(kms_concat({kms_letter(g), kms_letter(g)}));
        for (const auto* L : {&s.L0, &s.L1, &s.L2})
            for (std::size_t i = 0; i < L->size(); ++i)
                for (std::size_t j = i + 1; j < L->size(); ++j) {
                    const KmsWord a = kms_letter((*L)[i]), b = kms_letter((*L)[j]);
                    out.push_back(kms_concat({kms_inverse(a), kms_inverse(b), a, b}));
                }
        return out;
    }
    bool partial() const override { return true; }
};

// Interns structured generators as presentation indices.
class GeneratorTable {
public:
    int intern(const KmsGenerator& g) {
        auto it = index_.find(g);
        if (it != index_.end()) return it->second;
        const int id = static_cast<int>(gens_.size());
        gens_.push_back(g);
        index_.emplace(g, id);
        return id;
    }
    int size() const { return static_cast<int>(gens_.size()); }
    const KmsGenerator& at(int id) const { return gens_.at(id); }
    std::vector<std::string> names() const {
        std::vector<std::string> v;
        for (const auto& g : gens_) v.push_back(g.name());
        return v;
    }

    Word encode(const KmsWord& w) {
        Word out;
        out.reserve(w.size());
        for (const auto& l : w) out.push_back({intern(l.gen), l.exp});
        return out;
    }

private:
    std::vector<KmsGenerator> gens_;
    std::map<KmsGenerator, int> index_;
};

struct KmsPresentation {
    Presentation presentation;
    bool common_relations_partial = true;
};

// Generators of S(MM) are interned first, in generator_sets order, so that a
// machine obtained by adding states shares the indices of the smaller one.
inline KmsPresentation kms_presentation(const MinskyMachine& m, const CommonRelationSource& common = StatedCommonRelations{}) {
    const int k = m.glasses(), N = m.states() - 1;
    GeneratorTable table;
    const GeneratorSets s = generator_sets(k, N);
    for (const auto* L : {&s.L1, &s.L2, &s.L0})
        for (const auto& g : *L) table.intern(g);
    KmsPresentation out;
    for (const auto& r : common.relations(k, N)) out.presentation.relators.push_back(table.encode(r));
    for (const auto& c : m.commands()) out.presentation.relators.push_back(table.encode(command_relator(c, k)));
    out.presentation.generators = table.size();
    out.presentation.names = table.names();
    out.common_relations_partial = common.partial();
    return out;
}

}  // namespace qcorr
