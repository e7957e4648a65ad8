#pragma once
// Binary linear systems, their homogeneous solution groups, presentations
// with extra conjugacy relations, and normalization to three-variable rows.

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qcorr/word.hpp"

namespace qcorr {

class BinaryLinearSystem {
public:
    BinaryLinearSystem() = default;
    BinaryLinearSystem(int n, std::vector<std::vector<int>> rows) : n_(n) {
        if (n < 0) throw std::invalid_argument("column count must be >= 0");
        for (auto& r : rows) {
            std::sort(r.begin(), r.end());
            if (std::adjacent_find(r.begin(), r.end()) != r.end()) throw std::invalid_argument("repeated column in a row");
            for (int j : r)
                if (j < 0 || j >= n) throw std::out_of_range("row entry out of range");
            rows_.push_back(std::move(r));
        }
    }

    int n() const { return n_; }
    int m() const { return static_cast<int>(rows_.size()); }
    const std::vector<std::vector<int>>& rows() const { return rows_; }
    const std::vector<int>& row(int i) const { return rows_.at(i); }

    // Common row size, or nullopt when rows differ.
    std::optional<int> kappa() const {
        if (rows_.empty()) return std::nullopt;
        const std::size_t s = rows_.front().size();
        for (const auto& r : rows_)
            if (r.size() != s) return std::nullopt;
        return static_cast<int>(s);
    }

    // phi_i: position of column j inside row i (order-preserving), or -1.
    int phi(int i, int j) const {
        const auto& r = rows_.at(i);
        auto it = std::lower_bound(r.begin(), r.end(), j);
        return (it != r.end() && *it == j) ? static_cast<int>(it - r.begin()) : -1;
    }

    bool in_common_row(int a, int b) const {
        for (const auto& r : rows_)
            if (std::binary_search(r.begin(), r.end(), a) && std::binary_search(r.begin(), r.end(), b)) return true;
        return false;
    }

    friend bool operator==(const BinaryLinearSystem&, const BinaryLinearSystem&) = default;

private:
    int n_ = 0;
    std::vector<std::vector<int>> rows_;
};

inline std::set<std::pair<int, int>> row_commuting_pairs(const BinaryLinearSystem& A) {
    std::set<std::pair<int, int>> pairs;
    for (const auto& r : A.rows())
        for (std::size_t a = 0; a < r.size(); ++a)
            for (std::size_t b = a + 1; b < r.size(); ++b) pairs.insert({r[a], r[b]});
    return pairs;
}

inline Presentation solution_group(const BinaryLinearSystem& A) {
    Presentation p;
    p.generators = A.n();
    for (int j = 0; j < A.n(); ++j) {
        p.names.push_back("x" + std::to_string(j));
        p.relators.push_back(gen_word(j, 2));
    }
    for (const auto& r : A.rows()) {
        Word w;
        for (int j : r) w.push_back({j, 1});
        p.relators.push_back(w);
    }
    for (const auto& [a, b] : row_commuting_pairs(A)) p.relators.push_back(commutator(gen_word(a), gen_word(b)));
    return p;
}

struct TriangularityViolation : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct EhlpcPresentation {
    BinaryLinearSystem A;
    int ell = 0;                                    // number of y generators
    std::vector<std::array<int, 3>> C0;             // x_i x_j x_i = x_k
    std::vector<std::array<int, 3>> C1;             // y_i^-1 x_j y_i = x_k
    std::map<std::pair<int, int>, long long> L;     // (i, j), i > j: y_i^-1 y_j y_i = y_j^L_ij

    int add_y() { return ell++; }
};

inline void check_indices(const EhlpcPresentation& E) {
    auto x_ok = [&](int v) { return v >= 0 && v < E.A.n(); };
    auto y_ok = [&](int v) { return v >= 0 && v < E.ell; };
    for (const auto& t : E.C0)
        if (!x_ok(t[0]) || !x_ok(t[1]) || !x_ok(t[2])) throw std::out_of_range("C0 triple out of range");
    for (const auto& t : E.C1)
        if (!y_ok(t[0]) || !x_ok(t[1]) || !x_ok(t[2])) throw std::out_of_range("C1 triple out of range");
    for (const auto& [ij, v] : E.L) {
        if (!y_ok(ij.first) || !y_ok(ij.second)) throw std::out_of_range("L entry out of range");
        if (ij.first <= ij.second) throw TriangularityViolation("L must be strictly lower triangular");
        if (v < 0) throw std::invalid_argument("L entries must be nonnegative");
    }
}

// x generators keep their indices; y_i becomes generator n + i.
inline Presentation ehlpc_presentation(const EhlpcPresentation& E) {
    check_indices(E);
    Presentation p = solution_group(E.A);
    const int n = E.A.n();
    p.generators = n + E.ell;
    for (int i = 0; i < E.ell; ++i) p.names.push_back("y" + std::to_string(i));
    for (const auto& [i, j, k] : E.C0) p.relators.push_back(free_reduce(concat({gen_word(i), gen_word(j), gen_word(i), gen_word(k, -1)})));
    for (const auto& [i, j, k] : E.C1)
        p.relators.push_back(free_reduce(concat({gen_word(n + i, -1), gen_word(j), gen_word(n + i), gen_word(k, -1)})));
    for (const auto& [ij, v] : E.L) {
        if (v <= 0) continue;
        const auto [i, j] = ij;
        p.relators.push_back(free_reduce(
            concat({gen_word(n + i, -1), gen_word(n + j), gen_word(n + i), gen_word(n + j, -static_cast<int>(v))})));
    }
    return p;
}

inline EhlpcPresentation add_conjugacy(EhlpcPresentation E, int yi, int xj, int xk) {
    E.C1.push_back({yi, xj, xk});
    check_indices(E);
    return E;
}

inline EhlpcPresentation add_power_conjugacy(EhlpcPresentation E, int yi, int yj, long long r) {
    if (r <= 0) throw std::invalid_argument("power must be positive");
    if (yi <= yj) throw TriangularityViolation("add_power_conjugacy needs yi > yj");
    E.L[{yi, yj}] = r;
    check_indices(E);
    return E;
}

struct NormalizationResult {
    BinaryLinearSystem system;
    std::vector<int> var_map;  // original column -> column in the new system
};

// Rewrites every row into rows of exactly three variables. New variables are
// numbered after the existing columns in the order they are created.
inline NormalizationResult normalize_rows_to_three(const BinaryLinearSystem& A) {
    int n = A.n();
    std::vector<std::vector<int>> out;
    for (const auto& original : A.rows()) {
        std::vector<int> row = original;
        while (row.size() > 3) {
            const int r = static_cast<int>(row.size());
            const int z3 = n++;
            out.push_back({z3, row[0], row[1]});
            for (int t = 2; t < r; ++t) {
                const int z1t = n++, z2t = n++;
                out.push_back({z1t, row[0], row[t]});
                out.push_back({z2t, row[1], row[t]});
            }
            std::vector<int> shorter{z3};
            shorter.insert(shorter.end(), row.begin() + 2, row.end());
            row = shorter;
        }
        if (row.size() == 3) {
            out.push_back(row);
        } else if (row.size() == 2) {
            const int z1 = n++, z2 = n++;
            out.push_back({row[0], z1, z2});
            out.push_back({row[1], z1, z2});
        } else if (row.size() == 1) {
            const int z1 = n++, z2 = n++, z3 = n++;
            out.push_back({row[0], z1, z2});
            out.push_back({row[0], z1, z3});
            out.push_back({row[0], z2, z3});
            out.push_back({z1, z2, z3});
        }
        // empty rows impose nothing and are dropped
    }
    NormalizationResult res{BinaryLinearSystem(n, std::move(out)), {}};
    for (int j = 0; j < A.n(); ++j) res.var_map.push_back(j);
    return res;
}

struct TooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Solutions of Ax = 0 over Z_2 restricted to `keep`, found by a depth-first
// search over assignments with parity propagation. Counts explored nodes and
// gives up beyond 2^20.
inline std::set<std::vector<int>> restricted_solutions(const BinaryLinearSystem& A, const std::vector<int>& keep) {
    const int n = A.n();
    std::vector<std::vector<int>> rows_of(n);
    for (int i = 0; i < A.m(); ++i)
        for (int j : A.row(i)) rows_of[j].push_back(i);
    std::vector<int> value(n, -1);
    std::set<std::vector<int>> result;
    long long nodes = 0;
    const long long cap = 1LL << 20;

    // Order: kept variables first, then the rest.
    std::vector<int> order = keep;
    for (int j = 0; j < n; ++j)
        if (std::find(keep.begin(), keep.end(), j) == keep.end()) order.push_back(j);

    std::function<void(std::size_t)> dfs = [&](std::size_t pos) {
        if (++nodes > cap) throw TooLarge("restricted_solutions: more than 2^20 assignments explored");
        while (pos < order.size() && value[order[pos]] != -1) ++pos;
        if (pos == order.size()) {
            for (int i = 0; i < A.m(); ++i) {
                int s = 0;
                for (int j : A.row(i)) s ^= value[j];
                if (s) return;
            }
            std::vector<int> r;
            for (int j : keep) r.push_back(value[j]);
            result.insert(r);
            return;
        }
        const int var = order[pos];
        for (int b = 0; b < 2; ++b) {
            std::vector<int> assigned{var};
            value[var] = b;
            bool ok = true;
            // propagate rows with one unknown left
            for (std::size_t q = 0; q < assigned.size() && ok; ++q)
                for (int i : rows_of[assigned[q]]) {
                    int unknown = -1, count = 0, s = 0;
                    for (int j : A.row(i)) {
                        if (value[j] == -1) {
                            unknown = j;
                            ++count;
                        } else {
                            s ^= value[j];
                        }
                    }
                    if (count == 0 && s) {
                        ok = false;
                        break;
                    }
                    if (count == 1) {
                        value[unknown] = s;
                        assigned.push_back(unknown);
                    }
                }
            if (ok) dfs(pos + 1);
            for (int j : assigned) value[j] = -1;
        }
    };
    dfs(0);
    return result;
}

inline bool restricted_solution_sets_equal(const BinaryLinearSystem& A, const BinaryLinearSystem& Ap,
                                           const std::vector<int>& originals) {
    return restricted_solutions(A, originals) == restricted_solutions(Ap, originals);
}

inline nlohmann::json linsys_to_json(const BinaryLinearSystem& A) { return {{"n", A.n()}, {"rows", A.rows()}}; }

inline BinaryLinearSystem linsys_from_json(const nlohmann::json& j) {
    return BinaryLinearSystem(j.at("n").get<int>(), j.at("rows").get<std::vector<std::vector<int>>>());
}

inline nlohmann::json ehlpc_to_json(const EhlpcPresentation& E) {
    nlohmann::json j = linsys_to_json(E.A);
    j["ell"] = E.ell;
    j["C0"] = E.C0;
    j["C1"] = E.C1;
    nlohmann::json L = nlohmann::json::array();
    for (const auto& [ij, v] : E.L) L.push_back({ij.first, ij.second, v});
    j["L"] = L;
    return j;
}

inline EhlpcPresentation ehlpc_from_json(const nlohmann::json& j) {
    EhlpcPresentation E;
    E.A = linsys_from_json(j);
    E.ell = j.value("ell", 0);
    if (j.contains("C0")) E.C0 = j.at("C0").get<std::vector<std::array<int, 3>>>();
    if (j.contains("C1")) E.C1 = j.at("C1").get<std::vector<std::array<int, 3>>>();
    if (j.contains("L"))
        for (const auto& e : j.at("L")) E.L[{e.at(0).get<int>(), e.at(1).get<int>()}] = e.at(2).get<long long>();
    check_indices(E);
    return E;
}

}  // namespace qcorr
