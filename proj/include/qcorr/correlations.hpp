#pragma once
// Correlation tables, strategies and the checkers that run on them.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qcorr/cyclotomic.hpp"
#include "qcorr/linalg.hpp"
#include "qcorr/presentations.hpp"

namespace qcorr {

inline constexpr const char* kVersion = "qcorr 1.0.0";
inline constexpr double kDefaultTolerance = 1e-9;

struct ScenarioMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct InvariantViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotGoodStrategy : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::size_t label_index(const std::vector<std::string>& labels, const std::string& l) {
    auto it = std::find(labels.begin(), labels.end(), l);
    if (it == labels.end()) throw ScenarioMismatch("unknown label: " + l);
    return static_cast<std::size_t>(it - labels.begin());
}

struct Scenario {
    std::vector<std::string> X, Y, A, B;

    void check() const {
        if (X.empty() || Y.empty() || A.empty() || B.empty()) throw std::invalid_argument("scenario sets must be nonempty");
    }
    bool symmetric() const { return X == Y && A == B; }
    friend bool operator==(const Scenario&, const Scenario&) = default;
};

// Labels used for linear-system scenarios: rows "r<i>", variables "x<j>",
// answers in Z_2^kappa as bit strings a_0 a_1 ... a_{kappa-1}.
inline std::string row_label(int i) { return "r" + std::to_string(i); }
inline std::string var_label(int j) { return "x" + std::to_string(j); }

// Answer number v has a_k = bit (kappa-1-k) of v, so a_0 is the high bit and
// labels sort lexicographically.
inline std::string bits_label(unsigned v, int kappa) {
    std::string s;
    for (int k = 0; k < kappa; ++k) s += ((v >> (kappa - 1 - k)) & 1u) ? '1' : '0';
    return s;
}

inline std::vector<std::string> bit_labels(int kappa) {
    std::vector<std::string> v;
    for (unsigned a = 0; a < (1u << kappa); ++a) v.push_back(bits_label(a, kappa));
    return v;
}

inline std::vector<int> parse_bits(const std::string& s) {
    std::vector<int> v;
    for (char c : s) {
        if (c != '0' && c != '1') throw ScenarioMismatch("answer label is not a bit string: " + s);
        v.push_back(c - '0');
    }
    return v;
}

inline Scenario linear_system_scenario(const BinaryLinearSystem& A) {
    const auto kappa = A.kappa();
    if (!kappa) throw ScenarioMismatch("rows must share one size");
    Scenario s;
    for (int i = 0; i < A.m(); ++i) s.X.push_back(row_label(i));
    for (int j = 0; j < A.n(); ++j) s.X.push_back(var_label(j));
    s.Y = s.X;
    s.A = s.B = bit_labels(*kappa);
    return s;
}

template <class V>
struct ValueTraits;

template <>
struct ValueTraits<CyclotomicNumber> {
    static constexpr bool exact = true;
    static CyclotomicNumber zero() { return {}; }
    static CyclotomicNumber one() { return CyclotomicNumber(1L); }
    static bool is_zero(const CyclotomicNumber& v, double) { return v.is_zero(); }
    static double to_double(const CyclotomicNumber& v) { return v.to_complex().real(); }
    static bool is_real(const CyclotomicNumber& v, double) { return v.conjugate() == v; }
};

template <>
struct ValueTraits<double> {
    static constexpr bool exact = false;
    static double zero() { return 0.0; }
    static double one() { return 1.0; }
    static bool is_zero(double v, double tol) { return std::abs(v) <= tol; }
    static double to_double(double v) { return v; }
    static bool is_real(double, double) { return true; }
};

template <class V>
class Correlation {
public:
    Correlation() = default;
    explicit Correlation(Scenario s) : sc_(std::move(s)) {
        sc_.check();
        table_.assign(sc_.X.size() * sc_.Y.size() * sc_.A.size() * sc_.B.size(), ValueTraits<V>::zero());
    }

    const Scenario& scenario() const { return sc_; }
    std::size_t nx() const { return sc_.X.size(); }
    std::size_t ny() const { return sc_.Y.size(); }
    std::size_t na() const { return sc_.A.size(); }
    std::size_t nb() const { return sc_.B.size(); }

    V& at(std::size_t x, std::size_t y, std::size_t a, std::size_t b) { return table_[offset(x, y, a, b)]; }
    const V& at(std::size_t x, std::size_t y, std::size_t a, std::size_t b) const { return table_[offset(x, y, a, b)]; }

    const V& get(const std::string& x, const std::string& y, const std::string& a, const std::string& b) const {
        return at(label_index(sc_.X, x), label_index(sc_.Y, y), label_index(sc_.A, a), label_index(sc_.B, b));
    }

    const std::vector<V>& table() const { return table_; }

    // Sub-table on the given question labels (same answers).
    Correlation restrict_to(const std::vector<std::string>& xs, const std::vector<std::string>& ys) const {
        Scenario s{xs, ys, sc_.A, sc_.B};
        Correlation r(s);
        for (std::size_t x = 0; x < xs.size(); ++x)
            for (std::size_t y = 0; y < ys.size(); ++y) {
                const std::size_t ox = label_index(sc_.X, xs[x]), oy = label_index(sc_.Y, ys[y]);
                for (std::size_t a = 0; a < na(); ++a)
                    for (std::size_t b = 0; b < nb(); ++b) r.at(x, y, a, b) = at(ox, oy, a, b);
            }
        return r;
    }

    friend bool operator==(const Correlation& a, const Correlation& b) { return a.sc_ == b.sc_ && a.table_ == b.table_; }

private:
    Scenario sc_;
    std::vector<V> table_;

    std::size_t offset(std::size_t x, std::size_t y, std::size_t a, std::size_t b) const {
        return ((x * ny() + y) * na() + a) * nb() + b;
    }
};

using ExactCorrelation = Correlation<CyclotomicNumber>;
using FloatCorrelation = Correlation<double>;

inline FloatCorrelation to_float(const ExactCorrelation& c) {
    FloatCorrelation f(c.scenario());
    for (std::size_t x = 0; x < c.nx(); ++x)
        for (std::size_t y = 0; y < c.ny(); ++y)
            for (std::size_t a = 0; a < c.na(); ++a)
                for (std::size_t b = 0; b < c.nb(); ++b) f.at(x, y, a, b) = c.at(x, y, a, b).to_complex().real();
    return f;
}

template <class V>
Correlation<V> deterministic_correlation(const Scenario& s, const std::vector<std::size_t>& alice,
                                         const std::vector<std::size_t>& bob) {
    Correlation<V> c(s);
    for (std::size_t x = 0; x < s.X.size(); ++x)
        for (std::size_t y = 0; y < s.Y.size(); ++y) c.at(x, y, alice.at(x), bob.at(y)) = ValueTraits<V>::one();
    return c;
}

// Deterministic perfect strategy answer pattern for a solution s of Ax = 0.
inline std::vector<std::size_t> solution_answers(const BinaryLinearSystem& A, const std::vector<int>& s) {
    const int kappa = A.kappa().value();
    std::vector<std::size_t> ans;
    for (int i = 0; i < A.m(); ++i) {
        unsigned v = 0;
        for (int k = 0; k < kappa; ++k) v |= static_cast<unsigned>(s.at(A.row(i)[k])) << (kappa - 1 - k);
        ans.push_back(v);
    }
    for (int j = 0; j < A.n(); ++j) ans.push_back(static_cast<unsigned>(s.at(j)));
    return ans;
}

// ---- checkers ----

struct ValidateReport {
    double max_negativity = 0;           // largest -P over negative entries
    double max_normalization_defect = 0; // max over (x,y) of |sum_{a,b} P - 1|
    std::size_t nonreal_entries = 0;
    bool exact = false;
    bool ok = true;
};

template <class V>
ValidateReport validate(const Correlation<V>& c, double tol = kDefaultTolerance) {
    using T = ValueTraits<V>;
    ValidateReport r;
    r.exact = T::exact;
    for (std::size_t x = 0; x < c.nx(); ++x)
        for (std::size_t y = 0; y < c.ny(); ++y) {
            V sum = T::zero();
            for (std::size_t a = 0; a < c.na(); ++a)
                for (std::size_t b = 0; b < c.nb(); ++b) {
                    const V& v = c.at(x, y, a, b);
                    sum = sum + v;
                    if (T::is_zero(v, tol)) continue;
                    if (!T::is_real(v, tol)) {
                        ++r.nonreal_entries;
                        r.ok = false;
                    }
                    const double d = T::to_double(v);
                    if (d < 0) {
                        r.max_negativity = std::max(r.max_negativity, -d);
                        if (T::exact || -d > tol) r.ok = false;
                    }
                }
            const V defect = sum - T::one();
            r.max_normalization_defect = std::max(r.max_normalization_defect, std::abs(T::to_double(defect)));
            if (!T::is_zero(defect, tol)) r.ok = false;
        }
    return r;
}

struct NonsignallingReport {
    double max_defect = 0;
    bool ok = true;
};

template <class V>
NonsignallingReport is_nonsignalling(const Correlation<V>& c, double tol = kDefaultTolerance) {
    using T = ValueTraits<V>;
    NonsignallingReport r;
    auto note = [&](const V& d) {
        r.max_defect = std::max(r.max_defect, std::abs(T::to_double(d)));
        if (!T::is_zero(d, tol)) r.ok = false;
    };
    for (std::size_t x = 0; x < c.nx(); ++x)
        for (std::size_t a = 0; a < c.na(); ++a) {
            std::optional<V> first;
            for (std::size_t y = 0; y < c.ny(); ++y) {
                V m = T::zero();
                for (std::size_t b = 0; b < c.nb(); ++b) m = m + c.at(x, y, a, b);
                if (!first) first = m;
                else note(m - *first);
            }
        }
    for (std::size_t y = 0; y < c.ny(); ++y)
        for (std::size_t b = 0; b < c.nb(); ++b) {
            std::optional<V> first;
            for (std::size_t x = 0; x < c.nx(); ++x) {
                V m = T::zero();
                for (std::size_t a = 0; a < c.na(); ++a) m = m + c.at(x, y, a, b);
                if (!first) first = m;
                else note(m - *first);
            }
        }
    return r;
}

template <class V>
bool is_synchronous(const Correlation<V>& c, double tol = kDefaultTolerance) {
    using T = ValueTraits<V>;
    if (!c.scenario().symmetric()) throw ScenarioMismatch("synchronicity needs X = Y and A = B");
    for (std::size_t x = 0; x < c.nx(); ++x) {
        V s = T::zero();
        for (std::size_t a = 0; a < c.na(); ++a) s = s + c.at(x, x, a, a);
        if (!T::is_zero(s - T::one(), tol)) return false;
    }
    return true;
}

struct PerfectViolation {
    std::string x, y, a, b;
};

struct PerfectReport {
    std::array<std::vector<PerfectViolation>, 6> violations;  // conditions (1)..(6)
    bool pass() const {
        return std::all_of(violations.begin(), violations.end(), [](const auto& v) { return v.empty(); });
    }
    std::size_t total() const {
        std::size_t n = 0;
        for (const auto& v : violations) n += v.size();
        return n;
    }
};

// Questions other than r<i> / x<j> are ignored.
template <class V>
PerfectReport check_perfect(const Correlation<V>& c, const BinaryLinearSystem& A, double tol = kDefaultTolerance) {
    using T = ValueTraits<V>;
    const auto kappa_opt = A.kappa();
    if (!kappa_opt) throw ScenarioMismatch("check_perfect needs rows of one common size");
    const int kappa = *kappa_opt;
    const Scenario& s = c.scenario();
    if (s.A != bit_labels(kappa) || s.B != bit_labels(kappa)) throw ScenarioMismatch("answers must be Z_2^kappa bit strings");

    struct Q {
        bool row;
        int idx;
        std::size_t pos;
    };
    auto collect = [&](const std::vector<std::string>& labels) {
        std::vector<Q> qs;
        for (int i = 0; i < A.m(); ++i) qs.push_back({true, i, label_index(labels, row_label(i))});
        for (int j = 0; j < A.n(); ++j) qs.push_back({false, j, label_index(labels, var_label(j))});
        return qs;
    };
    const std::vector<Q> xs = collect(s.X), ys = collect(s.Y);
    std::vector<std::vector<int>> bits;
    for (const auto& l : s.A) bits.push_back(parse_bits(l));
    auto parity_odd = [](const std::vector<int>& v) {
        int p = 0;
        for (int b : v) p ^= b;
        return p != 0;
    };
    auto prefix_nonzero = [&](const std::vector<int>& v) {
        for (int k = 0; k + 1 < kappa; ++k)
            if (v[k]) return true;
        return false;
    };

    PerfectReport rep;
    for (const auto& qx : xs)
        for (const auto& qy : ys)
            for (std::size_t a = 0; a < bits.size(); ++a)
                for (std::size_t b = 0; b < bits.size(); ++b) {
                    if (T::is_zero(c.at(qx.pos, qy.pos, a, b), tol)) continue;
                    const auto& av = bits[a];
                    const auto& bv = bits[b];
                    const PerfectViolation viol{s.X[qx.pos], s.Y[qy.pos], s.A[a], s.B[b]};
                    if ((qx.row && parity_odd(av)) || (qy.row && parity_odd(bv))) rep.violations[0].push_back(viol);
                    if ((!qx.row && prefix_nonzero(av)) || (!qy.row && prefix_nonzero(bv))) rep.violations[1].push_back(viol);
                    if (qx.row && qy.row) {
                        bool bad = false;
                        for (int k : A.row(qx.idx)) {
                            const int py = A.phi(qy.idx, k);
                            if (py >= 0 && av[A.phi(qx.idx, k)] != bv[py]) bad = true;
                        }
                        if (bad) rep.violations[2].push_back(viol);
                    }
                    if (qx.row && !qy.row) {
                        const int px = A.phi(qx.idx, qy.idx);
                        if (px >= 0 && av[px] != bv[kappa - 1]) rep.violations[3].push_back(viol);
                    }
                    if (!qx.row && qy.row) {
                        const int py = A.phi(qy.idx, qx.idx);
                        if (py >= 0 && av[kappa - 1] != bv[py]) rep.violations[4].push_back(viol);
                    }
                    if (!qx.row && !qy.row && qx.idx == qy.idx && av[kappa - 1] != bv[kappa - 1])
                        rep.violations[5].push_back(viol);
                }
    return rep;
}

// ---- strategies ----

enum class StrategyMode { Tensor, Commuting };

template <class T>
struct Strategy {
    StrategyMode mode = StrategyMode::Commuting;
    std::size_t dim_a = 0, dim_b = 0;  // commuting mode: both equal the space dimension
    std::vector<T> state;              // tensor: index i * dim_b + j
    Scenario scenario;
    std::vector<std::vector<DenseMatrix<T>>> alice;  // [x][a]
    std::vector<std::vector<DenseMatrix<T>>> bob;    // [y][b]

    std::size_t state_dim() const { return mode == StrategyMode::Tensor ? dim_a * dim_b : dim_a; }
};

using ExactStrategy = Strategy<CyclotomicNumber>;
using FloatStrategy = Strategy<Complex>;

inline FloatStrategy to_float(const ExactStrategy& s) {
    FloatStrategy f;
    f.mode = s.mode;
    f.dim_a = s.dim_a;
    f.dim_b = s.dim_b;
    f.state = to_float(s.state);
    f.scenario = s.scenario;
    for (const auto& fam : s.alice) {
        f.alice.emplace_back();
        for (const auto& m : fam) f.alice.back().push_back(to_float(m));
    }
    for (const auto& fam : s.bob) {
        f.bob.emplace_back();
        for (const auto& m : fam) f.bob.back().push_back(to_float(m));
    }
    return f;
}

namespace detail {

template <class T>
bool near_zero(const DenseMatrix<T>& m, double tol) {
    return m.is_zero(tol);
}

inline bool near_zero(const FloatMatrix& m, double tol) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (std::abs(m(i, j)) > tol) return false;
    return true;
}

template <class T>
DenseMatrix<T> kron(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
    DenseMatrix<T> r(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (ScalarTraits<T>::is_zero(a(i, j), 0.0)) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l) r(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
        }
    return r;
}

template <class T>
void check_family(const std::vector<std::vector<DenseMatrix<T>>>& fam, std::size_t dim, std::size_t n_ans, double tol) {
    for (const auto& ms : fam) {
        if (ms.size() != n_ans) throw InvariantViolation("measurement family has the wrong number of outcomes");
        DenseMatrix<T> sum(dim, dim);
        for (const auto& m : ms) {
            if (m.rows() != dim || m.cols() != dim) throw InvariantViolation("measurement has the wrong dimension");
            if (!near_zero(DenseMatrix<T>(m * m - m), tol)) throw InvariantViolation("measurement operator is not idempotent");
            if (!near_zero(DenseMatrix<T>(m.adjoint() - m), tol)) throw InvariantViolation("measurement operator is not self-adjoint");
            sum = sum + m;
        }
        if (!near_zero(DenseMatrix<T>(sum - DenseMatrix<T>::identity(dim)), tol))
            throw InvariantViolation("measurement does not sum to the identity");
    }
}

}  // namespace detail

// Alice's operator on the whole state space (M (x) 1 in tensor mode).
template <class T>
DenseMatrix<T> full_alice(const Strategy<T>& s, std::size_t x, std::size_t a) {
    if (s.mode == StrategyMode::Commuting) return s.alice.at(x).at(a);
    return detail::kron(s.alice.at(x).at(a), DenseMatrix<T>::identity(s.dim_b));
}

template <class T>
DenseMatrix<T> full_bob(const Strategy<T>& s, std::size_t y, std::size_t b) {
    if (s.mode == StrategyMode::Commuting) return s.bob.at(y).at(b);
    return detail::kron(DenseMatrix<T>::identity(s.dim_a), s.bob.at(y).at(b));
}

template <class T>
void check_strategy(const Strategy<T>& s, double tol = kDefaultTolerance) {
    s.scenario.check();
    if (s.alice.size() != s.scenario.X.size() || s.bob.size() != s.scenario.Y.size())
        throw InvariantViolation("strategy has the wrong number of questions");
    if (s.mode == StrategyMode::Commuting && s.dim_a != s.dim_b) throw InvariantViolation("commuting mode uses one space");
    if (s.state.size() != s.state_dim()) throw InvariantViolation("state has the wrong dimension");
    const T nrm = inner(s.state, s.state);
    if (!ScalarTraits<T>::is_zero(nrm - ScalarTraits<T>::one(), tol)) throw InvariantViolation("state is not a unit vector");
    detail::check_family(s.alice, s.dim_a, s.scenario.A.size(), tol);
    detail::check_family(s.bob, s.dim_b, s.scenario.B.size(), tol);
    if (s.mode == StrategyMode::Commuting)
        for (const auto& fa : s.alice)
            for (const auto& m : fa)
                for (const auto& fb : s.bob)
                    for (const auto& n : fb)
                        if (!detail::near_zero(DenseMatrix<T>(m * n - n * m), tol))
                            throw InvariantViolation("Alice and Bob operators do not commute");
}

template <class T>
struct CorrelationValue;
template <>
struct CorrelationValue<CyclotomicNumber> {
    using type = CyclotomicNumber;
    static type from(const CyclotomicNumber& v) { return v; }
};
template <>
struct CorrelationValue<Complex> {
    using type = double;
    static type from(const Complex& v) { return v.real(); }
};

namespace detail {

// (M (x) 1) psi for tensor states stored row-major as a dim_a x dim_b array.
template <class T>
std::vector<T> apply_alice(const Strategy<T>& s, const DenseMatrix<T>& m) {
    if (s.mode == StrategyMode::Commuting) return m.apply(s.state);
    std::vector<T> out(s.state.size(), ScalarTraits<T>::zero());
    for (std::size_t i = 0; i < s.dim_a; ++i)
        for (std::size_t k = 0; k < s.dim_a; ++k) {
            if (ScalarTraits<T>::is_zero(m(i, k), 0.0)) continue;
            for (std::size_t j = 0; j < s.dim_b; ++j) out[i * s.dim_b + j] += m(i, k) * s.state[k * s.dim_b + j];
        }
    return out;
}

template <class T>
std::vector<T> apply_bob(const Strategy<T>& s, const DenseMatrix<T>& m) {
    if (s.mode == StrategyMode::Commuting) return m.apply(s.state);
    std::vector<T> out(s.state.size(), ScalarTraits<T>::zero());
    for (std::size_t i = 0; i < s.dim_a; ++i)
        for (std::size_t j = 0; j < s.dim_b; ++j)
            for (std::size_t l = 0; l < s.dim_b; ++l) {
                if (ScalarTraits<T>::is_zero(m(j, l), 0.0)) continue;
                out[i * s.dim_b + j] += m(j, l) * s.state[i * s.dim_b + l];
            }
    return out;
}

}  // namespace detail

// P(a,b|x,y) = <psi| M_x^a N_y^b |psi> = <M_x^a psi, N_y^b psi>.
template <class T>
Correlation<typename CorrelationValue<T>::type> correlation_from_strategy(const Strategy<T>& s, bool check = true,
                                                                          double tol = kDefaultTolerance) {
    if (check) check_strategy(s, tol);
    using V = typename CorrelationValue<T>::type;
    Correlation<V> c(s.scenario);
    std::vector<std::vector<std::vector<T>>> ma, nb;
    for (const auto& fam : s.alice) {
        ma.emplace_back();
        for (const auto& m : fam) ma.back().push_back(detail::apply_alice(s, m));
    }
    for (const auto& fam : s.bob) {
        nb.emplace_back();
        for (const auto& m : fam) nb.back().push_back(detail::apply_bob(s, m));
    }
    for (std::size_t x = 0; x < c.nx(); ++x)
        for (std::size_t y = 0; y < c.ny(); ++y)
            for (std::size_t a = 0; a < c.na(); ++a)
                for (std::size_t b = 0; b < c.nb(); ++b)
                    c.at(x, y, a, b) = CorrelationValue<T>::from(inner(ma[x][a], nb[y][b]));
    return c;
}

template <class T>
T outcome_probability(const Strategy<T>& s, bool alice_side, std::size_t q, std::size_t a) {
    const auto v = alice_side ? detail::apply_alice(s, s.alice.at(q).at(a)) : detail::apply_bob(s, s.bob.at(q).at(a));
    return inner(s.state, v);
}

template <class T>
bool is_good(const Strategy<T>& s, double tol = kDefaultTolerance) {
    for (int side = 0; side < 2; ++side) {
        const auto& fam = side == 0 ? s.alice : s.bob;
        for (std::size_t q = 0; q < fam.size(); ++q)
            for (std::size_t a = 0; a < fam[q].size(); ++a)
                if (ScalarTraits<T>::is_zero(outcome_probability(s, side == 0, q, a), tol) && !detail::near_zero(fam[q][a], tol))
                    return false;
    }
    return true;
}

// Zero-probability projections are added to the smallest-index outcome of
// the same question that has nonzero probability.
template <class T>
Strategy<T> make_good(Strategy<T> s, double tol = kDefaultTolerance) {
    for (int side = 0; side < 2; ++side) {
        auto& fam = side == 0 ? s.alice : s.bob;
        for (std::size_t q = 0; q < fam.size(); ++q) {
            std::vector<bool> zero(fam[q].size());
            std::optional<std::size_t> target;
            for (std::size_t a = 0; a < fam[q].size(); ++a) {
                zero[a] = ScalarTraits<T>::is_zero(outcome_probability(s, side == 0, q, a), tol);
                if (!zero[a] && !target) target = a;
            }
            if (!target) throw InvariantViolation("question with no outcome of nonzero probability");
            for (std::size_t a = 0; a < fam[q].size(); ++a)
                if (zero[a] && !detail::near_zero(fam[q][a], tol)) {
                    fam[q][*target] = fam[q][*target] + fam[q][a];
                    fam[q][a] = DenseMatrix<T>(fam[q][a].rows(), fam[q][a].cols());
                }
        }
    }
    return s;
}

struct ConsistencyReport {
    double max_defect = 0;
    bool exact_zero = false;
};

// max over (i,k) of |(M_i^k - N_i^k) psi|
template <class T>
ConsistencyReport synchronous_consistency(const Strategy<T>& s) {
    if (!s.scenario.symmetric()) throw ScenarioMismatch("synchronous consistency needs X = Y and A = B");
    ConsistencyReport r;
    r.exact_zero = ScalarTraits<T>::exact;
    for (std::size_t x = 0; x < s.alice.size(); ++x)
        for (std::size_t a = 0; a < s.alice[x].size(); ++a) {
            auto u = detail::apply_alice(s, s.alice[x][a]);
            const auto v = detail::apply_bob(s, s.bob[x][a]);
            bool zero = true;
            double sq = 0;
            for (std::size_t i = 0; i < u.size(); ++i) {
                const T d = u[i] - v[i];
                if (!ScalarTraits<T>::is_zero(d, 0.0)) zero = false;
                sq += std::norm(ScalarTraits<T>::to_complex(d));
            }
            r.max_defect = std::max(r.max_defect, std::sqrt(sq));
            if (!zero) r.exact_zero = false;
        }
    return r;
}

struct ObservableReport {
    double observable = 0;          // max |M(x)^2 - 1| and |N(x)^2 - 1| (Frobenius)
    double row_product = 0;         // max |prod_{k in I_i} N(x_k) psi - psi|
    double commutation = 0;         // max |[N(x_k), N(x_l)] psi| and same for M, k,l in a row
    double state_consistency = 0;   // max |M(x_i) psi - N(x_i) psi|
    double grouped_consistency = 0; // max |M_{i,k}^{(c)} psi - M_{x_k}^{(0..0,c)} psi|
    double max() const { return std::max({observable, row_product, commutation, state_consistency, grouped_consistency}); }
};

inline double frobenius(const FloatMatrix& m) {
    double s = 0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) s += std::norm(m(i, j));
    return std::sqrt(s);
}

template <class T>
ObservableReport extract_solution_observables(const Strategy<T>& exact_or_float, const BinaryLinearSystem& A,
                                              double tol = kDefaultTolerance) {
    FloatStrategy s;
    if constexpr (ScalarTraits<T>::exact) s = to_float(exact_or_float);
    else s = exact_or_float;
    if (!is_good(s, tol)) throw NotGoodStrategy("extract_solution_observables needs a good strategy");
    const int kappa = A.kappa().value();
    const std::size_t D = s.state_dim();
    const FloatMatrix I = FloatMatrix::identity(D);
    const unsigned zero_ans = 0, one_ans = 1;  // (0,..,0,0) and (0,..,0,1)
    const std::size_t a0 = label_index(s.scenario.A, bits_label(zero_ans, kappa));
    const std::size_t a1 = label_index(s.scenario.A, bits_label(one_ans, kappa));

    std::vector<FloatMatrix> Mx, Nx;
    for (int j = 0; j < A.n(); ++j) {
        const std::size_t qa = label_index(s.scenario.X, var_label(j)), qb = label_index(s.scenario.Y, var_label(j));
        Mx.push_back(full_alice(s, qa, a0) - full_alice(s, qa, a1));
        Nx.push_back(full_bob(s, qb, a0) - full_bob(s, qb, a1));
    }
    ObservableReport r;
    const auto& psi = s.state;
    for (int j = 0; j < A.n(); ++j) {
        r.observable = std::max({r.observable, frobenius(Mx[j] * Mx[j] - I), frobenius(Nx[j] * Nx[j] - I)});
        r.state_consistency = std::max(r.state_consistency, norm(Mx[j].apply(psi) - Nx[j].apply(psi)));
    }
    for (int i = 0; i < A.m(); ++i) {
        std::vector<Complex> v = psi;
        for (int k : A.row(i)) v = Nx[k].apply(v);
        r.row_product = std::max(r.row_product, norm(v - psi));
        for (std::size_t u = 0; u < A.row(i).size(); ++u)
            for (std::size_t w = u + 1; w < A.row(i).size(); ++w) {
                const int k = A.row(i)[u], l = A.row(i)[w];
                r.commutation = std::max(r.commutation, norm((Nx[k] * Nx[l] - Nx[l] * Nx[k]).apply(psi)));
                r.commutation = std::max(r.commutation, norm((Mx[k] * Mx[l] - Mx[l] * Mx[k]).apply(psi)));
            }
        // grouped observables from the row question
        const std::size_t qi = label_index(s.scenario.X, row_label(i));
        for (int k : A.row(i)) {
            const int pos = A.phi(i, k);
            const std::size_t qk = label_index(s.scenario.X, var_label(k));
            for (int c = 0; c < 2; ++c) {
                FloatMatrix grouped(D, D);
                for (unsigned a = 0; a < (1u << kappa); ++a)
                    if (((a >> (kappa - 1 - pos)) & 1u) == static_cast<unsigned>(c)) grouped = grouped + full_alice(s, qi, a);
                const FloatMatrix single = full_alice(s, qk, c == 0 ? a0 : a1);
                r.grouped_consistency = std::max(r.grouped_consistency, norm(grouped.apply(psi) - single.apply(psi)));
            }
        }
    }
    return r;
}

// ---- JSON ----

inline nlohmann::json scenario_to_json(const Scenario& s) { return {{"X", s.X}, {"Y", s.Y}, {"A", s.A}, {"B", s.B}}; }

inline Scenario scenario_from_json(const nlohmann::json& j) {
    Scenario s{j.at("X").get<std::vector<std::string>>(), j.at("Y").get<std::vector<std::string>>(),
               j.at("A").get<std::vector<std::string>>(), j.at("B").get<std::vector<std::string>>()};
    s.check();
    return s;
}

inline nlohmann::json value_to_json(const CyclotomicNumber& v) { return v; }
inline nlohmann::json value_to_json(double v) { return format_double(v); }
inline nlohmann::json value_to_json(const Complex& v) { return {format_double(v.real()), format_double(v.imag())}; }

inline double double_from_json(const nlohmann::json& j) {
    if (j.is_number()) return j.get<double>();
    return std::stod(j.get<std::string>());
}

template <class V>
V value_from_json(const nlohmann::json& j);
template <>
inline CyclotomicNumber value_from_json<CyclotomicNumber>(const nlohmann::json& j) {
    return j.get<CyclotomicNumber>();
}
template <>
inline double value_from_json<double>(const nlohmann::json& j) {
    return double_from_json(j);
}
template <>
inline Complex value_from_json<Complex>(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2) throw std::invalid_argument("complex entries are [re, im]");
    return {double_from_json(j[0]), double_from_json(j[1])};
}

template <class V>
nlohmann::json correlation_to_json(const Correlation<V>& c) {
    nlohmann::json table = nlohmann::json::array();
    for (const auto& v : c.table()) table.push_back(value_to_json(v));
    return {{"version", kVersion},
            {"format", ValueTraits<V>::exact ? "exact" : "float"},
            {"scenario", scenario_to_json(c.scenario())},
            {"table", table}};
}

template <class V>
Correlation<V> correlation_from_json(const nlohmann::json& j) {
    Correlation<V> c(scenario_from_json(j.at("scenario")));
    const auto& t = j.at("table");
    if (t.size() != c.table().size()) throw std::invalid_argument("table size does not match scenario");
    std::size_t k = 0;
    for (std::size_t x = 0; x < c.nx(); ++x)
        for (std::size_t y = 0; y < c.ny(); ++y)
            for (std::size_t a = 0; a < c.na(); ++a)
                for (std::size_t b = 0; b < c.nb(); ++b) c.at(x, y, a, b) = value_from_json<V>(t[k++]);
    return c;
}

template <class T>
nlohmann::json matrix_to_json(const DenseMatrix<T>& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        nlohmann::json r = nlohmann::json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(value_to_json(m(i, j)));
        rows.push_back(r);
    }
    return rows;
}

template <class T>
DenseMatrix<T> matrix_from_json(const nlohmann::json& j) {
    const std::size_t r = j.size(), c = r ? j[0].size() : 0;
    DenseMatrix<T> m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
        if (j[i].size() != c) throw std::invalid_argument("ragged matrix");
        for (std::size_t k = 0; k < c; ++k) m(i, k) = value_from_json<T>(j[i][k]);
    }
    return m;
}

template <class T>
nlohmann::json strategy_to_json(const Strategy<T>& s) {
    auto fam = [](const std::vector<std::vector<DenseMatrix<T>>>& f) {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& ms : f) {
            nlohmann::json q = nlohmann::json::array();
            for (const auto& m : ms) q.push_back(matrix_to_json(m));
            j.push_back(q);
        }
        return j;
    };
    nlohmann::json st = nlohmann::json::array();
    for (const auto& v : s.state) st.push_back(value_to_json(v));
    return {{"version", kVersion},
            {"format", ScalarTraits<T>::exact ? "exact" : "float"},
            {"mode", s.mode == StrategyMode::Tensor ? "tensor" : "commuting"},
            {"dimension", {s.dim_a, s.dim_b}},
            {"state", st},
            {"scenario", scenario_to_json(s.scenario)},
            {"alice", fam(s.alice)},
            {"bob", fam(s.bob)}};
}

template <class T>
Strategy<T> strategy_from_json(const nlohmann::json& j) {
    Strategy<T> s;
    s.mode = j.at("mode").get<std::string>() == "tensor" ? StrategyMode::Tensor : StrategyMode::Commuting;
    s.dim_a = j.at("dimension").at(0).get<std::size_t>();
    s.dim_b = j.at("dimension").at(1).get<std::size_t>();
    for (const auto& v : j.at("state")) s.state.push_back(value_from_json<T>(v));
    s.scenario = scenario_from_json(j.at("scenario"));
    for (const auto& q : j.at("alice")) {
        s.alice.emplace_back();
        for (const auto& m : q) s.alice.back().push_back(matrix_from_json<T>(m));
    }
    for (const auto& q : j.at("bob")) {
        s.bob.emplace_back();
        for (const auto& m : q) s.bob.back().push_back(matrix_from_json<T>(m));
    }
    return s;
}

}  // namespace qcorr
